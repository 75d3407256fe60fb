#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <thread>

#include "support.hpp"

#include "mverse/hf.hpp"

using namespace mverse;
using testsupport::random_hf;
using testsupport::rank_oracle;

TEST_CASE("canonical_set collapses duplicates and ignores order") {
  const HfSet e = empty_set();
  CHECK(canonical_set({e, e}) == canonical_set({e}));
  CHECK(hf_card(canonical_set({e, e})) == 1);
  CHECK(canonical_set({e, canonical_set({e})}) == nat(2));
  CHECK(canonical_set({canonical_set({e}), e}) == canonical_set({e, canonical_set({e})}));
}

TEST_CASE("von Neumann numerals") {
  CHECK(nat(0) == empty_set());
  CHECK(nat(2) == canonical_set({empty_set(), nat(1)}));
  CHECK(nat(3) == canonical_set({empty_set(), nat(1), nat(2)}));
  CHECK(as_numeral(nat(7)) == 7);
  CHECK(!as_numeral(canonical_set({nat(1)})));
  CHECK_THROWS_AS(nat(100, 10), GuardError);
}

TEST_CASE("rank matches the recursive oracle") {
  CHECK(hf_rank(empty_set()) == 0);
  CHECK(hf_rank(nat(2)) == 2);
  CHECK(hf_rank(canonical_set({nat(3)})) == 4);
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    const HfSet s = random_hf(rng, 4);
    CHECK(hf_rank(s) == rank_oracle(s));
  }
}

TEST_CASE("kuratowski pairs") {
  const HfSet e = empty_set();
  CHECK(kuratowski_pair(e, e) == canonical_set({canonical_set({e})}));
  const HfSet p12 = kuratowski_pair(nat(1), nat(2));
  CHECK(p12 == canonical_set({canonical_set({nat(1)}), canonical_set({nat(1), nat(2)})}));
  CHECK(kuratowski_pair(nat(2), nat(1)) != p12);
}

TEST_CASE("decode_pair inverts kuratowski_pair") {
  CHECK(decode_pair(kuratowski_pair(nat(1), nat(2))) ==
        std::make_pair(nat(1), nat(2)));
  CHECK(decode_pair(canonical_set({canonical_set({empty_set()})})) ==
        std::make_pair(empty_set(), empty_set()));
  CHECK(!decode_pair(nat(3)));
  CHECK(!decode_pair(empty_set()));
  // {{x},{y}} with x != y is not a pair
  CHECK(!decode_pair(canonical_set({canonical_set({nat(1)}), canonical_set({nat(2)})})));
}

TEST_CASE("pair round-trip and injectivity over a rank-bounded corpus") {
  std::mt19937 rng(11);
  std::vector<std::pair<HfSet, HfSet>> seen;
  int cases = 0;
  while (cases < 1200) {
    const HfSet x = random_hf(rng, 3);
    const HfSet y = random_hf(rng, 3);
    const HfSet p = kuratowski_pair(x, y);
    REQUIRE(decode_pair(p) == std::make_pair(x, y));
    seen.emplace_back(x, y);
    ++cases;
  }
  // injectivity: equal pairs must come from equal components
  for (std::size_t i = 0; i + 1 < seen.size(); i += 2) {
    const auto& [x, y] = seen[i];
    const auto& [u, v] = seen[i + 1];
    if (kuratowski_pair(x, y) == kuratowski_pair(u, v)) {
      CHECK(x == u);
      CHECK(y == v);
    }
  }
}

TEST_CASE("union_all") {
  CHECK(union_all(empty_set()) == empty_set());
  CHECK(union_all(nat(3)) == nat(2));
  CHECK(union_all(canonical_set({nat(3)})) == nat(3));
}

TEST_CASE("binary-union lemma over a generated corpus") {
  std::mt19937 rng(13);
  int cases = 0;
  while (cases < 1100) {
    const HfSet x = random_hf(rng, 4);
    const HfSet y = random_hf(rng, 4);
    const HfSet u = binary_union(x, y);
    std::vector<HfSet> zs(hf_members(u).begin(), hf_members(u).end());
    zs.push_back(random_hf(rng, 3));
    zs.push_back(empty_set());
    for (HfSet z : zs) {
      REQUIRE(hf_contains(u, z) == (hf_contains(x, z) || hf_contains(y, z)));
    }
    ++cases;
  }
}

TEST_CASE("powerset") {
  CHECK(powerset(empty_set()) == canonical_set({empty_set()}));
  CHECK(powerset(nat(1)) == canonical_set({empty_set(), nat(1)}));

  // enumerate subsets of nat(2) independently
  const HfSet p2 = powerset(nat(2));
  CHECK(hf_card(p2) == 4);
  std::vector<HfSet> expect = {empty_set(), nat(1), canonical_set({nat(1)}), nat(2)};
  for (HfSet s : expect) CHECK(hf_contains(p2, s));
}

TEST_CASE("powerclass membership iff subset") {
  std::mt19937 rng(17);
  int cases = 0;
  while (cases < 1100) {
    const HfSet x = random_hf(rng, 3);
    const HfSet p = powerset(x);
    const HfSet z = random_hf(rng, 3);
    REQUIRE(hf_contains(p, z) == hf_subset(z, x));
    for (HfSet sub : hf_members(p)) REQUIRE(hf_subset(sub, x));
    ++cases;
  }
}

TEST_CASE("powerset guard") {
  std::vector<HfSet> wide;
  for (std::size_t i = 0; i < 17; ++i) wide.push_back(nat(i));
  CHECK_THROWS_AS(powerset(canonical_set(wide)), GuardError);
}

TEST_CASE("cartesian products") {
  CHECK(cartesian_product(empty_set(), nat(3)) == empty_set());
  CHECK(cartesian_product(nat(1), nat(1)) ==
        canonical_set({kuratowski_pair(empty_set(), empty_set())}));
  CHECK(hf_card(cartesian_product(nat(2), nat(2))) == 4);
  CHECK_THROWS_AS(cartesian_product(nat(10), nat(10), 50), GuardError);
}

TEST_CASE("rank algebra") {
  std::mt19937 rng(19);
  for (int i = 0; i < 400; ++i) {
    const HfSet x = random_hf(rng, 3);
    const HfSet y = random_hf(rng, 3);
    const std::size_t rx = hf_rank(x), ry = hf_rank(y);
    if (x == y) {
      CHECK(hf_rank(kuratowski_pair(x, y)) == 2 + rx);
    } else {
      CHECK(hf_rank(kuratowski_pair(x, y)) == 2 + std::max(rx, ry));
    }
    CHECK(hf_rank(cartesian_product(x, y)) <= 3 + std::max(rx, ry));
  }
}

TEST_CASE("extensionality as representation identity") {
  std::mt19937 rng(23);
  for (int i = 0; i < 1000; ++i) {
    std::vector<HfSet> ms;
    const std::size_t n = rng() % 5;
    for (std::size_t j = 0; j < n; ++j) ms.push_back(random_hf(rng, 3));
    std::vector<HfSet> shuffled = ms;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.insert(shuffled.end(), ms.begin(), ms.end());  // duplicates
    REQUIRE(canonical_set(ms) == canonical_set(shuffled));
  }
}

TEST_CASE("canonical order is a strict total order, members sorted") {
  std::mt19937 rng(29);
  for (int i = 0; i < 300; ++i) {
    const HfSet a = random_hf(rng, 3), b = random_hf(rng, 3), c = random_hf(rng, 3);
    CHECK((hf_compare(a, b) == 0) == (a == b));
    if (hf_less(a, b) && hf_less(b, c)) CHECK(hf_less(a, c));
    auto ms = hf_members(a);
    for (std::size_t j = 1; j < ms.size(); ++j) CHECK(hf_less(ms[j - 1], ms[j]));
  }
}

TEST_CASE("literal grammar") {
  CHECK(parse_hf("{}") == empty_set());
  CHECK(parse_hf("2") == nat(2));
  CHECK(parse_hf("{ {}, {{}} }") == nat(2));
  CHECK(parse_hf("{1, {}, 1}") == nat(2));  // duplicates and order canonicalize
  CHECK(parse_hf("{{}, 1, 2, 3, {3}}") ==
        canonical_set({empty_set(), nat(1), nat(2), nat(3), canonical_set({nat(3)})}));
  CHECK_THROWS_AS(parse_hf("{1, "), ParseError);
  CHECK_THROWS_AS(parse_hf("{} junk"), ParseError);
  try {
    parse_hf("{1, ");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("printing round-trips") {
  std::mt19937 rng(31);
  for (int i = 0; i < 500; ++i) {
    const HfSet s = random_hf(rng, 4);
    CHECK(parse_hf(to_string(s)) == s);
    CHECK(parse_hf(to_string_sugared(s)) == s);
  }
  CHECK(to_string_sugared(nat(3)) == "3");
  CHECK(to_string(empty_set()) == "{}");
  CHECK(to_string_sugared(canonical_set({nat(3)})) == "{3}");
}

TEST_CASE("transitive closure") {
  const HfSet s = canonical_set({nat(2)});
  const auto tc = transitive_closure(s);
  CHECK(tc.size() == 3);  // {}, 1, 2
  CHECK(std::find(tc.begin(), tc.end(), nat(2)) != tc.end());
  CHECK(std::find(tc.begin(), tc.end(), empty_set()) != tc.end());
}

TEST_CASE("interning is safe under concurrent construction") {
  std::vector<std::thread> workers;
  std::vector<HfSet> results(8);
  for (int t = 0; t < 8; ++t) {
    workers.emplace_back([t, &results] {
      std::mt19937 rng(101 + t % 4);  // pairs of threads build equal sets
      HfSet last;
      for (int i = 0; i < 2000; ++i) {
        last = testsupport::random_hf(rng, 3);
      }
      results[t] = last;
    });
  }
  for (auto& w : workers) w.join();
  for (int t = 0; t < 4; ++t) {
    CHECK(results[t] == results[t + 4]);  // same seed, same canonical instance
  }
}
