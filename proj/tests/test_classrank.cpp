#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include "mverse/classrank.hpp"

using namespace mverse;
using testsupport::IteratedPowerclassOracle;

namespace {

const AmbientModel& weak() {
  static const AmbientModel m = build_weak_model();
  return m;
}

}  // namespace

TEST_CASE("iterated powerclass membership basics") {
  const std::vector<HfSet>& carrier = weak().multiverse[0].carrier;
  CHECK(in_iterated_powerclass(nat(2), carrier, 0));
  CHECK(in_iterated_powerclass(weak().multiverse[0].carrier_set(), carrier, 1));
  CHECK(in_iterated_powerclass(canonical_set({canonical_set({nat(3)})}), carrier, 1));
  CHECK(!in_iterated_powerclass(nat(7), carrier, 0));
  CHECK_THROWS_AS(in_iterated_powerclass(nat(1), carrier, 9), GuardError);
}

TEST_CASE("good rank on the weak universe") {
  const Universe& v = weak().multiverse[0];
  CHECK(good_rank(nat(2), v) == 0);           // carrier element
  CHECK(good_rank(v.carrier_set(), v) == 1);  // the universe itself

  // Pure HF material is always eventually good: powerclass iteration is
  // monotone, so V_n lands inside P^n(base) for any base. {7} needs five
  // steps (7 itself needs four: its member 6 needs three, 5 two, 4 one).
  CHECK(good_rank(canonical_set({nat(7)}), v) == 5);
  CHECK(!in_iterated_powerclass(canonical_set({nat(7)}), v.carrier, 4));
  CHECK(!good_rank(canonical_set({nat(7)}), v, 4));  // guard cuts the search
}

TEST_CASE("classification of the paper-level examples") {
  const Universe& v = weak().multiverse[0];
  const HfSet vset = v.carrier_set();
  const HfSet mset = weak().multiverse_set();

  const Classification carrier_class = classify(vset, weak());
  CHECK(carrier_class.esoteric == 0);    // universes are esoteric of rank 0
  CHECK(carrier_class.good.at("V") == 1);
  CHECK(carrier_class.pseudo_good == 1);  // V is a set of carrier elements

  const Classification multiverse_class = classify(mset, weak());
  CHECK(multiverse_class.esoteric == 1);     // {V} is esoteric of rank 1
  CHECK(multiverse_class.pseudo_good == 2);  // M is pseudo-good of rank 2

  const Classification element = classify(nat(3), weak());
  CHECK(element.good.at("V") == 0);
  CHECK(element.esoteric == 4);  // down to {} (rank 1 over any base), then back up
}

TEST_CASE("strange within bounds") {
  // a set built from material no universe can reach: {7}
  const Classification c = classify(canonical_set({nat(7)}), weak(), 4);
  CHECK(!c.good.at("V"));
  CHECK(!c.pseudo_good);
  CHECK(!c.esoteric);
  CHECK(c.strange_within_bounds());
  CHECK(c.guard == 4);
}

TEST_CASE("minimality: the reported rank's predecessor fails") {
  std::mt19937 rng(53);
  const std::vector<HfSet>& carrier = weak().multiverse[0].carrier;
  int cases = 0;
  for (int i = 0; cases < 400 && i < 4000; ++i) {
    const HfSet x = testsupport::random_hf(rng, 4);
    const Classification c = classify(x, weak());
    if (c.good.at("V")) {
      const std::size_t n = *c.good.at("V");
      CHECK(in_iterated_powerclass(x, carrier, n));
      if (n > 0) CHECK(!in_iterated_powerclass(x, carrier, n - 1));
      ++cases;
    }
  }
  CHECK(cases >= 100);
}

TEST_CASE("recursion identity against the materializing oracle") {
  // result at n equals "every member passes at n-1", cross-checked against
  // explicitly materialized powerclasses on bases of size <= 4, n <= 3
  std::mt19937 rng(59);
  std::vector<HfSet> base;
  for (HfSet x : build_rank_fragment(3).carrier) base.push_back(x);  // 4 elements
  const IteratedPowerclassOracle oracle(base, 3);
  int cases = 0;
  while (cases < 1000) {
    const HfSet x = testsupport::random_hf(rng, 3);
    for (std::size_t n = 0; n <= 3; ++n) {
      const bool fast = in_iterated_powerclass(x, base, n);
      REQUIRE(fast == oracle.contains(x, n));
      if (n >= 1) {
        bool members_ok = true;
        for (HfSet m : hf_members(x)) {
          if (!in_iterated_powerclass(m, base, n - 1)) members_ok = false;
        }
        REQUIRE(fast == members_ok);
      }
    }
    ++cases;
  }
}

TEST_CASE("esoteric rank bounds pseudo-good rank") {
  // whenever the esoteric rank n exists, pseudo-good rank <= n + 1
  std::mt19937 rng(61);
  int cases = 0;
  int with_esoteric = 0;
  while (cases < 1200) {
    // mix of random material and material built over the carriers
    HfSet x;
    switch (rng() % 4) {
      case 0: x = testsupport::random_hf(rng, 3); break;
      case 1: x = weak().multiverse_set(); break;
      case 2: {
        std::vector<HfSet> parts{weak().multiverse[0].carrier_set()};
        if (rng() % 2) parts.push_back(testsupport::random_hf(rng, 2));
        x = canonical_set(parts);
        break;
      }
      default: {
        std::vector<HfSet> parts;
        const auto& carrier = weak().multiverse[0].carrier;
        for (std::size_t j = 0; j < 1 + rng() % 3; ++j) {
          parts.push_back(carrier[rng() % carrier.size()]);
        }
        x = canonical_set({canonical_set(parts)});
        break;
      }
    }
    const Classification c = classify(x, weak());
    if (c.esoteric) {
      ++with_esoteric;
      REQUIRE(c.pseudo_good.has_value());
      REQUIRE(*c.pseudo_good <= *c.esoteric + 1);
    }
    ++cases;
  }
  CHECK(with_esoteric >= 100);
}

TEST_CASE("classification across a multi-universe model") {
  const AmbientModel twins = build_twins_model();
  const HfSet one = nat(1);  // = {∅} = both carriers as sets
  const Classification c = classify(one, twins);
  CHECK(c.good.at("A") == 1);  // {∅} ⊆ carrier
  CHECK(c.good.at("B") == 1);
  CHECK(c.esoteric == 0);  // it IS a universe (both of them)
  CHECK(c.pseudo_good == 1);
}
