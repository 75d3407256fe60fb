#include "mverse/hf.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace mverse {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at offset " + std::to_string(offset)),
      offset_(offset) {}

namespace {

struct Node {
  std::vector<HfSet> members;  // canonical order, duplicate-free
  std::size_t rank;
};

std::uint64_t hash_members(const std::vector<HfSet>& ms) {
  std::uint64_t h = ms.size();
  for (HfSet m : ms) {
    h ^= m.id() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace

// Interning pool. The table is guarded by a mutex; nodes are immutable once
// created and the deque never relocates them, so readers holding a valid id
// do not need the lock.
class HfPool {
 public:
  static HfPool& instance() {
    static HfPool pool;
    return pool;
  }

  HfSet intern(std::vector<HfSet> members) {
    const std::uint64_t h = hash_members(members);
    std::lock_guard<std::mutex> lock(mutex_);
    auto [lo, hi] = table_.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
      if (nodes_[it->second].members == members) return HfSet(it->second);
    }
    std::size_t rank = 0;
    for (HfSet m : members) rank = std::max(rank, nodes_[m.id()].rank + 1);
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{std::move(members), rank});
    table_.emplace(h, id);
    return HfSet(id);
  }

  const Node& node(std::uint32_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  HfSet numeral(std::size_t n, std::size_t ceiling) {
    if (n > ceiling) {
      throw GuardError("nat(" + std::to_string(n) + ") exceeds ceiling " +
                       std::to_string(ceiling));
    }
    std::lock_guard<std::mutex> lock(nat_mutex_);
    while (nats_.size() <= n) {
      std::vector<HfSet> ms = nats_;  // nat(k) = {nat(0), ..., nat(k-1)}
      nats_.push_back(intern(std::move(ms)));
    }
    return nats_[n];
  }

 private:
  HfPool() { intern({}); }  // id 0 is the empty set
  std::mutex mutex_;
  std::deque<Node> nodes_;
  std::unordered_multimap<std::uint64_t, std::uint32_t> table_;
  std::mutex nat_mutex_;
  std::vector<HfSet> nats_;
};

HfSet::HfSet() : id_(0) { HfPool::instance(); }

HfSet HfSet::from_id(std::uint32_t id) { return HfSet(id); }

HfSet empty_set() { return HfSet(); }

int hf_compare(HfSet a, HfSet b) {
  if (a == b) return 0;
  const HfPool& pool = HfPool::instance();
  const Node& na = pool.node(a.id());
  const Node& nb = pool.node(b.id());
  if (na.rank != nb.rank) return na.rank < nb.rank ? -1 : 1;
  const std::size_t n = std::min(na.members.size(), nb.members.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = hf_compare(na.members[i], nb.members[i]);
    if (c != 0) return c;
  }
  if (na.members.size() != nb.members.size()) {
    return na.members.size() < nb.members.size() ? -1 : 1;
  }
  return 0;  // unreachable for interned values
}

bool hf_less(HfSet a, HfSet b) { return hf_compare(a, b) < 0; }

void canonicalize(std::vector<HfSet>& xs) {
  std::sort(xs.begin(), xs.end(), hf_less);
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

HfSet canonical_set(std::span<const HfSet> members) {
  std::vector<HfSet> ms(members.begin(), members.end());
  if (!std::is_sorted(ms.begin(), ms.end(), hf_less)) {
    std::sort(ms.begin(), ms.end(), hf_less);
  }
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  return HfPool::instance().intern(std::move(ms));
}

HfSet canonical_set(std::initializer_list<HfSet> members) {
  return canonical_set(std::span<const HfSet>(members.begin(), members.size()));
}

HfSet canonical_set(const std::vector<HfSet>& members) {
  return canonical_set(std::span<const HfSet>(members));
}

HfSet nat(std::size_t n, std::size_t ceiling) {
  return HfPool::instance().numeral(n, ceiling);
}

std::size_t hf_rank(HfSet s) { return HfPool::instance().node(s.id()).rank; }

std::span<const HfSet> hf_members(HfSet s) {
  const Node& n = HfPool::instance().node(s.id());
  return {n.members.data(), n.members.size()};
}

std::size_t hf_card(HfSet s) {
  return HfPool::instance().node(s.id()).members.size();
}

bool hf_contains(HfSet s, HfSet elem) {
  auto ms = hf_members(s);
  return std::binary_search(ms.begin(), ms.end(), elem, hf_less);
}

bool hf_subset(HfSet a, HfSet b) {
  for (HfSet m : hf_members(a)) {
    if (!hf_contains(b, m)) return false;
  }
  return true;
}

HfSet kuratowski_pair(HfSet x, HfSet y) {
  const HfSet sx = canonical_set({x});
  const HfSet sxy = canonical_set({x, y});
  return canonical_set({sx, sxy});
}

std::optional<std::pair<HfSet, HfSet>> decode_pair(HfSet p) {
  auto ms = hf_members(p);
  if (ms.size() == 1) {
    // {{x}} = (x, x)
    auto inner = hf_members(ms[0]);
    if (inner.size() != 1) return std::nullopt;
    return std::make_pair(inner[0], inner[0]);
  }
  if (ms.size() != 2) return std::nullopt;
  HfSet a = ms[0], b = ms[1];
  if (hf_card(a) == 2 && hf_card(b) == 1) std::swap(a, b);
  if (hf_card(a) != 1 || hf_card(b) != 2) return std::nullopt;
  const HfSet x = hf_members(a)[0];
  auto bm = hf_members(b);
  if (!hf_contains(b, x)) return std::nullopt;
  const HfSet y = (bm[0] == x) ? bm[1] : bm[0];
  return std::make_pair(x, y);
}

HfSet union_all(HfSet x) {
  std::vector<HfSet> out;
  for (HfSet a : hf_members(x)) {
    auto ms = hf_members(a);
    out.insert(out.end(), ms.begin(), ms.end());
  }
  return canonical_set(out);
}

HfSet binary_union(HfSet x, HfSet y) {
  return union_all(canonical_set({x, y}));
}

HfSet powerset(HfSet x, std::size_t ceiling) {
  const std::size_t n = hf_card(x);
  if (n >= 63 || (std::size_t{1} << n) > ceiling) {
    throw GuardError("powerset of a " + std::to_string(n) +
                     "-element set exceeds ceiling " + std::to_string(ceiling));
  }
  auto ms = hf_members(x);
  std::vector<HfSet> subsets;
  subsets.reserve(std::size_t{1} << n);
  std::vector<HfSet> scratch;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    scratch.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) scratch.push_back(ms[i]);
    }
    subsets.push_back(canonical_set(scratch));
  }
  return canonical_set(subsets);
}

HfSet cartesian_product(HfSet x, HfSet y, std::size_t ceiling) {
  const std::size_t nx = hf_card(x), ny = hf_card(y);
  if (nx != 0 && ny > ceiling / nx) {
    throw GuardError("cartesian product of sizes " + std::to_string(nx) + "x" +
                     std::to_string(ny) + " exceeds ceiling " +
                     std::to_string(ceiling));
  }
  std::vector<HfSet> pairs;
  pairs.reserve(nx * ny);
  for (HfSet a : hf_members(x)) {
    for (HfSet b : hf_members(y)) {
      pairs.push_back(kuratowski_pair(a, b));
    }
  }
  return canonical_set(pairs);
}

std::optional<std::size_t> as_numeral(HfSet s) {
  // Numerals are the only sets with rank == cardinality at every level;
  // the cheap rank check avoids building nat(n) for wide non-numerals.
  const std::size_t n = hf_card(s);
  if (hf_rank(s) != n) return std::nullopt;
  if (s == nat(n, std::max<std::size_t>(n, kDefaultCeiling))) return n;
  return std::nullopt;
}

std::vector<HfSet> transitive_closure(HfSet s) {
  std::vector<HfSet> out;
  std::vector<HfSet> stack(hf_members(s).begin(), hf_members(s).end());
  std::vector<bool> seen;
  auto mark = [&seen](HfSet v) {
    if (seen.size() <= v.id()) seen.resize(v.id() + 1, false);
    const bool was = seen[v.id()];
    seen[v.id()] = true;
    return was;
  };
  while (!stack.empty()) {
    const HfSet v = stack.back();
    stack.pop_back();
    if (mark(v)) continue;
    out.push_back(v);
    auto ms = hf_members(v);
    stack.insert(stack.end(), ms.begin(), ms.end());
  }
  canonicalize(out);
  return out;
}

namespace {

void print_plain(HfSet s, std::string& out) {
  out += '{';
  bool first = true;
  for (HfSet m : hf_members(s)) {
    if (!first) out += ", ";
    first = false;
    print_plain(m, out);
  }
  out += '}';
}

void print_sugared(HfSet s, std::string& out) {
  if (auto n = as_numeral(s); n && *n > 0) {
    out += std::to_string(*n);
    return;
  }
  out += '{';
  bool first = true;
  for (HfSet m : hf_members(s)) {
    if (!first) out += ", ";
    first = false;
    print_sugared(m, out);
  }
  out += '}';
}

struct LiteralParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos); }

  HfSet parse_value() {
    skip_ws();
    if (pos >= text.size()) fail("expected set literal");
    const char c = text[pos];
    if (c == '{') return parse_braces();
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_numeral();
    fail(std::string("unexpected character '") + c + "'");
  }

  HfSet parse_braces() {
    ++pos;  // '{'
    std::vector<HfSet> members;
    skip_ws();
    if (pos < text.size() && text[pos] == '}') {
      ++pos;
      return canonical_set(members);
    }
    while (true) {
      members.push_back(parse_value());
      skip_ws();
      if (pos >= text.size()) fail("unterminated set literal");
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (text[pos] == '}') {
        ++pos;
        return canonical_set(members);
      }
      fail("expected ',' or '}'");
    }
  }

  HfSet parse_numeral() {
    std::size_t n = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      n = n * 10 + static_cast<std::size_t>(text[pos] - '0');
      if (n > kDefaultCeiling) fail("numeral too large");
      ++pos;
    }
    return nat(n);
  }
};

}  // namespace

std::string to_string(HfSet s) {
  std::string out;
  print_plain(s, out);
  return out;
}

std::string to_string_sugared(HfSet s) {
  std::string out;
  print_sugared(s, out);
  return out;
}

HfSet parse_hf(std::string_view text) {
  LiteralParser p{text};
  const HfSet result = p.parse_value();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input after set literal");
  return result;
}

}  // namespace mverse
