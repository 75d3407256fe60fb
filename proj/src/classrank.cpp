#include "mverse/classrank.hpp"

#include <unordered_map>
#include <unordered_set>

namespace mverse {

namespace {

struct Memo {
  std::unordered_set<std::uint32_t> base;
  // (set id, n) -> result
  std::unordered_map<std::uint64_t, bool> cache;

  bool test(HfSet x, std::size_t n) {
    if (n == 0) return base.count(x.id()) > 0;
    const std::uint64_t key = (static_cast<std::uint64_t>(x.id()) << 8) | (n & 0xff);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    bool ok = true;
    for (HfSet m : hf_members(x)) {
      if (!test(m, n - 1)) {
        ok = false;
        break;
      }
    }
    cache.emplace(key, ok);
    return ok;
  }
};

Memo make_memo(const std::vector<HfSet>& base) {
  Memo memo;
  for (HfSet b : base) memo.base.insert(b.id());
  return memo;
}

std::optional<std::size_t> minimal_rank(HfSet x, const std::vector<HfSet>& base,
                                        std::size_t guard) {
  Memo memo = make_memo(base);
  for (std::size_t n = 0; n <= guard; ++n) {
    if (memo.test(x, n)) return n;
  }
  return std::nullopt;
}

}  // namespace

bool in_iterated_powerclass(HfSet x, const std::vector<HfSet>& base, std::size_t n,
                            std::size_t guard) {
  if (n > guard) {
    throw GuardError("iterated powerclass depth " + std::to_string(n) +
                     " exceeds the guard " + std::to_string(guard));
  }
  Memo memo = make_memo(base);
  return memo.test(x, n);
}

std::optional<std::size_t> good_rank(HfSet x, const Universe& v, std::size_t guard) {
  return minimal_rank(x, v.carrier, guard);
}

bool Classification::strange_within_bounds() const {
  if (pseudo_good || esoteric) return false;
  for (const auto& [name, rank] : good) {
    (void)name;
    if (rank) return false;
  }
  return true;
}

Classification classify(HfSet x, const AmbientModel& m, std::size_t guard) {
  Classification c;
  c.guard = guard;
  for (const Universe& u : m.multiverse) {
    c.good[u.name] = good_rank(x, u, guard);
  }
  std::vector<HfSet> union_base;  // members of ∪M: every carrier element
  std::vector<HfSet> m_base;      // members of M: the carrier sets
  for (const Universe& u : m.multiverse) {
    union_base.insert(union_base.end(), u.carrier.begin(), u.carrier.end());
    m_base.push_back(u.carrier_set());
  }
  canonicalize(union_base);
  canonicalize(m_base);
  c.pseudo_good = minimal_rank(x, union_base, guard);
  c.esoteric = minimal_rank(x, m_base, guard);
  return c;
}

}  // namespace mverse
