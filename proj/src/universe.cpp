#include "mverse/universe.hpp"

#include <algorithm>
#include <stdexcept>

namespace mverse {

bool Universe::contains(HfSet s) const {
  if (index_.empty() && !carrier.empty()) {
    for (HfSet c : carrier) index_.insert(c.id());
  }
  return index_.count(s.id()) > 0;
}

HfSet Universe::carrier_set() const { return canonical_set(carrier); }

Universe make_standard_universe(std::string name, std::vector<HfSet> members) {
  Universe u;
  u.name = std::move(name);
  u.carrier = std::move(members);
  canonicalize(u.carrier);
  for (HfSet b : u.carrier) {
    for (HfSet a : hf_members(b)) {
      if (u.contains(a)) u.membership.add(a, b);
    }
  }
  return u;
}

Universe make_universe(std::string name, std::vector<HfSet> members, PairRel rel) {
  Universe u;
  u.name = std::move(name);
  u.carrier = std::move(members);
  canonicalize(u.carrier);
  for (const auto& [a, b] : rel.entries()) {
    if (!u.contains(a) || !u.contains(b)) {
      throw std::invalid_argument("membership pair (" + to_string_sugared(a) + ", " +
                                  to_string_sugared(b) + ") lies outside the carrier");
    }
  }
  u.membership = std::move(rel);
  return u;
}

Universe build_rank_fragment(std::size_t k, std::size_t max_rank) {
  if (k > max_rank) {
    throw GuardError("rank fragment " + std::to_string(k) + " exceeds the materialization cap " +
                     std::to_string(max_rank));
  }
  std::vector<HfSet> level;  // all sets of rank < i
  if (k >= 1) level.push_back(empty_set());
  for (std::size_t i = 1; i < k; ++i) {
    // next level = all subsets of the current one
    const std::size_t n = level.size();
    std::vector<HfSet> next;
    next.reserve(std::size_t{1} << n);
    std::vector<HfSet> scratch;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      scratch.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (mask & (std::size_t{1} << j)) scratch.push_back(level[j]);
      }
      next.push_back(canonical_set(scratch));
    }
    level = std::move(next);
  }
  return make_standard_universe("V" + std::to_string(k), std::move(level));
}

UniverseProperties universe_properties(const Universe& u, std::size_t subset_budget) {
  UniverseProperties p;

  p.standard = true;
  for (const auto& [a, b] : u.membership.entries()) {
    if (!hf_contains(b, a)) {
      p.standard = false;
      break;
    }
  }
  if (p.standard) {
    for (HfSet b : u.carrier) {
      for (HfSet a : hf_members(b)) {
        if (u.contains(a) && !u.membership.contains(a, b)) {
          p.standard = false;
          break;
        }
      }
      if (!p.standard) break;
    }
  }

  p.transitive = true;
  for (HfSet b : u.carrier) {
    for (HfSet a : hf_members(b)) {
      if (!u.contains(a)) {
        p.transitive = false;
        break;
      }
    }
    if (!p.transitive) break;
  }

  if (!p.transitive) {
    p.complete = false;
    return p;
  }

  // Completeness enumerates every subset of every element, so budget it.
  std::size_t cost = 0;
  bool too_big = false;
  for (HfSet x : u.carrier) {
    const std::size_t n = hf_card(x);
    if (n >= 63 || (cost += (std::size_t{1} << n)) > subset_budget) {
      too_big = true;
      break;
    }
  }
  if (too_big) {
    // A full rank fragment is closed under subsets by construction; anything
    // else above the budget is refused rather than guessed.
    std::size_t max_rank = 0;
    for (HfSet x : u.carrier) max_rank = std::max(max_rank, hf_rank(x));
    const Universe frag = build_rank_fragment(max_rank + 1);
    if (frag.carrier == u.carrier) {
      p.complete = true;
      return p;
    }
    throw GuardError("completeness check would enumerate more than " +
                     std::to_string(subset_budget) + " subsets");
  }
  p.complete = true;
  for (HfSet x : u.carrier) {
    const HfSet pw = powerset(x, subset_budget);
    for (HfSet sub : hf_members(pw)) {
      if (!u.contains(sub)) {
        p.complete = false;
        break;
      }
    }
    if (!p.complete) break;
  }
  return p;
}

Structure universe_structure(const Universe& u) {
  Structure s;
  s.domain = u.carrier;
  s.membership = u.membership;
  return s;
}

}  // namespace mverse
