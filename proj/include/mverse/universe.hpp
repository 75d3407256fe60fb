#pragma once

// Universes: a finite carrier plus an explicit membership relation on it.

#include <string>
#include <unordered_set>
#include <vector>

#include "mverse/hf.hpp"
#include "mverse/logic.hpp"

namespace mverse {

struct Universe {
  std::string name;
  std::vector<HfSet> carrier;  // canonical order, duplicate-free
  PairRel membership;          // ⊆ carrier × carrier

  bool contains(HfSet s) const;
  /// The carrier as a single HF set.
  HfSet carrier_set() const;

 private:
  mutable std::unordered_set<std::uint32_t> index_;  // lazily built
};

/// Universe with the given carrier and true ∈ restricted to it.
Universe make_standard_universe(std::string name, std::vector<HfSet> members);

/// Universe with an explicit membership relation; pairs outside
/// carrier × carrier are rejected.
Universe make_universe(std::string name, std::vector<HfSet> members, PairRel rel);

/// Carrier = all HF sets of rank < k with true membership. Materialized
/// fully; k above `max_rank` is refused (the next fragment has 2^65536
/// elements).
Universe build_rank_fragment(std::size_t k, std::size_t max_rank = 5);

struct UniverseProperties {
  bool standard = false;    // ∈_V agrees with true ∈ on the carrier
  bool transitive = false;  // members of carrier elements are carrier elements
  bool complete = false;    // transitive and closed under subsets of elements
};

/// Computed fresh on every call; `subset_budget` caps the subset enumeration
/// the completeness check may perform.
UniverseProperties universe_properties(const Universe& u,
                                       std::size_t subset_budget = std::size_t{1} << 22);

/// The universe as an evaluation structure: domain = carrier, membership =
/// its explicit relation.
Structure universe_structure(const Universe& u);

}  // namespace mverse
