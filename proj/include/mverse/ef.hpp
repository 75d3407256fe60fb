#pragma once

// Substructure and depth-bounded elementary-equivalence checking via
// Ehrenfeucht-Fraissé games on ∈-structures.

#include <optional>
#include <vector>

#include "mverse/universe.hpp"

namespace mverse {

/// u's carrier is contained in w's and u's membership is w's restricted to
/// u's carrier.
bool is_substructure(const Universe& u, const Universe& w);

/// Duplicator wins the depth-round EF game on the two structures, i.e. they
/// agree on every sentence of quantifier rank <= depth.
bool ef_equivalent(const Universe& a, const Universe& b, std::size_t depth,
                   std::size_t depth_max = 4);

/// A sentence of quantifier rank <= depth that is true in `a` and false in
/// `b`, extracted from the winning Spoiler strategy; empty when the
/// structures are equivalent at this depth.
std::optional<FormulaPtr> distinguishing_formula(const Universe& a, const Universe& b,
                                                 std::size_t depth,
                                                 std::size_t depth_max = 4);

struct ElementarityEntry {
  std::string formula;
  Assignment params;
  bool left_value = false;
  bool right_value = false;
};

struct ElementarityReport {
  std::size_t checked = 0;
  std::vector<ElementarityEntry> disagreements;
  bool pass() const { return disagreements.empty(); }
};

/// For each formula and each parameter tuple drawn from u's carrier (at most
/// tuple_cap tuples per formula, in canonical order), compares truth in u
/// and in w. Requires is_substructure(u, w).
ElementarityReport elementary_for(const Universe& u, const Universe& w,
                                  const std::vector<FormulaPtr>& formulas,
                                  std::size_t tuple_cap = 256);

}  // namespace mverse
