#pragma once

// Defined-term unfolding, relativization, and brute-force Tarskian
// evaluation over finite structures.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mverse/formula.hpp"
#include "mverse/hf.hpp"

namespace mverse {

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

class ArityError : public std::runtime_error {
 public:
  explicit ArityError(const std::string& what) : std::runtime_error(what) {}
};

/// A finite binary relation on HF sets, used for explicit ∈_V relations.
class PairRel {
 public:
  void add(HfSet a, HfSet b);
  bool contains(HfSet a, HfSet b) const;
  std::size_t size() const { return pairs_.size(); }
  /// Entries in a deterministic order.
  std::vector<std::pair<HfSet, HfSet>> entries() const;
  bool operator==(const PairRel&) const = default;

 private:
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs_;
};

/// Finite structure view: quantifiers range over `domain`; untagged
/// membership atoms use `membership` when present and true ∈ otherwise;
/// `in_V`-tagged atoms resolve through `internal_rels`.
struct Structure {
  std::vector<HfSet> domain;  // canonical order
  std::optional<PairRel> membership;
  std::map<std::string, HfSet> constants;
  std::map<std::string, PairRel> internal_rels;
};

using Assignment = std::map<std::string, HfSet>;

struct EvalResult {
  bool value = false;
  /// Witness (for true leading existentials) or counterexample (for false
  /// leading universals): variable bindings for the outermost quantifier
  /// block, guard conjuncts/antecedents skipped.
  std::vector<std::pair<std::string, HfSet>> trail;
  /// Number of innermost-matrix evaluations performed.
  std::uint64_t assignments = 0;
};

/// Standard Tarskian truth by exhaustive quantifier expansion. Quantifiers
/// guarded as `forall x. x in C -> ...` / `exists x. x in C & ...` with a
/// constant or literal C iterate only over C's members, which is what keeps
/// relativized formulas cheap inside large ambient domains.
EvalResult evaluate(const Structure& s, const Formula& f, const Assignment& a = {});

/// Eliminates Subset, PairEq and bounded-quantifier sugar; the result
/// contains only core nodes. Core input is returned unchanged (same node).
FormulaPtr unfold_defined_terms(const FormulaPtr& f);

enum class MembershipMode { Ambient, Internal };

/// Rewrites quantifiers to range over the universe named by
/// `universe_const` (∀x.φ becomes ∀x(x ∈ V → φ), ∃ dually). In Internal
/// mode every membership atom between individuals is retagged to evaluate
/// through the universe's own relation; guard atoms and atoms mentioning
/// the universe constant itself stay ambient. Equality is untouched.
/// Requires core input.
FormulaPtr relativize(const FormulaPtr& f, const std::string& universe_const,
                      MembershipMode mode);

/// Capture-avoiding substitution of free variable occurrences.
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, Term>& subst);

enum class SchemaKind { Separation, Replacement, ClassSeparation };

/// Builds a closed axiom instance from a slot formula.
///
/// Separation / ClassSeparation take one slot variable and produce
///   ∀(params…) ∀Z ∃A ∀X (X ∈ A ↔ (X ∈ Z ∧ φ(X, params…)));
/// Replacement takes two slot variables (x, y) and produces
///   ∀(params…) ∀a (∀x(x∈a → ∃y φ) → ∃b ∀c (c ∈ b ↔ ∃x(x∈a ∧ φ(x, c)))).
///
/// Free variables of phi beyond the slots are parameters: bindings map them
/// (or the schema's own source variable, "Z" / "a") to literals; unbound
/// parameters are universally quantified in front. Template variables are
/// freshly renamed, so capture is impossible.
FormulaPtr instantiate_schema(SchemaKind kind, const FormulaPtr& phi,
                              const std::vector<std::string>& slots,
                              const std::map<std::string, HfSet>& bindings = {});

}  // namespace mverse
