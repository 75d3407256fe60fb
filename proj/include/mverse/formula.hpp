#pragma once

// First-order ∈-language: terms, formulas, concrete syntax.
//
// Core nodes: membership, equality, the propositional connectives, and the
// two quantifiers. Sugar nodes (subset, pair equality, bounded quantifiers)
// are eliminable via unfold_defined_terms in logic.hpp.
//
// Grammar (ASCII):
//   preamble     const V, M;          (declares constant names, optional)
//   quantifiers  forall x. f / exists x. f / forall x in V. f
//   connectives  ! & | -> <->         (precedence ! > & > | > -> > <->,
//                                      -> right-associative)
//   atoms        x in y / x = y / x sub y / a = (x, y)
//   terms        identifiers (declared constants or variables), decimal
//                numerals, and {...} set literals

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mverse/hf.hpp"

namespace mverse {

struct Term {
  enum class Kind { Var, Const, Lit };
  Kind kind = Kind::Var;
  std::string name;  // Var / Const
  HfSet value;       // Lit

  static Term var(std::string n) { return {Kind::Var, std::move(n), {}}; }
  static Term cnst(std::string n) { return {Kind::Const, std::move(n), {}}; }
  static Term lit(HfSet v) { return {Kind::Lit, {}, v}; }
  bool operator==(const Term& o) const {
    return kind == o.kind && name == o.name && value == o.value;
  }
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
 public:
  enum class Kind {
    Member,   // terms[0] ∈ terms[1]; `via` names a universe's membership
    Equal,    // terms[0] = terms[1]
    Subset,   // sugar: terms[0] ⊆ terms[1]
    PairEq,   // sugar: terms[0] = (terms[1], terms[2])
    Not,
    And,
    Or,
    Implies,
    Iff,
    ForAll,   // var, optional `bound` sugar (var ∈ bound), body = left
    Exists
  };

  Kind kind;
  std::vector<Term> terms;
  std::optional<std::string> via;  // Member only: evaluate through ∈_V
  std::string var;                 // quantifiers
  std::optional<Term> bound;       // bounded-quantifier sugar
  FormulaPtr left, right;          // body for Not / quantifiers is `left`

  bool is_quantifier() const { return kind == Kind::ForAll || kind == Kind::Exists; }
  bool is_atom() const {
    return kind == Kind::Member || kind == Kind::Equal || kind == Kind::Subset ||
           kind == Kind::PairEq;
  }
};

FormulaPtr f_member(Term a, Term b, std::optional<std::string> via = std::nullopt);
FormulaPtr f_equal(Term a, Term b);
FormulaPtr f_subset(Term a, Term b);
FormulaPtr f_pair_eq(Term a, Term x, Term y);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(FormulaPtr l, FormulaPtr r);
FormulaPtr f_or(FormulaPtr l, FormulaPtr r);
FormulaPtr f_implies(FormulaPtr l, FormulaPtr r);
FormulaPtr f_iff(FormulaPtr l, FormulaPtr r);
FormulaPtr f_forall(std::string var, FormulaPtr body);
FormulaPtr f_exists(std::string var, FormulaPtr body);
FormulaPtr f_forall_in(std::string var, Term bound, FormulaPtr body);
FormulaPtr f_exists_in(std::string var, Term bound, FormulaPtr body);

/// Conjunction / disjunction of a list; empty lists are not allowed.
FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs);
FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs);

bool structurally_equal(const Formula& a, const Formula& b);

/// Free variables, in sorted order.
std::vector<std::string> free_variables(const Formula& f);
/// Every name (free, bound, constant) mentioned anywhere in f.
std::set<std::string> all_names(const Formula& f);

/// True when f contains only core nodes (no Subset/PairEq/bounded sugar).
bool is_core(const Formula& f);

/// Maximum quantifier nesting depth.
std::size_t quantifier_rank(const Formula& f);

/// Concrete syntax, re-parseable for formulas without `via` tags; tagged
/// membership prints as `x in_V y`.
std::string to_text(const Formula& f);

struct ParsedFormula {
  FormulaPtr formula;
  std::set<std::string> constants;  // names declared in the preamble
};

/// Parses the grammar above. Identifiers not declared in a `const` preamble
/// (and not passed in `extra_constants`) are variables.
ParsedFormula parse_formula(std::string_view text,
                            const std::set<std::string>& extra_constants = {});

}  // namespace mverse
