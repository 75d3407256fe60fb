#pragma once

// Shared test utilities: deterministic HF generators, a powerclass
// materializing oracle, and the Hintikka-sentence oracle for EF agreement.
// Everything here is independent of the implementation paths it checks:
// the oracles recompute answers from definitions.

#include <algorithm>
#include <random>
#include <vector>

#include "mverse/ef.hpp"
#include "mverse/logic.hpp"
#include "mverse/universe.hpp"

namespace testsupport {

using namespace mverse;

/// Deterministic random HF set with rank <= max_rank and at most max_width
/// members per level.
inline HfSet random_hf(std::mt19937& rng, std::size_t max_rank, std::size_t max_width = 4) {
  if (max_rank == 0) return empty_set();
  std::uniform_int_distribution<std::size_t> width(0, max_width);
  std::uniform_int_distribution<std::size_t> coin(0, 2);
  const std::size_t n = width(rng);
  std::vector<HfSet> members;
  for (std::size_t i = 0; i < n; ++i) {
    // bias toward shallow members so sizes stay tame
    const std::size_t r = coin(rng) == 0 ? max_rank - 1 : (max_rank > 1 ? max_rank - 2 : 0);
    members.push_back(random_hf(rng, r, max_width));
  }
  return canonical_set(members);
}

/// Independent rank oracle: literal recursion on the definition.
inline std::size_t rank_oracle(HfSet s) {
  std::size_t r = 0;
  for (HfSet m : hf_members(s)) r = std::max(r, rank_oracle(m) + 1);
  return r;
}

/// Materializing oracle for x ∈ P^n(base): powerclasses are built for
/// n - 1 levels (once, on construction) and the last step is a subset
/// check. Feasible for |base| <= 4, n <= 3.
class IteratedPowerclassOracle {
 public:
  IteratedPowerclassOracle(std::vector<HfSet> base, std::size_t max_n) {
    canonicalize(base);
    levels_.push_back(base);  // members of P^0
    for (std::size_t i = 0; i + 1 < max_n; ++i) {
      const HfSet pw = powerset(canonical_set(levels_.back()), std::size_t{1} << 20);
      levels_.emplace_back(hf_members(pw).begin(), hf_members(pw).end());
    }
  }

  bool contains(HfSet x, std::size_t n) const {
    if (n == 0) {
      return std::binary_search(levels_[0].begin(), levels_[0].end(), x, hf_less);
    }
    const auto& level = levels_[n - 1];  // members of P^(n-1)
    for (HfSet m : hf_members(x)) {
      if (!std::binary_search(level.begin(), level.end(), m, hf_less)) return false;
    }
    return true;
  }

 private:
  std::vector<std::vector<HfSet>> levels_;
};

/// Hintikka characteristic sentence of depth k for an ∈-structure: a
/// sentence true of `u` such that any structure satisfying it agrees with u
/// on every sentence of quantifier rank <= k.
inline FormulaPtr hintikka_sentence(const Universe& u, std::size_t k) {
  struct Builder {
    const Universe& u;

    FormulaPtr atomic_type(const std::vector<HfSet>& tuple) {
      std::vector<FormulaPtr> parts;
      auto var = [](std::size_t i) { return Term::var("x" + std::to_string(i)); };
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        for (std::size_t j = 0; j < tuple.size(); ++j) {
          FormulaPtr atom = f_member(var(i), var(j));
          parts.push_back(u.membership.contains(tuple[i], tuple[j]) ? atom : f_not(atom));
          if (i < j) {
            FormulaPtr eq = f_equal(var(i), var(j));
            parts.push_back(tuple[i] == tuple[j] ? eq : f_not(eq));
          }
        }
      }
      if (parts.empty()) {
        // empty tuple: the vacuous type
        return f_forall("x0", f_equal(Term::var("x0"), Term::var("x0")));
      }
      return f_and_all(parts);
    }

    FormulaPtr type(std::vector<HfSet>& tuple, std::size_t k) {
      if (k == 0) return atomic_type(tuple);
      const std::string next = "x" + std::to_string(tuple.size());
      std::vector<FormulaPtr> exist_parts;
      std::vector<FormulaPtr> cover_parts;
      std::vector<std::string> seen;
      for (HfSet a : u.carrier) {
        tuple.push_back(a);
        FormulaPtr t = type(tuple, k - 1);
        tuple.pop_back();
        const std::string text = to_text(*t);
        if (std::find(seen.begin(), seen.end(), text) != seen.end()) continue;
        seen.push_back(text);
        exist_parts.push_back(f_exists(next, t));
        cover_parts.push_back(t);
      }
      if (exist_parts.empty()) {
        // empty carrier: nothing exists
        return f_forall(next, f_not(f_equal(Term::var(next), Term::var(next))));
      }
      FormulaPtr exists_all = f_and_all(exist_parts);
      FormulaPtr covers = f_forall(next, f_or_all(cover_parts));
      return f_and(std::move(exists_all), std::move(covers));
    }
  };
  Builder b{u};
  std::vector<HfSet> tuple;
  return b.type(tuple, k);
}

/// Sentence-level EF oracle: a ≡_k b iff each structure satisfies the
/// other's depth-k Hintikka sentence.
inline bool ef_oracle(const Universe& a, const Universe& b, std::size_t k) {
  const FormulaPtr ha = hintikka_sentence(a, k);
  const FormulaPtr hb = hintikka_sentence(b, k);
  const Structure sa = universe_structure(a);
  const Structure sb = universe_structure(b);
  return evaluate(sb, *ha).value && evaluate(sa, *hb).value;
}

/// All transitive sub-universes (as standard universes) of a fragment with
/// carrier size <= max_size; used for substructure-transfer sweeps.
inline std::vector<Universe> transitive_subuniverses(const Universe& frag,
                                                     std::size_t max_size) {
  std::vector<Universe> out;
  const std::size_t n = frag.carrier.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<HfSet> subset;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) subset.push_back(frag.carrier[i]);
    }
    if (subset.empty() || subset.size() > max_size) continue;
    Universe u = make_standard_universe("U" + std::to_string(mask), subset);
    if (universe_properties(u).transitive) out.push_back(std::move(u));
  }
  return out;
}

}  // namespace testsupport
