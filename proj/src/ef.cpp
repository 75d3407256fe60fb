#include "mverse/ef.hpp"

#include <algorithm>
#include <map>

namespace mverse {

bool is_substructure(const Universe& u, const Universe& w) {
  for (HfSet x : u.carrier) {
    if (!w.contains(x)) return false;
  }
  // equality of relations restricted to u's carrier
  for (const auto& [a, b] : u.membership.entries()) {
    if (!w.membership.contains(a, b)) return false;
  }
  for (const auto& [a, b] : w.membership.entries()) {
    if (u.contains(a) && u.contains(b) && !u.membership.contains(a, b)) return false;
  }
  return true;
}

namespace {

// Position in the game: the picks so far, pairwise. Order of picks does not
// matter for extendability, so positions are memoized as sorted pair sets.
using Position = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

struct GameSearch {
  const Universe& a;
  const Universe& b;
  std::map<std::pair<Position, std::size_t>, bool> memo;

  // Atomic agreement of a candidate extension with every existing pick.
  bool extends(const Position& pos, HfSet xa, HfSet xb) const {
    if (a.membership.contains(xa, xa) != b.membership.contains(xb, xb)) return false;
    for (const auto& [ia, ib] : pos) {
      const HfSet pa = HfSet::from_id(ia), pb = HfSet::from_id(ib);
      if ((pa == xa) != (pb == xb)) return false;
      if (a.membership.contains(pa, xa) != b.membership.contains(pb, xb)) return false;
      if (a.membership.contains(xa, pa) != b.membership.contains(xb, pb)) return false;
    }
    return true;
  }

  Position extended(Position pos, HfSet xa, HfSet xb) const {
    pos.emplace_back(xa.id(), xb.id());
    std::sort(pos.begin(), pos.end());
    return pos;
  }

  // Duplicator wins the k-round game from this (already consistent) position.
  bool duplicator_wins(const Position& pos, std::size_t k) {
    if (k == 0) return true;
    auto key = std::make_pair(pos, k);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool win = true;
    for (HfSet xa : a.carrier) {  // Spoiler moves on the left
      bool reply = false;
      for (HfSet xb : b.carrier) {
        if (extends(pos, xa, xb) && duplicator_wins(extended(pos, xa, xb), k - 1)) {
          reply = true;
          break;
        }
      }
      if (!reply) {
        win = false;
        break;
      }
    }
    if (win) {
      for (HfSet xb : b.carrier) {  // Spoiler moves on the right
        bool reply = false;
        for (HfSet xa : a.carrier) {
          if (extends(pos, xa, xb) && duplicator_wins(extended(pos, xa, xb), k - 1)) {
            reply = true;
            break;
          }
        }
        if (!reply) {
          win = false;
          break;
        }
      }
    }
    memo.emplace(std::move(key), win);
    return win;
  }
};

void check_depth(std::size_t depth, std::size_t depth_max) {
  if (depth > depth_max) {
    throw GuardError("EF depth " + std::to_string(depth) + " exceeds the configured maximum " +
                     std::to_string(depth_max));
  }
}

// Ordered picks (the formula extraction needs pick order for variable
// indices, unlike the win search).
struct Picks {
  std::vector<HfSet> left, right;
};

// A formula with free variables x0..x(n-1) that is true of `left` in a and
// false of `right` in b, following a winning Spoiler strategy; requires that
// Duplicator loses the k-round game from this position.
FormulaPtr spoiler_formula(GameSearch& g, const Picks& picks, std::size_t k);

FormulaPtr atomic_difference(const GameSearch& g, const Picks& picks) {
  const std::size_t n = picks.left.size();
  auto var = [](std::size_t i) { return Term::var("x" + std::to_string(i)); };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool in_a = g.a.membership.contains(picks.left[i], picks.left[j]);
      const bool in_b = g.b.membership.contains(picks.right[i], picks.right[j]);
      if (in_a != in_b) {
        FormulaPtr atom = f_member(var(i), var(j));
        return in_a ? atom : f_not(atom);
      }
      if (i < j) {
        const bool eq_a = picks.left[i] == picks.left[j];
        const bool eq_b = picks.right[i] == picks.right[j];
        if (eq_a != eq_b) {
          FormulaPtr atom = f_equal(var(i), var(j));
          return eq_a ? atom : f_not(atom);
        }
      }
    }
  }
  return nullptr;  // position is atomically consistent
}

Position to_position(const Picks& picks) {
  Position pos;
  for (std::size_t i = 0; i < picks.left.size(); ++i) {
    pos.emplace_back(picks.left[i].id(), picks.right[i].id());
  }
  std::sort(pos.begin(), pos.end());
  return pos;
}

FormulaPtr spoiler_formula(GameSearch& g, const Picks& picks, std::size_t k) {
  if (FormulaPtr atom = atomic_difference(g, picks)) return atom;
  // Position is consistent but Duplicator loses within k rounds, so k >= 1
  // and some Spoiler move defeats every reply.
  const Position pos = to_position(picks);
  const std::string next_var = "x" + std::to_string(picks.left.size());

  for (HfSet xa : g.a.carrier) {  // try Spoiler moves on the left
    bool winning = true;
    for (HfSet xb : g.b.carrier) {
      if (g.extends(pos, xa, xb) && g.duplicator_wins(g.extended(pos, xa, xb), k - 1)) {
        winning = false;
        break;
      }
    }
    if (!winning) continue;
    // ∃x(∧_b δ_b): true in a at xa, false in b at every reply.
    std::vector<FormulaPtr> parts;
    std::vector<std::string> seen;
    for (HfSet xb : g.b.carrier) {
      Picks next = picks;
      next.left.push_back(xa);
      next.right.push_back(xb);
      FormulaPtr d = spoiler_formula(g, next, k - 1);
      std::string text = to_text(*d);
      if (std::find(seen.begin(), seen.end(), text) == seen.end()) {
        seen.push_back(std::move(text));
        parts.push_back(std::move(d));
      }
    }
    if (parts.empty()) {  // b is empty: anything existential separates
      return f_exists(next_var, f_equal(Term::var(next_var), Term::var(next_var)));
    }
    return f_exists(next_var, f_and_all(parts));
  }

  for (HfSet xb : g.b.carrier) {  // Spoiler moves on the right
    bool winning = true;
    for (HfSet xa : g.a.carrier) {
      if (g.extends(pos, xa, xb) && g.duplicator_wins(g.extended(pos, xa, xb), k - 1)) {
        winning = false;
        break;
      }
    }
    if (!winning) continue;
    // ∀x(∨_a δ_a): true in a everywhere, false in b at xb.
    std::vector<FormulaPtr> parts;
    std::vector<std::string> seen;
    for (HfSet xa : g.a.carrier) {
      Picks next = picks;
      next.left.push_back(xa);
      next.right.push_back(xb);
      FormulaPtr d = spoiler_formula(g, next, k - 1);
      std::string text = to_text(*d);
      if (std::find(seen.begin(), seen.end(), text) == seen.end()) {
        seen.push_back(std::move(text));
        parts.push_back(std::move(d));
      }
    }
    if (parts.empty()) {  // a is empty: a universal falsehood separates
      return f_forall(next_var, f_not(f_equal(Term::var(next_var), Term::var(next_var))));
    }
    return f_forall(next_var, f_or_all(parts));
  }
  throw std::logic_error("spoiler strategy extraction out of moves");
}

}  // namespace

bool ef_equivalent(const Universe& a, const Universe& b, std::size_t depth,
                   std::size_t depth_max) {
  check_depth(depth, depth_max);
  GameSearch g{a, b, {}};
  return g.duplicator_wins({}, depth);
}

std::optional<FormulaPtr> distinguishing_formula(const Universe& a, const Universe& b,
                                                 std::size_t depth, std::size_t depth_max) {
  check_depth(depth, depth_max);
  GameSearch g{a, b, {}};
  if (g.duplicator_wins({}, depth)) return std::nullopt;
  return spoiler_formula(g, Picks{}, depth);
}

ElementarityReport elementary_for(const Universe& u, const Universe& w,
                                  const std::vector<FormulaPtr>& formulas,
                                  std::size_t tuple_cap) {
  if (!is_substructure(u, w)) {
    throw std::invalid_argument("elementary_for requires a substructure pair");
  }
  ElementarityReport report;
  const Structure su = universe_structure(u);
  const Structure sw = universe_structure(w);
  for (const FormulaPtr& f : formulas) {
    const FormulaPtr core = unfold_defined_terms(f);
    const auto vars = free_variables(*core);
    const std::size_t k = vars.size();
    std::vector<std::size_t> idx(k, 0);
    std::size_t count = 0;
    bool done = u.carrier.empty() && k > 0;
    while (!done && count < tuple_cap) {
      Assignment a;
      for (std::size_t i = 0; i < k; ++i) a[vars[i]] = u.carrier[idx[i]];
      const bool lv = evaluate(su, *core, a).value;
      const bool rv = evaluate(sw, *core, a).value;
      ++report.checked;
      ++count;
      if (lv != rv) {
        report.disagreements.push_back({to_text(*core), a, lv, rv});
      }
      std::size_t i = 0;
      for (; i < k; ++i) {
        if (++idx[i] < u.carrier.size()) break;
        idx[i] = 0;
      }
      if (i == k) done = true;
    }
  }
  return report;
}

}  // namespace mverse
