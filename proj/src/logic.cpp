#include "mverse/logic.hpp"

#include <algorithm>
#include <cassert>

namespace mverse {

void PairRel::add(HfSet a, HfSet b) { pairs_.emplace(a.id(), b.id()); }

bool PairRel::contains(HfSet a, HfSet b) const {
  return pairs_.count({a.id(), b.id()}) > 0;
}

std::vector<std::pair<HfSet, HfSet>> PairRel::entries() const {
  std::vector<std::pair<HfSet, HfSet>> out;
  out.reserve(pairs_.size());
  for (const auto& [a, b] : pairs_) {
    out.emplace_back(HfSet::from_id(a), HfSet::from_id(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

class Evaluator {
 public:
  Evaluator(const Structure& s, const Assignment& a) : s_(s) {
    for (const auto& [k, v] : a) env_[k] = v;
    for (HfSet d : s.domain) domain_ids_.insert(d.id());
  }

  bool run(const Formula& f) { return eval(f); }
  std::uint64_t assignments() const { return assignments_; }

  HfSet term_value(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Lit:
        return t.value;
      case Term::Kind::Var: {
        auto it = env_.find(t.name);
        if (it == env_.end()) throw EvalError("unbound variable '" + t.name + "'");
        return it->second;
      }
      case Term::Kind::Const: {
        auto it = s_.constants.find(t.name);
        if (it == s_.constants.end()) throw EvalError("unknown constant '" + t.name + "'");
        return it->second;
      }
    }
    throw EvalError("bad term");
  }

  void bind(const std::string& var, HfSet v) { env_[var] = v; }
  void unbind(const std::string& var) { env_.erase(var); }

  // The guard shape produced by relativization: `forall x. x in C -> rest`
  // or `exists x. x in C & rest` with C a constant or literal. When the
  // structure's untagged membership is true ∈, such a quantifier only needs
  // to scan C's members.
  const Formula* guard_rest(const Formula& q) const {
    const Formula& body = *q.left;
    const Formula::Kind want =
        q.kind == Formula::Kind::ForAll ? Formula::Kind::Implies : Formula::Kind::And;
    if (body.kind != want) return nullptr;
    const Formula& g = *body.left;
    if (g.kind != Formula::Kind::Member || g.via) return nullptr;
    if (g.terms[0].kind != Term::Kind::Var || g.terms[0].name != q.var) return nullptr;
    if (g.terms[1].kind == Term::Kind::Var && g.terms[1].name == q.var) return nullptr;
    return body.right.get();
  }

  bool restrictable(const Formula& q) {
    return !s_.membership && guard_rest(q) != nullptr;
  }

  // Iteration range for a quantifier: either the whole domain or, for a
  // restrictable guard, the guard set's members that lie in the domain.
  std::vector<HfSet> quantifier_range(const Formula& q) {
    if (restrictable(q)) {
      const Formula& g = *q.left->left;
      const HfSet c = term_value(g.terms[1]);
      std::vector<HfSet> range;
      for (HfSet m : hf_members(c)) {
        if (domain_ids_.count(m.id())) range.push_back(m);
      }
      return range;
    }
    return s_.domain;
  }

  bool eval(const Formula& f) {
    switch (f.kind) {
      case Formula::Kind::Member: {
        const HfSet a = term_value(f.terms[0]);
        const HfSet b = term_value(f.terms[1]);
        if (f.via) {
          auto it = s_.internal_rels.find(*f.via);
          if (it == s_.internal_rels.end()) {
            throw EvalError("unknown internal relation '" + *f.via + "'");
          }
          return it->second.contains(a, b);
        }
        if (s_.membership) return s_.membership->contains(a, b);
        return hf_contains(b, a);
      }
      case Formula::Kind::Equal:
        return term_value(f.terms[0]) == term_value(f.terms[1]);
      case Formula::Kind::Subset:
      case Formula::Kind::PairEq:
        throw EvalError("defined terms must be unfolded before evaluation");
      case Formula::Kind::Not:
        return !eval(*f.left);
      case Formula::Kind::And:
        return eval(*f.left) && eval(*f.right);
      case Formula::Kind::Or:
        return eval(*f.left) || eval(*f.right);
      case Formula::Kind::Implies:
        return !eval(*f.left) || eval(*f.right);
      case Formula::Kind::Iff:
        return eval(*f.left) == eval(*f.right);
      case Formula::Kind::ForAll:
      case Formula::Kind::Exists: {
        if (f.bound) throw EvalError("defined terms must be unfolded before evaluation");
        const bool universal = f.kind == Formula::Kind::ForAll;
        const bool innermost = !has_quantifier(*f.left);
        const bool restricted = restrictable(f);
        const Formula& body =
            restricted ? *guard_rest(f) : *f.left;
        auto range = quantifier_range(f);
        const auto saved = env_.find(f.var);
        const bool had = saved != env_.end();
        const HfSet old = had ? saved->second : HfSet();
        bool result = universal;
        for (HfSet d : range) {
          env_[f.var] = d;
          if (innermost) ++assignments_;
          const bool v = eval(body);
          if (v != universal) {
            result = !universal;
            break;
          }
        }
        if (had) {
          env_[f.var] = old;
        } else {
          env_.erase(f.var);
        }
        return result;
      }
    }
    throw EvalError("bad formula node");
  }

  bool has_quantifier(const Formula& f) {
    auto it = has_quant_.find(&f);
    if (it != has_quant_.end()) return it->second;
    bool v = f.is_quantifier();
    if (!v && f.left) v = has_quantifier(*f.left);
    if (!v && f.right) v = has_quantifier(*f.right);
    has_quant_.emplace(&f, v);
    return v;
  }

 private:
  const Structure& s_;
  std::unordered_map<std::string, HfSet> env_;
  std::unordered_set<std::uint32_t> domain_ids_;
  std::unordered_map<const Formula*, bool> has_quant_;
  std::uint64_t assignments_ = 0;
};

}  // namespace

EvalResult evaluate(const Structure& s, const Formula& f, const Assignment& a) {
  Evaluator ev(s, a);
  EvalResult out;
  out.value = ev.run(f);
  if (!f.is_quantifier()) {
    out.assignments = std::max<std::uint64_t>(ev.assignments(), 1);
  } else {
    out.assignments = ev.assignments();
  }

  // Witness / counterexample for the outermost quantifier block: chase the
  // first explaining element through leading quantifiers, skipping the
  // relativization guard on the way down.
  const Formula* cur = &f;
  Assignment env = a;
  const bool value = out.value;
  while (cur->is_quantifier() && !cur->bound) {
    const bool universal = cur->kind == Formula::Kind::ForAll;
    if (universal == value) break;  // ∃-false / ∀-true: no single element explains it
    Evaluator probe(s, env);
    auto range = probe.quantifier_range(*cur);
    bool found = false;
    HfSet chosen;
    for (HfSet d : range) {
      probe.bind(cur->var, d);
      if (probe.eval(*cur->left) != universal) {
        chosen = d;
        found = true;
        break;
      }
    }
    if (!found) break;
    out.trail.emplace_back(cur->var, chosen);
    env[cur->var] = chosen;
    const Formula* next = cur->left.get();
    if (const Formula* rest = probe.guard_rest(*cur)) next = rest;
    cur = next;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unfolding

namespace {

class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> used) : used_(std::move(used)) {}
  std::string fresh(const std::string& base) {
    if (!used_.count(base)) {
      used_.insert(base);
      return base;
    }
    for (std::size_t i = 1;; ++i) {
      std::string name = base + std::to_string(i);
      if (!used_.count(name)) {
        used_.insert(name);
        return name;
      }
    }
  }

 private:
  std::set<std::string> used_;
};

// ∀w (w ∈ s ↔ w = x): s is the singleton {x}.
FormulaPtr singleton_eq(const std::string& w, const Term& s, const Term& x) {
  return f_forall(w, f_iff(f_member(Term::var(w), s), f_equal(Term::var(w), x)));
}

// ∀w (w ∈ s ↔ (w = x ∨ w = y)): s is the unordered pair {x, y}.
FormulaPtr doubleton_eq(const std::string& w, const Term& s, const Term& x, const Term& y) {
  return f_forall(w, f_iff(f_member(Term::var(w), s),
                           f_or(f_equal(Term::var(w), x), f_equal(Term::var(w), y))));
}

FormulaPtr unfold_rec(const FormulaPtr& f, FreshNames& names) {
  switch (f->kind) {
    case Formula::Kind::Member:
    case Formula::Kind::Equal:
      return f;
    case Formula::Kind::Subset: {
      const std::string z = names.fresh("_z");
      return f_forall(z, f_implies(f_member(Term::var(z), f->terms[0]),
                                   f_member(Term::var(z), f->terms[1])));
    }
    case Formula::Kind::PairEq: {
      // A = (X, Y) becomes: there are p = {X} and q = {X, Y} with A = {p, q}.
      const std::string p = names.fresh("_p");
      const std::string q = names.fresh("_q");
      const std::string w = names.fresh("_w");
      const Term tp = Term::var(p), tq = Term::var(q);
      FormulaPtr inner = f_and(
          f_and(singleton_eq(w, tp, f->terms[1]),
                doubleton_eq(w, tq, f->terms[1], f->terms[2])),
          doubleton_eq(w, f->terms[0], tp, tq));
      return f_exists(p, f_exists(q, std::move(inner)));
    }
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists: {
      FormulaPtr body = unfold_rec(f->left, names);
      if (f->bound) {
        const Term guard = *f->bound;
        if (f->kind == Formula::Kind::ForAll) {
          return f_forall(f->var,
                          f_implies(f_member(Term::var(f->var), guard), std::move(body)));
        }
        return f_exists(f->var,
                        f_and(f_member(Term::var(f->var), guard), std::move(body)));
      }
      if (body == f->left) return f;
      return f->kind == Formula::Kind::ForAll ? f_forall(f->var, std::move(body))
                                              : f_exists(f->var, std::move(body));
    }
    default: {
      FormulaPtr l = f->left ? unfold_rec(f->left, names) : nullptr;
      FormulaPtr r = f->right ? unfold_rec(f->right, names) : nullptr;
      if (l == f->left && r == f->right) return f;
      Formula g;
      g.kind = f->kind;
      g.left = std::move(l);
      g.right = std::move(r);
      return std::make_shared<const Formula>(std::move(g));
    }
  }
}

}  // namespace

FormulaPtr unfold_defined_terms(const FormulaPtr& f) {
  FreshNames names(all_names(*f));
  return unfold_rec(f, names);
}

// ---------------------------------------------------------------------------
// Relativization

namespace {

FormulaPtr relativize_rec(const FormulaPtr& f, const std::string& cname,
                          MembershipMode mode) {
  switch (f->kind) {
    case Formula::Kind::Member: {
      if (mode == MembershipMode::Internal) {
        const bool mentions_universe =
            (f->terms[0].kind == Term::Kind::Const && f->terms[0].name == cname) ||
            (f->terms[1].kind == Term::Kind::Const && f->terms[1].name == cname);
        if (!mentions_universe && f->via != std::make_optional(cname)) {
          return f_member(f->terms[0], f->terms[1], cname);
        }
      }
      return f;
    }
    case Formula::Kind::Equal:
      return f;
    case Formula::Kind::ForAll: {
      FormulaPtr body = relativize_rec(f->left, cname, mode);
      return f_forall(f->var, f_implies(f_member(Term::var(f->var), Term::cnst(cname)),
                                        std::move(body)));
    }
    case Formula::Kind::Exists: {
      FormulaPtr body = relativize_rec(f->left, cname, mode);
      return f_exists(f->var, f_and(f_member(Term::var(f->var), Term::cnst(cname)),
                                    std::move(body)));
    }
    case Formula::Kind::Not: {
      FormulaPtr body = relativize_rec(f->left, cname, mode);
      return body == f->left ? f : f_not(std::move(body));
    }
    default: {
      FormulaPtr l = relativize_rec(f->left, cname, mode);
      FormulaPtr r = relativize_rec(f->right, cname, mode);
      if (l == f->left && r == f->right) return f;
      Formula g;
      g.kind = f->kind;
      g.left = std::move(l);
      g.right = std::move(r);
      return std::make_shared<const Formula>(std::move(g));
    }
  }
}

}  // namespace

FormulaPtr relativize(const FormulaPtr& f, const std::string& universe_const,
                      MembershipMode mode) {
  if (!is_core(*f)) throw EvalError("relativize requires a core formula");
  return relativize_rec(f, universe_const, mode);
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

FormulaPtr substitute_rec(const FormulaPtr& f, std::map<std::string, Term> subst,
                          FreshNames& names) {
  if (subst.empty()) return f;
  auto term_subst = [&subst](const Term& t) {
    if (t.kind == Term::Kind::Var) {
      auto it = subst.find(t.name);
      if (it != subst.end()) return it->second;
    }
    return t;
  };
  switch (f->kind) {
    case Formula::Kind::Member: {
      Term a = term_subst(f->terms[0]), b = term_subst(f->terms[1]);
      if (a == f->terms[0] && b == f->terms[1]) return f;
      return f_member(std::move(a), std::move(b), f->via);
    }
    case Formula::Kind::Equal:
    case Formula::Kind::Subset: {
      Term a = term_subst(f->terms[0]), b = term_subst(f->terms[1]);
      if (a == f->terms[0] && b == f->terms[1]) return f;
      return f->kind == Formula::Kind::Equal ? f_equal(std::move(a), std::move(b))
                                             : f_subset(std::move(a), std::move(b));
    }
    case Formula::Kind::PairEq: {
      Term a = term_subst(f->terms[0]), x = term_subst(f->terms[1]),
           y = term_subst(f->terms[2]);
      return f_pair_eq(std::move(a), std::move(x), std::move(y));
    }
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists: {
      std::map<std::string, Term> inner = subst;
      inner.erase(f->var);
      // Rename the binder when a replacement term captures it.
      bool collide = false;
      for (const auto& [k, t] : inner) {
        (void)k;
        if (t.kind != Term::Kind::Lit && t.name == f->var) collide = true;
      }
      std::string var = f->var;
      FormulaPtr body = f->left;
      if (collide) {
        var = names.fresh(f->var);
        std::map<std::string, Term> rename{{f->var, Term::var(var)}};
        body = substitute_rec(body, std::move(rename), names);
      }
      std::optional<Term> bound = f->bound;
      if (bound) *bound = term_subst(*bound);
      FormulaPtr new_body = substitute_rec(body, std::move(inner), names);
      if (new_body == f->left && var == f->var && bound == f->bound) return f;
      Formula g;
      g.kind = f->kind;
      g.var = std::move(var);
      g.bound = std::move(bound);
      g.left = std::move(new_body);
      return std::make_shared<const Formula>(std::move(g));
    }
    default: {
      FormulaPtr l = f->left ? substitute_rec(f->left, subst, names) : nullptr;
      FormulaPtr r = f->right ? substitute_rec(f->right, subst, names) : nullptr;
      if (l == f->left && r == f->right) return f;
      Formula g;
      g.kind = f->kind;
      g.left = std::move(l);
      g.right = std::move(r);
      return std::make_shared<const Formula>(std::move(g));
    }
  }
}

}  // namespace

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, Term>& subst) {
  std::set<std::string> used = all_names(*f);
  for (const auto& [k, t] : subst) {
    used.insert(k);
    if (t.kind != Term::Kind::Lit) used.insert(t.name);
  }
  FreshNames names(std::move(used));
  return substitute_rec(f, subst, names);
}

// ---------------------------------------------------------------------------
// Schema instantiation

FormulaPtr instantiate_schema(SchemaKind kind, const FormulaPtr& phi,
                              const std::vector<std::string>& slots,
                              const std::map<std::string, HfSet>& bindings) {
  const std::size_t want = kind == SchemaKind::Replacement ? 2 : 1;
  if (slots.size() != want) {
    throw ArityError("schema expects " + std::to_string(want) + " slot variable(s), got " +
                     std::to_string(slots.size()));
  }
  const auto frees = free_variables(*phi);
  for (const std::string& s : slots) {
    if (std::find(frees.begin(), frees.end(), s) == frees.end()) {
      throw ArityError("slot variable '" + s + "' is not free in the slot formula");
    }
  }

  FreshNames names(all_names(*phi));
  const std::string source_role = kind == SchemaKind::Replacement ? "a" : "Z";

  // Bind or collect remaining parameters.
  std::map<std::string, Term> param_subst;
  std::vector<std::string> open_params;
  for (const std::string& v : frees) {
    if (std::find(slots.begin(), slots.end(), v) != slots.end()) continue;
    auto it = bindings.find(v);
    if (it != bindings.end()) {
      param_subst[v] = Term::lit(it->second);
    } else {
      open_params.push_back(v);
    }
  }
  FormulaPtr body = param_subst.empty() ? phi : substitute(phi, param_subst);

  std::optional<HfSet> source_lit;
  if (auto it = bindings.find(source_role); it != bindings.end()) source_lit = it->second;

  FormulaPtr inst;
  if (kind == SchemaKind::Replacement) {
    const std::string& x = slots[0];
    const std::string& y = slots[1];
    const std::string a = names.fresh("a");
    const std::string b = names.fresh("b");
    const std::string c = names.fresh("c");
    const Term ta = source_lit ? Term::lit(*source_lit) : Term::var(a);
    FormulaPtr total = f_forall(
        x, f_implies(f_member(Term::var(x), ta), f_exists(y, body)));
    FormulaPtr image_pred =
        f_exists(x, f_and(f_member(Term::var(x), ta),
                          substitute(body, {{y, Term::var(c)}})));
    FormulaPtr image = f_exists(
        b, f_forall(c, f_iff(f_member(Term::var(c), Term::var(b)), std::move(image_pred))));
    inst = f_implies(std::move(total), std::move(image));
    if (!source_lit) inst = f_forall(a, std::move(inst));
  } else {
    const std::string& x = slots[0];
    const std::string z = names.fresh("Z");
    const std::string res = names.fresh("A");
    const Term tz = source_lit ? Term::lit(*source_lit) : Term::var(z);
    FormulaPtr inner = f_forall(
        x, f_iff(f_member(Term::var(x), Term::var(res)),
                 f_and(f_member(Term::var(x), tz), std::move(body))));
    inst = f_exists(res, std::move(inner));
    if (!source_lit) inst = f_forall(z, std::move(inst));
  }

  for (auto it = open_params.rbegin(); it != open_params.rend(); ++it) {
    inst = f_forall(*it, std::move(inst));
  }
  return inst;
}

}  // namespace mverse
