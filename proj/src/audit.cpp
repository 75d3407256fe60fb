#include "mverse/audit.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <sstream>

namespace mverse {

EvalResult universe_models(const AmbientModel& m, const Universe& u,
                           const FormulaPtr& f, const Assignment& a) {
  const FormulaPtr core = unfold_defined_terms(f);
  const FormulaPtr rel = relativize(core, u.name, MembershipMode::Internal);
  const Structure s = m.ambient_structure();
  return evaluate(s, *rel, a);
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::HoldsWithOverflow: return "holdsWithOverflow";
    case Verdict::Fails: return "fails";
    case Verdict::Skipped: return "skipped";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Catalogue

using WitnessBuilder =
    std::function<HfSet(const std::vector<HfSet>&, std::size_t /*ceiling*/)>;

struct ClassAxiom {
  std::vector<std::string> params;  // leading universal class variables
  std::string exist_var;            // empty for purely universal axioms
  FormulaPtr matrix;                // core body under the prefix
  WitnessBuilder builder;           // canonical witness from the parameters
  std::string instance;
};

struct InternalAxiom {
  FormulaPtr sentence;  // universe-level statement (may use sugar)
  std::string instance;
  Assignment counterexample_hint;  // designated-instance binding
};

struct SkipAxiom {
  std::string reason;
};

enum class StructuralCheck { UniversesArePairs, StandardTransitiveExists, Choice };

struct CatalogueEntry {
  std::string id;
  std::optional<ClassAxiom> cls;
  std::optional<InternalAxiom> internal;
  std::optional<StructuralCheck> structural;
  std::optional<SkipAxiom> skip;
};

FormulaPtr parse_core(const std::string& text) {
  return unfold_defined_terms(parse_formula(text).formula);
}

// Splits `forall p1 ... forall pk [exists w] matrix` into its pieces.
void decompose_prefix(FormulaPtr f, std::vector<std::string>& params,
                      std::string& exist_var, FormulaPtr& matrix) {
  while (f->kind == Formula::Kind::ForAll) {
    params.push_back(f->var);
    f = f->left;
  }
  if (f->kind == Formula::Kind::Exists) {
    exist_var = f->var;
    f = f->left;
  }
  matrix = f;
}

CatalogueEntry class_axiom(std::string id, const std::string& text, WitnessBuilder builder,
                           std::string instance = "") {
  ClassAxiom ax;
  FormulaPtr f = parse_core(text);
  decompose_prefix(f, ax.params, ax.exist_var, ax.matrix);
  ax.builder = std::move(builder);
  ax.instance = std::move(instance);
  CatalogueEntry e;
  e.id = std::move(id);
  e.cls = std::move(ax);
  return e;
}

CatalogueEntry internal_axiom(std::string id, FormulaPtr sentence, std::string instance = "",
                              Assignment hint = {}) {
  CatalogueEntry e;
  e.id = std::move(id);
  e.internal = InternalAxiom{std::move(sentence), std::move(instance), std::move(hint)};
  return e;
}

CatalogueEntry internal_axiom(std::string id, const std::string& text,
                              std::string instance = "") {
  return internal_axiom(std::move(id), parse_formula(text).formula, std::move(instance));
}

const char* kClassExtensionality =
    "forall X. forall Y. (X = Y <-> forall Z. (Z in X <-> Z in Y))";
const char* kPairing =
    "forall x. forall y. exists z. forall w. (w in z <-> (w = x | w = y))";
const char* kCartesianProduct =
    "forall x. forall y. exists z. forall a. "
    "(a in z <-> exists u. exists w. (u in x & w in y & a = (u, w)))";
const char* kUnion =
    "forall x. exists y. forall z. (z in y <-> exists a. (a in x & z in a))";
const char* kPowerclass = "forall x. exists y. forall z. (z sub x <-> z in y)";
const char* kExtensionality =
    "forall x. forall y. (x = y <-> forall z. (z in x <-> z in y))";
const char* kFoundation =
    "forall x. ((exists w. w in x) -> exists y. (y in x & forall z. !(z in y & z in x)))";
const char* kBinaryUnion =
    "forall x. forall y. exists z. forall a. (a in z <-> (a in x | a in y))";
const char* kEmptySet = "exists z. forall x. !(x in z)";
const char* kInfinity =
    "exists x. ((exists e. (e in x & forall w. !(w in e))) & "
    "forall y. (y in x -> exists s. (s in x & forall w. (w in s <-> (w in y | w = y)))))";

std::vector<CatalogueEntry> build_catalogue() {
  std::vector<CatalogueEntry> cat;

  // --- class level -------------------------------------------------------
  cat.push_back(class_axiom("a1", kClassExtensionality, nullptr));
  {
    const FormulaPtr phi1 = parse_formula("X in Y").formula;
    cat.push_back(class_axiom(
        "a2#1", to_text(*instantiate_schema(SchemaKind::ClassSeparation, phi1, {"X"})),
        [](const std::vector<HfSet>& p, std::size_t) {
          // params sorted: [Y, Z]; result = {m in Z : m in Y}
          std::vector<HfSet> out;
          for (HfSet m : hf_members(p[1])) {
            if (hf_contains(p[0], m)) out.push_back(m);
          }
          return canonical_set(out);
        },
        "phi(X) = X in Y"));
    const FormulaPtr phi2 = parse_formula("!(X in X)").formula;
    cat.push_back(class_axiom(
        "a2#2", to_text(*instantiate_schema(SchemaKind::ClassSeparation, phi2, {"X"})),
        [](const std::vector<HfSet>& p, std::size_t) {
          std::vector<HfSet> out;
          for (HfSet m : hf_members(p[0])) {
            if (!hf_contains(m, m)) out.push_back(m);
          }
          return canonical_set(out);
        },
        "phi(X) = !(X in X)"));
  }
  cat.push_back(class_axiom("a3", kPairing, [](const std::vector<HfSet>& p, std::size_t) {
    return canonical_set({p[0], p[1]});
  }));
  cat.push_back(class_axiom("a4", kCartesianProduct,
                            [](const std::vector<HfSet>& p, std::size_t ceiling) {
                              return cartesian_product(p[0], p[1], ceiling);
                            }));
  cat.push_back(class_axiom("a10", kUnion, [](const std::vector<HfSet>& p, std::size_t) {
    return union_all(p[0]);
  }));
  cat.push_back(class_axiom("a11", kPowerclass,
                            [](const std::vector<HfSet>& p, std::size_t ceiling) {
                              return powerset(p[0], ceiling);
                            }));

  // --- structural --------------------------------------------------------
  {
    CatalogueEntry a5;
    a5.id = "a5";
    a5.structural = StructuralCheck::UniversesArePairs;
    cat.push_back(std::move(a5));
    CatalogueEntry a7;
    a7.id = "a7";
    a7.structural = StructuralCheck::StandardTransitiveExists;
    cat.push_back(std::move(a7));
  }

  // --- internal ----------------------------------------------------------
  cat.push_back(internal_axiom("a6", kEmptySet));
  cat.push_back(internal_axiom("a1-internal", kExtensionality));
  {
    const FormulaPtr phi = parse_formula("x = 1 | x = 2").formula;
    const FormulaPtr inst =
        instantiate_schema(SchemaKind::Separation, phi, {"x"}, {{"Z", nat(3)}});
    cat.push_back(internal_axiom("a2-internal#1", inst, "phi(x) = (x = 1 | x = 2), Z = 3"));
    cat.push_back(internal_axiom(
        "a2-internal#2",
        instantiate_schema(SchemaKind::Separation, parse_formula("x = x").formula, {"x"}),
        "phi(x) = x = x"));
  }
  cat.push_back(internal_axiom("a3-internal", kPairing));
  {
    // The designated pairing instance at (x, y) = (2, 3).
    FormulaPtr general = parse_formula(kPairing).formula;
    FormulaPtr matrix = general->left->left;  // under forall x. forall y.
    FormulaPtr bound =
        substitute(matrix, {{"x", Term::lit(nat(2))}, {"y", Term::lit(nat(3))}});
    cat.push_back(internal_axiom("a3-internal#23", bound, "x = 2, y = 3",
                                 Assignment{{"x", nat(2)}, {"y", nat(3)}}));
  }
  cat.push_back(internal_axiom("a4-internal", kCartesianProduct));
  cat.push_back(internal_axiom("a10-internal", kUnion));
  cat.push_back(internal_axiom("a11-internal", kPowerclass));

  // --- ZFC ---------------------------------------------------------------
  cat.push_back(internal_axiom("zfc1", kExtensionality));
  cat.push_back(internal_axiom("zfc2", kFoundation));
  {
    const FormulaPtr phi = parse_formula("x = 1 | x = 2").formula;
    cat.push_back(internal_axiom(
        "zfc3#1", instantiate_schema(SchemaKind::Separation, phi, {"x"}, {{"Z", nat(3)}}),
        "phi(x) = (x = 1 | x = 2), Z = 3"));
    cat.push_back(internal_axiom(
        "zfc3#2",
        instantiate_schema(SchemaKind::Separation, parse_formula("x = x").formula, {"x"}),
        "phi(x) = x = x"));
  }
  cat.push_back(internal_axiom("zfc4", kPairing));
  cat.push_back(internal_axiom("zfc5", kBinaryUnion));
  {
    cat.push_back(internal_axiom(
        "zfc6#1",
        instantiate_schema(SchemaKind::Replacement, parse_formula("y = x").formula,
                           {"x", "y"}),
        "phi(x, y) = y = x"));
    cat.push_back(internal_axiom(
        "zfc6#2",
        instantiate_schema(SchemaKind::Replacement,
                           parse_formula("forall w. (w in y <-> w = x)").formula, {"x", "y"}),
        "phi(x, y) = y is the singleton of x"));
  }
  cat.push_back(internal_axiom("zfc7", kInfinity));
  cat.push_back(internal_axiom("zfc8", kPowerclass));
  {
    CatalogueEntry zfc9;
    zfc9.id = "zfc9";
    zfc9.structural = StructuralCheck::Choice;
    cat.push_back(std::move(zfc9));
  }

  // --- out of reach ------------------------------------------------------
  {
    CatalogueEntry a8;
    a8.id = "a8";
    a8.skip = SkipAxiom{"non-computable: consistency quantification"};
    cat.push_back(std::move(a8));
    CatalogueEntry a9;
    a9.id = "a9";
    a9.skip = SkipAxiom{"no construction given"};
    cat.push_back(std::move(a9));
  }
  return cat;
}

const std::vector<CatalogueEntry>& catalogue() {
  static const std::vector<CatalogueEntry> cat = build_catalogue();
  return cat;
}

const CatalogueEntry& entry_for(const std::string& id) {
  for (const CatalogueEntry& e : catalogue()) {
    if (e.id == id) return e;
  }
  throw std::invalid_argument("unknown axiom id '" + id + "'");
}

const std::map<std::string, std::vector<std::string>>& id_sets() {
  static const std::map<std::string, std::vector<std::string>> sets = {
      {"t0", {"a1", "a2#1", "a2#2", "a3", "a4", "a5", "a6", "a7"}},
      {"t0-internal",
       {"a1-internal", "a2-internal#1", "a2-internal#2", "a3-internal", "a4-internal", "a6"}},
      {"classes", {"a1", "a2#1", "a2#2", "a3", "a4", "a10", "a11"}},
      {"a2", {"a2#1", "a2#2"}},
      {"a12",
       {"a1-internal", "a2-internal#1", "a2-internal#2", "a3-internal", "a4-internal",
        "a10-internal"}},
      {"a12-star",
       {"a1-internal", "a2-internal#1", "a2-internal#2", "a3-internal", "a4-internal",
        "a10-internal", "a11-internal"}},
      {"a2-internal", {"a2-internal#1", "a2-internal#2"}},
      {"zfc3", {"zfc3#1", "zfc3#2"}},
      {"zfc6", {"zfc6#1", "zfc6#2"}},
      {"zfc",
       {"zfc1", "zfc2", "zfc3#1", "zfc3#2", "zfc4", "zfc5", "zfc6#1", "zfc6#2", "zfc7",
        "zfc8", "zfc9"}},
      {"lemma",
       {"a6", "a2-internal#1", "a3-internal", "a3-internal#23", "a4-internal", "zfc6#1",
        "zfc6#2", "a10-internal", "zfc8"}},
  };
  return sets;
}

// The five-element-model write-up's claim list, checked against computed
// verdicts whenever all of a claim's ids are in the report.
struct ClaimSpec {
  std::string claim;
  std::string claimed;
  std::vector<std::string> ids;  // computed = fails iff any of these fails
};

const std::vector<ClaimSpec>& lemma_claims_spec() {
  static const std::vector<ClaimSpec> claims = {
      {"empty-set", "holds", {"a6"}},
      {"separation", "fails", {"a2-internal#1"}},
      {"pairing", "fails", {"a3-internal"}},
      {"cartesian-product", "fails", {"a4-internal"}},
      {"replacement", "fails", {"zfc6#1", "zfc6#2"}},
      {"union", "fails", {"a10-internal"}},
      {"powerset", "fails", {"zfc8"}},
  };
  return claims;
}

// ---------------------------------------------------------------------------
// Class-level auditing

HfSet world_visible(const AmbientModel& m, HfSet w) {
  std::vector<HfSet> vis;
  for (HfSet x : hf_members(w)) {
    if (m.world_contains(x)) vis.push_back(x);
  }
  return canonical_set(vis);
}

std::size_t overflow_of(const AmbientModel& m, HfSet w) {
  const std::size_t r = hf_rank(w);
  return r >= m.rank_bound ? r - (m.rank_bound - 1) : 0;
}

AuditEntry audit_class_axiom(const AmbientModel& m, const std::string& id,
                             const ClassAxiom& ax, const AuditOptions& opts) {
  AuditEntry out;
  out.id = id;
  out.kind = "class";
  out.instance = ax.instance;
  const std::size_t n = m.class_world.size();
  const std::size_t k = ax.params.size();
  {
    std::size_t tuples = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (n != 0 && tuples > opts.class_world_ceiling / n) {
        throw GuardError("class audit of " + id + " over a world of " + std::to_string(n) +
                         " classes exceeds the ceiling");
      }
      tuples *= n;
    }
  }

  Structure ambient = m.ambient_structure();
  bool any_overflow = false;
  std::size_t max_overflow = 0;
  Assignment overflow_example;

  std::vector<std::size_t> idx(k, 0);
  bool done = n == 0 && k > 0;
  while (!done) {
    std::vector<HfSet> values(k);
    Assignment binding;
    for (std::size_t i = 0; i < k; ++i) {
      values[i] = m.class_world[idx[i]];
      binding[ax.params[i]] = values[i];
    }

    if (ax.exist_var.empty()) {
      if (!evaluate(ambient, *ax.matrix, binding).value) {
        out.verdict = Verdict::Fails;
        out.counterexample = binding;
        return out;
      }
    } else {
      const HfSet w = ax.builder(values, opts.builder_ceiling);
      const HfSet vis = world_visible(m, w);
      if (!m.world_contains(vis)) {
        const std::size_t o = overflow_of(m, w);
        if (o > opts.overflow_budget) {
          out.verdict = Verdict::Fails;
          out.counterexample = binding;
          return out;
        }
        if (!any_overflow || o > max_overflow) {
          overflow_example = binding;
          overflow_example[ax.exist_var] = w;
          max_overflow = std::max(max_overflow, o);
        }
        any_overflow = true;
      }
    }

    // advance the tuple counter
    std::size_t i = 0;
    for (; i < k; ++i) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
    if (i == k) done = true;
  }

  if (any_overflow) {
    out.verdict = Verdict::HoldsWithOverflow;
    out.overflow = max_overflow;
    out.witness = overflow_example;
  } else {
    out.verdict = Verdict::Holds;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Internal auditing

Assignment trail_to_assignment(const std::vector<std::pair<std::string, HfSet>>& trail) {
  Assignment a;
  for (const auto& [k, v] : trail) a[k] = v;
  return a;
}

AuditEntry audit_internal_axiom(const AmbientModel& m, const std::string& id,
                                const InternalAxiom& ax) {
  AuditEntry out;
  out.id = id;
  out.kind = "internal";
  out.instance = ax.instance;
  out.verdict = Verdict::Holds;
  for (const Universe& u : m.multiverse) {
    const EvalResult res = universe_models(m, u, ax.sentence);
    if (!res.value) {
      out.verdict = Verdict::Fails;
      out.universe = u.name;
      out.counterexample =
          ax.counterexample_hint.empty() ? trail_to_assignment(res.trail) : ax.counterexample_hint;
      return out;
    }
    if (!out.universe) {
      out.universe = u.name;
      out.witness = trail_to_assignment(res.trail);
    }
  }
  if (m.multiverse.size() > 1) out.universe.reset();
  return out;
}

// ---------------------------------------------------------------------------
// Structural checks

// Every internal member of x, through the universe's own relation.
std::vector<HfSet> internal_members(const Universe& u, HfSet x) {
  std::vector<HfSet> out;
  for (HfSet a : u.carrier) {
    if (u.membership.contains(a, x)) out.push_back(a);
  }
  return out;
}

// The finite selector search behind the choice axiom: for every carrier
// element x none of whose internal members is internally empty, some carrier
// element must decode (plain Kuratowski decoding, standard universes only)
// to an entire functional graph on x's members selecting f(y) ∈ y.
AuditEntry audit_choice(const AmbientModel& m, const std::string& id) {
  AuditEntry out;
  out.id = id;
  out.kind = "internal";
  out.verdict = Verdict::Holds;
  for (const Universe& u : m.multiverse) {
    const UniverseProperties props = universe_properties(u);
    if (!props.standard) {
      out.verdict = Verdict::Skipped;
      out.reason = "selector search requires a standard universe";
      out.universe = u.name;
      return out;
    }
    for (HfSet x : u.carrier) {
      const std::vector<HfSet> mx = internal_members(u, x);
      bool has_empty = false;
      for (HfSet y : mx) {
        if (internal_members(u, y).empty()) has_empty = true;
      }
      if (has_empty || mx.empty()) continue;
      bool found = false;
      for (HfSet f : u.carrier) {
        // decode f as a graph over mx
        std::map<std::uint32_t, HfSet> graph;
        bool ok = true;
        for (HfSet p : hf_members(f)) {
          const auto pair = decode_pair(p);
          if (!pair) {
            ok = false;
            break;
          }
          if (graph.count(pair->first.id())) {
            ok = false;  // not functional
            break;
          }
          graph[pair->first.id()] = pair->second;
        }
        if (!ok || graph.size() != mx.size()) continue;
        for (HfSet y : mx) {
          auto it = graph.find(y.id());
          if (it == graph.end() || !hf_contains(y, it->second)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          found = true;
          break;
        }
      }
      if (!found) {
        out.verdict = Verdict::Fails;
        out.universe = u.name;
        out.counterexample = {{"x", x}};
        return out;
      }
    }
    if (!out.universe) out.universe = u.name;
  }
  if (m.multiverse.size() > 1) out.universe.reset();
  return out;
}

AuditEntry audit_structural(const AmbientModel& m, const std::string& id, StructuralCheck c) {
  AuditEntry out;
  out.id = id;
  out.kind = "structural";
  switch (c) {
    case StructuralCheck::UniversesArePairs: {
      out.verdict = Verdict::Holds;
      for (const Universe& u : m.multiverse) {
        for (const auto& [a, b] : u.membership.entries()) {
          if (!u.contains(a) || !u.contains(b)) {
            out.verdict = Verdict::Fails;
            out.universe = u.name;
            return out;
          }
        }
      }
      return out;
    }
    case StructuralCheck::StandardTransitiveExists: {
      for (const Universe& u : m.multiverse) {
        const UniverseProperties p = universe_properties(u);
        if (p.standard && p.transitive) {
          out.verdict = Verdict::Holds;
          out.universe = u.name;
          return out;
        }
      }
      out.verdict = Verdict::Fails;
      return out;
    }
    case StructuralCheck::Choice:
      return audit_choice(m, id);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Driver

std::vector<std::string> expand_axiom_ids(const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto push = [&out, &seen](const std::string& id) {
    entry_for(id);  // validates
    if (seen.insert(id).second) out.push_back(id);
  };
  for (const std::string& id : ids) {
    if (id == "all") {
      for (const CatalogueEntry& e : catalogue()) push(e.id);
      continue;
    }
    auto set_it = id_sets().find(id);
    if (set_it != id_sets().end()) {
      for (const std::string& sub : set_it->second) push(sub);
      continue;
    }
    push(id);
  }
  return out;
}

std::vector<std::string> catalogue_ids() {
  std::vector<std::string> out;
  for (const CatalogueEntry& e : catalogue()) out.push_back(e.id);
  return out;
}

AuditReport audit_axioms(const AmbientModel& m, const std::vector<std::string>& ids,
                         const AuditOptions& opts) {
  AuditReport report;
  report.model = m.name;
  report.overflow_budget = opts.overflow_budget;
  const std::vector<std::string> concrete = expand_axiom_ids(ids);

  bool lemma_requested = std::find(ids.begin(), ids.end(), "lemma") != ids.end();

  for (const std::string& id : concrete) {
    const CatalogueEntry& e = entry_for(id);
    const auto start = std::chrono::steady_clock::now();
    AuditEntry entry;
    if (e.skip) {
      entry.id = id;
      entry.kind = "skipped";
      entry.verdict = Verdict::Skipped;
      entry.reason = e.skip->reason;
    } else if (e.cls) {
      entry = audit_class_axiom(m, id, *e.cls, opts);
    } else if (e.internal) {
      entry = audit_internal_axiom(m, id, *e.internal);
    } else if (e.structural) {
      entry = audit_structural(m, id, *e.structural);
    }
    entry.millis = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    report.entries.push_back(std::move(entry));
  }

  std::size_t extra = 0;
  for (const ExtraInstance& inst : opts.extra_instances) {
    const FormulaPtr sentence =
        instantiate_schema(inst.kind, inst.phi, inst.slots, inst.bindings);
    const auto start = std::chrono::steady_clock::now();
    AuditEntry entry = audit_internal_axiom(
        m, "extra#" + std::to_string(++extra),
        InternalAxiom{sentence, to_text(*inst.phi), {}});
    entry.millis = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    report.entries.push_back(std::move(entry));
  }

  if (lemma_requested) {
    for (const ClaimSpec& spec : lemma_claims_spec()) {
      bool all_present = true;
      bool any_fails = false;
      for (const std::string& cid : spec.ids) {
        auto it = std::find_if(report.entries.begin(), report.entries.end(),
                               [&cid](const AuditEntry& en) { return en.id == cid; });
        if (it == report.entries.end()) {
          all_present = false;
          break;
        }
        if (it->verdict == Verdict::Fails) any_fails = true;
      }
      if (!all_present) continue;
      LemmaClaim claim;
      claim.claim = spec.claim;
      claim.claimed = spec.claimed;
      claim.computed = any_fails ? "fails" : "holds";
      claim.divergence = claim.computed != spec.claimed;
      report.lemma_claims.push_back(std::move(claim));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Verification (replay)

namespace {

FormulaPtr strip_leading(FormulaPtr f, Formula::Kind kind, const Assignment& a) {
  while (f->kind == kind && a.count(f->var)) f = f->left;
  return f;
}

bool replay_internal(const AmbientModel& m, const AuditEntry& entry, const InternalAxiom& ax) {
  const Universe* u = entry.universe ? m.find_universe(*entry.universe)
                                     : (m.multiverse.empty() ? nullptr : &m.multiverse[0]);
  if (entry.verdict == Verdict::Fails) {
    if (!u) return false;
    if (!ax.counterexample_hint.empty()) {
      return !universe_models(m, *u, ax.sentence).value;
    }
    const FormulaPtr stripped =
        strip_leading(ax.sentence, Formula::Kind::ForAll, entry.counterexample);
    return !universe_models(m, *u, stripped, entry.counterexample).value;
  }
  if (entry.verdict == Verdict::Holds) {
    for (const Universe& uu : m.multiverse) {
      const FormulaPtr stripped =
          &uu == u ? strip_leading(ax.sentence, Formula::Kind::Exists, entry.witness)
                   : ax.sentence;
      if (!universe_models(m, uu, stripped, &uu == u ? entry.witness : Assignment{}).value) {
        return false;
      }
    }
    return true;
  }
  return entry.verdict == Verdict::Skipped;
}

bool replay_class(const AmbientModel& m, const AuditEntry& entry, const ClassAxiom& ax,
                  const AuditOptions& opts) {
  // Recompute the verdict wholesale, then replay the recorded example
  // through the evaluator.
  AuditEntry fresh = audit_class_axiom(m, entry.id, ax, opts);
  if (fresh.verdict != entry.verdict || fresh.overflow != entry.overflow) return false;

  Structure ambient = m.ambient_structure();
  if (entry.verdict == Verdict::Fails) {
    // The recorded parameters must refute the existential over the world.
    if (ax.exist_var.empty()) {
      return !evaluate(ambient, *ax.matrix, entry.counterexample).value;
    }
    FormulaPtr exists = f_exists(ax.exist_var, ax.matrix);
    return !evaluate(ambient, *exists, entry.counterexample).value;
  }
  if (entry.verdict == Verdict::HoldsWithOverflow) {
    // The recorded witness must satisfy the matrix over the world extended
    // by the witness's own transitive closure.
    auto it = entry.witness.find(ax.exist_var);
    if (it == entry.witness.end()) return false;
    Structure extended = ambient;
    std::vector<HfSet> domain = m.class_world;
    domain.push_back(it->second);
    const auto tc = transitive_closure(it->second);
    domain.insert(domain.end(), tc.begin(), tc.end());
    canonicalize(domain);
    extended.domain = std::move(domain);
    return evaluate(extended, *ax.matrix, entry.witness).value;
  }
  return entry.verdict == Verdict::Holds;
}

}  // namespace

bool verify_report(const AmbientModel& m, const AuditReport& r, const AuditOptions& opts) {
  for (const AuditEntry& entry : r.entries) {
    if (entry.id.rfind("extra#", 0) == 0) continue;  // ad-hoc instances: no catalogue entry
    const CatalogueEntry& e = entry_for(entry.id);
    if (e.skip) {
      if (entry.verdict != Verdict::Skipped) return false;
      continue;
    }
    if (e.cls) {
      if (!replay_class(m, entry, *e.cls, opts)) return false;
      continue;
    }
    if (e.internal) {
      if (!replay_internal(m, entry, *e.internal)) return false;
      continue;
    }
    if (e.structural) {
      AuditEntry fresh = audit_structural(m, entry.id, *e.structural);
      if (fresh.verdict != entry.verdict) return false;
      continue;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

nlohmann::ordered_json assignment_json(const Assignment& a) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : a) j[k] = to_string_sugared(v);
  return j;
}

std::string assignment_text(const Assignment& a) {
  std::string out;
  for (const auto& [k, v] : a) {
    if (!out.empty()) out += ", ";
    out += k + " = " + to_string_sugared(v);
  }
  return out;
}

}  // namespace

nlohmann::ordered_json report_json(const AuditReport& r, bool timings) {
  nlohmann::ordered_json j;
  j["model"] = r.model;
  j["reading"] = r.reading;
  j["budget"] = r.overflow_budget;
  j["axioms"] = nlohmann::ordered_json::array();
  for (const AuditEntry& e : r.entries) {
    nlohmann::ordered_json je;
    je["id"] = e.id;
    je["kind"] = e.kind;
    if (!e.instance.empty()) je["instance"] = e.instance;
    je["verdict"] = verdict_name(e.verdict);
    if (!e.witness.empty()) je["witness"] = assignment_json(e.witness);
    if (!e.counterexample.empty()) je["counterexample"] = assignment_json(e.counterexample);
    if (e.overflow) je["overflow"] = *e.overflow;
    if (e.universe) je["universe"] = *e.universe;
    if (!e.reason.empty()) je["reason"] = e.reason;
    if (timings) je["millis"] = static_cast<std::int64_t>(e.millis + 0.5);
    j["axioms"].push_back(std::move(je));
  }
  if (!r.lemma_claims.empty()) {
    j["claims"] = nlohmann::ordered_json::array();
    for (const LemmaClaim& c : r.lemma_claims) {
      nlohmann::ordered_json jc;
      jc["claim"] = c.claim;
      jc["claimed"] = c.claimed;
      jc["computed"] = c.computed;
      jc["divergence"] = c.divergence;
      j["claims"].push_back(std::move(jc));
    }
  }
  return j;
}

std::string report_text(const AuditReport& r, bool timings) {
  std::ostringstream out;
  out << "model " << r.model << " (reading: " << r.reading << ", budget "
      << r.overflow_budget << ")\n";
  for (const AuditEntry& e : r.entries) {
    out << e.id;
    if (!e.instance.empty()) out << " [" << e.instance << "]";
    out << ": ";
    switch (e.verdict) {
      case Verdict::Holds:
        out << "HOLDS";
        if (!e.witness.empty()) out << " witness " << assignment_text(e.witness);
        break;
      case Verdict::HoldsWithOverflow:
        out << "HOLDS+OVERFLOW " << (e.overflow ? *e.overflow : 0);
        if (!e.witness.empty()) out << " witness " << assignment_text(e.witness);
        break;
      case Verdict::Fails:
        out << "FAILS";
        if (!e.counterexample.empty())
          out << " counterexample " << assignment_text(e.counterexample);
        break;
      case Verdict::Skipped:
        out << "SKIPPED (" << e.reason << ")";
        break;
    }
    if (e.universe) out << " (universe " << *e.universe << ")";
    if (timings) out << " [" << e.millis << " ms]";
    out << "\n";
  }
  for (const LemmaClaim& c : r.lemma_claims) {
    out << "claim " << c.claim << ": claimed " << c.claimed << ", computed " << c.computed
        << (c.divergence ? " -> DIVERGES\n" : "\n");
  }
  return out.str();
}

}  // namespace mverse
