#include "mverse/cli.hpp"

#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "mverse/audit.hpp"
#include "mverse/classrank.hpp"
#include "mverse/ef.hpp"
#include "mverse/setcat.hpp"

namespace mverse {

namespace {

constexpr const char* kVersion = "mverse 0.1.0";

struct CommonOpts {
  std::string format = "text";
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--format", common.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_flag("--strict", common.strict, "exit 1 on verdict-level findings");
}

void emit(std::ostream& out, const CommonOpts& common, const nlohmann::ordered_json& j,
          const std::string& text) {
  if (common.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << text;
  }
}

int run_parsed(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_parsed(args, out, err);
  } catch (const CLI::ParseError&) {
    return 2;  // CLI11 already reported
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

namespace {

int run_parsed(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite set-theoretic multiverse workbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // ---- audit ----
  auto* audit_cmd = app.add_subcommand("audit", "audit axioms against a model");
  std::string audit_model;
  std::vector<std::string> axiom_ids;
  AuditOptions audit_opts;
  bool timings = false;
  std::vector<std::string> sep_texts, rep_texts;
  CommonOpts audit_common;
  audit_cmd->add_option("--model", audit_model, "model name or file")->required();
  audit_cmd->add_option("--axioms", axiom_ids, "axiom ids or id sets")
      ->required()
      ->delimiter(',');
  audit_cmd->add_option("--overflow-budget", audit_opts.overflow_budget,
                        "rank overflow allowed for class-level witnesses")
      ->envname("MVERSE_OVERFLOW_BUDGET")
      ->capture_default_str();
  audit_cmd->add_option("--class-world-ceiling", audit_opts.class_world_ceiling,
                        "largest class world a class-level audit will sweep")
      ->envname("MVERSE_CLASS_WORLD_CEILING")
      ->capture_default_str();
  audit_cmd->add_option("--powerset-ceiling", audit_opts.builder_ceiling,
                        "cardinality ceiling for powerset/product witnesses")
      ->envname("MVERSE_POWERSET_CEILING")
      ->capture_default_str();
  audit_cmd->add_option("--sep", sep_texts,
                        "extra internal separation instance (formula with x free)");
  audit_cmd->add_option("--rep", rep_texts,
                        "extra internal replacement instance (formula with x, y free)");
  audit_cmd->add_flag("--timings", timings, "include wall times in the output");
  add_common(audit_cmd, audit_common);

  // ---- eval ----
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula over a model");
  std::string eval_model, eval_formula, eval_relativize;
  std::vector<std::string> eval_binds;
  CommonOpts eval_common;
  eval_cmd->add_option("--model", eval_model, "model name or file")->required();
  eval_cmd->add_option("--formula", eval_formula, "formula text")->required();
  eval_cmd->add_option("--relativize", eval_relativize,
                       "universe name: evaluate the formula inside this universe");
  eval_cmd->add_option("--bind", eval_binds, "free-variable binding var={...}");
  add_common(eval_cmd, eval_common);

  // ---- rank ----
  auto* rank_cmd = app.add_subcommand("rank", "classify a class over a model");
  std::string rank_model, rank_class, rank_universe;
  std::size_t rank_guard = 8;
  CommonOpts rank_common;
  rank_cmd->add_option("--model", rank_model, "model name or file")->required();
  rank_cmd->add_option("--class", rank_class, "HF literal for the class")->required();
  rank_cmd->add_option("--universe", rank_universe, "report only this universe's good rank");
  rank_cmd->add_option("--guard", rank_guard, "iterated powerclass depth guard")
      ->envname("MVERSE_RANK_GUARD")
      ->capture_default_str();
  add_common(rank_cmd, rank_common);

  // ---- ef ----
  auto* ef_cmd = app.add_subcommand("ef", "depth-bounded elementary equivalence");
  std::string ef_left, ef_right;
  std::size_t ef_depth = 1, ef_depth_max = 4;
  bool ef_witness = false;
  CommonOpts ef_common;
  ef_cmd->add_option("--left", ef_left, "model for the left structure")->required();
  ef_cmd->add_option("--right", ef_right, "model for the right structure")->required();
  ef_cmd->add_option("--depth", ef_depth, "quantifier-rank bound")->required();
  ef_cmd->add_option("--depth-max", ef_depth_max, "depth guard")
      ->envname("MVERSE_EF_DEPTH_MAX")
      ->capture_default_str();
  ef_cmd->add_flag("--witness", ef_witness, "print a distinguishing sentence when inequivalent");
  add_common(ef_cmd, ef_common);

  // ---- setcat ----
  auto* setcat_cmd = app.add_subcommand("setcat", "build the category of sets in a universe");
  std::string sc_model, sc_universe;
  bool sc_laws = false;
  SetCategoryOptions sc_opts;
  std::size_t sc_sample = 0;
  CommonOpts sc_common;
  setcat_cmd->add_option("--model", sc_model, "model name or file")->required();
  setcat_cmd->add_option("--universe", sc_universe, "universe name (default: first)");
  setcat_cmd->add_flag("--laws", sc_laws, "print the full law report");
  setcat_cmd->add_option("--sample", sc_sample, "sample size for oversized carriers");
  setcat_cmd->add_option("--seed", sc_opts.seed, "sampling seed")->capture_default_str();
  setcat_cmd
      ->add_option("--object-guard", sc_opts.object_guard, "full-build object cap")
      ->envname("MVERSE_OBJECT_GUARD")
      ->capture_default_str();
  add_common(setcat_cmd, sc_common);

  // ---- functors ----
  auto* fun_cmd = app.add_subcommand("functors", "enumerate functors between category files");
  std::string fun_from, fun_to;
  bool fun_category = false;
  std::size_t fun_ceiling = std::size_t{1} << 20;
  CommonOpts fun_common;
  fun_cmd->add_option("--from", fun_from, "source category file")->required();
  fun_cmd->add_option("--to", fun_to, "target category file")->required();
  fun_cmd->add_flag("--category", fun_category,
                    "also build the functor category and law-check it");
  fun_cmd->add_option("--ceiling", fun_ceiling, "enumeration guard")
      ->envname("MVERSE_FUNCTOR_CEILING")
      ->capture_default_str();
  add_common(fun_cmd, fun_common);

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  // ---- dispatch ----
  if (audit_cmd->parsed()) {
    const AmbientModel m = resolve_model(audit_model);
    for (const std::string& text : sep_texts) {
      ExtraInstance inst;
      inst.kind = SchemaKind::Separation;
      inst.phi = parse_formula(text).formula;
      inst.slots = {"x"};
      audit_opts.extra_instances.push_back(std::move(inst));
    }
    for (const std::string& text : rep_texts) {
      ExtraInstance inst;
      inst.kind = SchemaKind::Replacement;
      inst.phi = parse_formula(text).formula;
      inst.slots = {"x", "y"};
      audit_opts.extra_instances.push_back(std::move(inst));
    }
    const AuditReport report = audit_axioms(m, axiom_ids, audit_opts);
    emit(out, audit_common, report_json(report, timings), report_text(report, timings));
    if (audit_common.strict) {
      for (const AuditEntry& e : report.entries) {
        if (e.verdict == Verdict::Fails) return 1;
      }
    }
    return 0;
  }

  if (eval_cmd->parsed()) {
    const AmbientModel m = resolve_model(eval_model);
    std::set<std::string> consts{"M"};
    for (const Universe& u : m.multiverse) consts.insert(u.name);
    const ParsedFormula parsed = parse_formula(eval_formula, consts);
    Assignment binding;
    for (const std::string& b : eval_binds) {
      const auto eq = b.find('=');
      if (eq == std::string::npos) throw std::runtime_error("--bind expects var={...}");
      binding[b.substr(0, eq)] = parse_hf(b.substr(eq + 1));
    }
    for (const std::string& v : free_variables(*parsed.formula)) {
      if (!binding.count(v)) {
        throw std::runtime_error("unbound variable '" + v + "' (use --bind " + v + "=...)");
      }
    }
    EvalResult res;
    if (!eval_relativize.empty()) {
      const Universe* u = m.find_universe(eval_relativize);
      if (!u) throw std::runtime_error("unknown universe '" + eval_relativize + "'");
      res = universe_models(m, *u, parsed.formula, binding);
    } else {
      const Structure s = m.ambient_structure();
      res = evaluate(s, *unfold_defined_terms(parsed.formula), binding);
    }
    nlohmann::ordered_json j;
    j["value"] = res.value;
    std::string text = res.value ? "true" : "false";
    if (!res.trail.empty()) {
      nlohmann::ordered_json jt = nlohmann::ordered_json::object();
      std::string label = res.value ? "witness" : "counterexample";
      text += ", " + label + " ";
      bool first = true;
      for (const auto& [var, val] : res.trail) {
        jt[var] = to_string_sugared(val);
        if (!first) text += ", ";
        first = false;
        text += var + "=" + to_string_sugared(val);
      }
      j[label] = std::move(jt);
    }
    emit(out, eval_common, j, text + "\n");
    return eval_common.strict && !res.value ? 1 : 0;
  }

  if (rank_cmd->parsed()) {
    const AmbientModel m = resolve_model(rank_model);
    const HfSet x = parse_hf(rank_class);
    const Classification c = classify(x, m, rank_guard);
    nlohmann::ordered_json j;
    nlohmann::ordered_json good = nlohmann::ordered_json::object();
    for (const auto& [name, rank] : c.good) {
      good[name] = rank ? nlohmann::ordered_json(*rank) : nlohmann::ordered_json(nullptr);
    }
    j["good"] = std::move(good);
    j["pseudoGood"] =
        c.pseudo_good ? nlohmann::ordered_json(*c.pseudo_good) : nlohmann::ordered_json(nullptr);
    j["esoteric"] =
        c.esoteric ? nlohmann::ordered_json(*c.esoteric) : nlohmann::ordered_json(nullptr);
    j["guard"] = c.guard;
    std::ostringstream text;
    if (!rank_universe.empty()) {
      auto it = c.good.find(rank_universe);
      if (it == c.good.end()) throw std::runtime_error("unknown universe '" + rank_universe + "'");
      text << "good rank ";
      if (it->second) {
        text << *it->second;
      } else {
        text << "none within guard " << c.guard;
      }
      text << "\n";
    } else {
      for (const auto& [name, rank] : c.good) {
        text << "good(" << name << "): ";
        if (rank) {
          text << *rank;
        } else {
          text << "none";
        }
        text << "\n";
      }
      text << "pseudo-good: ";
      if (c.pseudo_good) {
        text << *c.pseudo_good;
      } else {
        text << "none";
      }
      text << "\nesoteric: ";
      if (c.esoteric) {
        text << *c.esoteric;
      } else {
        text << "none";
      }
      text << "\n";
      if (c.strange_within_bounds()) {
        text << "strange within bounds (guard " << c.guard << ")\n";
      }
    }
    emit(out, rank_common, j, text.str());
    return 0;
  }

  if (ef_cmd->parsed()) {
    const AmbientModel lm = resolve_model(ef_left);
    const AmbientModel rm = resolve_model(ef_right);
    if (lm.multiverse.empty() || rm.multiverse.empty()) {
      throw std::runtime_error("ef requires models with at least one universe");
    }
    const Universe& a = lm.multiverse[0];
    const Universe& b = rm.multiverse[0];
    const bool eq = ef_equivalent(a, b, ef_depth, ef_depth_max);
    nlohmann::ordered_json j;
    j["equivalent"] = eq;
    j["depth"] = ef_depth;
    std::ostringstream text;
    text << (eq ? "equivalent" : "inequivalent") << " at depth " << ef_depth << "\n";
    if (!eq && ef_witness) {
      const auto d = distinguishing_formula(a, b, ef_depth, ef_depth_max);
      if (d) {
        j["distinguisher"] = to_text(**d);
        text << "distinguisher: " << to_text(**d) << "\n";
      }
    }
    emit(out, ef_common, j, text.str());
    return ef_common.strict && !eq ? 1 : 0;
  }

  if (setcat_cmd->parsed()) {
    const AmbientModel m = resolve_model(sc_model);
    const Universe* u = sc_universe.empty()
                            ? (m.multiverse.empty() ? nullptr : &m.multiverse[0])
                            : m.find_universe(sc_universe);
    if (!u) throw std::runtime_error("unknown universe '" + sc_universe + "'");
    if (sc_sample > 0) sc_opts.sample = sc_sample;
    auto [cat, laws] = build_set_category(*u, sc_opts);
    nlohmann::ordered_json j;
    j["universe"] = u->name;
    j["objects"] = cat.object_names.size();
    j["arrows"] = cat.arrows.size();
    j["verdict"] = laws.verdict();
    nlohmann::ordered_json missing = nlohmann::ordered_json::array();
    for (std::size_t x : laws.missing_identities) missing.push_back(cat.object_names[x]);
    j["missingIdentities"] = std::move(missing);
    j["nonClosedCompositions"] = laws.non_closed_compositions.size();
    j["identityViolations"] = laws.identity_violations.size();
    j["associativityViolations"] = laws.associativity_violations.size();
    std::string text = sc_laws ? law_report_text(cat, laws)
                               : cat.name + ": " + std::to_string(cat.object_names.size()) +
                                     " objects, " + std::to_string(cat.arrows.size()) +
                                     " arrows, verdict " + laws.verdict() + "\n";
    emit(out, sc_common, j, text);
    return sc_common.strict && !laws.is_category() ? 1 : 0;
  }

  if (fun_cmd->parsed()) {
    const FinCategory from = load_category_file(fun_from);
    const FinCategory to = load_category_file(fun_to);
    const std::vector<Functor> fs = enumerate_functors(from, to, fun_ceiling);
    nlohmann::ordered_json j;
    j["functors"] = fs.size();
    std::ostringstream text;
    text << fs.size() << " functor(s) from " << from.name << " to " << to.name << "\n";
    if (fun_category) {
      const FinCategory fc = functor_category(from, to, fun_ceiling);
      const LawReport laws = check_category_laws(fc);
      j["functorCategory"] = {{"objects", fc.object_names.size()},
                              {"arrows", fc.arrows.size()},
                              {"verdict", laws.verdict()}};
      text << fc.name << ": " << fc.object_names.size() << " objects, " << fc.arrows.size()
           << " arrows, verdict " << laws.verdict() << "\n";
    }
    emit(out, fun_common, j, text.str());
    return 0;
  }

  err << "no subcommand\n";
  return 2;
}

}  // namespace

}  // namespace mverse
