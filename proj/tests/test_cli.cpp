#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mverse/cli.hpp"

using namespace mverse;

namespace {

struct RunResult {
  int status;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string models_dir() { return std::string(MVERSE_SOURCE_DIR) + "/models/"; }

}  // namespace

TEST_CASE("audit end to end") {
  const RunResult r = run({"audit", "--model", "weak", "--axioms", "t0-internal",
                           "--format", "json"});
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["model"] == "weak");
  CHECK(j["reading"] == "unfold-before-relativize");
  CHECK(j["axioms"].size() == 6);

  // text output carries the failing assignments
  const RunResult t = run({"audit", "--model", "weak", "--axioms", "a3-internal"});
  CHECK(t.status == 0);
  CHECK(t.out.find("FAILS") != std::string::npos);
  CHECK(t.out.find("counterexample") != std::string::npos);

  // strict mode turns a Fails into exit 1
  const RunResult s =
      run({"audit", "--model", "weak", "--axioms", "a3-internal", "--strict"});
  CHECK(s.status == 1);
  const RunResult ok = run({"audit", "--model", "weak", "--axioms", "a6", "--strict"});
  CHECK(ok.status == 0);
}

TEST_CASE("audit determinism: byte-identical json") {
  const std::vector<std::string> args = {"audit", "--model", "weak", "--axioms",
                                         "lemma", "--format", "json"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("eval command") {
  const RunResult r = run({"eval", "--model", "weak", "--formula",
                           "exists z. forall x. !(x in z)", "--relativize", "V"});
  CHECK(r.status == 0);
  CHECK(r.out == "true, witness z={}\n");

  const RunResult f = run({"eval", "--model", "weak", "--formula",
                           "exists z. forall w. (w in z <-> (w = 2 | w = 3))",
                           "--relativize", "V", "--strict"});
  CHECK(f.status == 1);
  CHECK(f.out.rfind("false", 0) == 0);

  // ambient evaluation with a binding
  const RunResult b = run({"eval", "--model", "frag3", "--formula", "x sub 2",
                           "--bind", "x={1}"});
  CHECK(b.status == 0);
  CHECK(b.out.rfind("true", 0) == 0);

  // unbound variable is a usage error
  const RunResult u = run({"eval", "--model", "weak", "--formula", "x in y"});
  CHECK(u.status == 2);
  CHECK(u.err.find("unbound variable") != std::string::npos);

  // parse errors report a position
  const RunResult p = run({"eval", "--model", "weak", "--formula", "forall x ("});
  CHECK(p.status == 2);
  CHECK(p.err.find("offset 10") != std::string::npos);
}

TEST_CASE("rank command") {
  const RunResult r = run({"rank", "--class", "{{}}", "--universe", "V", "--model", "weak"});
  CHECK(r.status == 0);
  CHECK(r.out == "good rank 0\n");

  const RunResult j = run({"rank", "--class", "{1}", "--model", "weak", "--format", "json"});
  CHECK(j.status == 0);
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed.contains("good"));
  CHECK(parsed.contains("pseudoGood"));
  CHECK(parsed.contains("esoteric"));
  CHECK(parsed["guard"] == 8);
}

TEST_CASE("ef command") {
  const RunResult r = run({"ef", "--left", "frag2", "--right", "frag3", "--depth", "2",
                           "--witness", "--format", "json"});
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["equivalent"] == false);
  CHECK(j["depth"] == 2);
  CHECK(j.contains("distinguisher"));

  const RunResult eq = run({"ef", "--left", "frag2", "--right", "frag3", "--depth", "1"});
  CHECK(eq.status == 0);
  CHECK(eq.out.find("equivalent") == 0);

  const RunResult strict =
      run({"ef", "--left", "frag2", "--right", "frag3", "--depth", "2", "--strict"});
  CHECK(strict.status == 1);

  const RunResult guard =
      run({"ef", "--left", "frag2", "--right", "frag3", "--depth", "9"});
  CHECK(guard.status == 2);
}

TEST_CASE("setcat command") {
  const RunResult r = run({"setcat", "--model", "weak", "--universe", "V", "--laws"});
  CHECK(r.status == 0);
  CHECK(r.out.find("5 objects, 5 arrows") != std::string::npos);
  CHECK(r.out.find("partial") != std::string::npos);
  CHECK(r.out.find("missing identities") != std::string::npos);

  const RunResult j = run({"setcat", "--model", "singleton", "--format", "json"});
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["objects"] == 1);
  CHECK(parsed["arrows"] == 1);
  CHECK(parsed["verdict"] == "category");

  // oversized carriers need --sample
  const RunResult g = run({"setcat", "--model", "frag5"});
  CHECK(g.status == 2);
  const RunResult s = run({"setcat", "--model", "frag5", "--sample", "6"});
  CHECK(s.status == 0);
}

TEST_CASE("functors command") {
  const RunResult r = run({"functors", "--from", models_dir() + "discrete2.cat", "--to",
                           models_dir() + "arrow.cat", "--category", "--format", "json"});
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["functors"] == 4);
  CHECK(j["functorCategory"]["objects"] == 4);
  CHECK(j["functorCategory"]["verdict"] == "category");

  const RunResult t = run({"functors", "--from", models_dir() + "terminal.cat", "--to",
                           models_dir() + "arrow.cat"});
  CHECK(t.out.find("2 functor(s)") == 0);
}

TEST_CASE("model files load by path") {
  const RunResult r =
      run({"audit", "--model", models_dir() + "weak.mv", "--axioms", "a6"});
  CHECK(r.status == 0);
  CHECK(r.out.find("HOLDS") != std::string::npos);

  // a temp file with a non-standard universe goes through the same door
  const auto tmp = std::filesystem::temp_directory_path() / "mverse_loop_model.mv";
  {
    std::ofstream f(tmp);
    f << "universe L = { 1 } membership { (1, 1) }\nmultiverse = [L]\n";
  }
  const RunResult loop =
      run({"eval", "--model", tmp.string(), "--formula", "exists x. x in x",
           "--relativize", "L"});
  CHECK(loop.status == 0);
  CHECK(loop.out.rfind("true", 0) == 0);
  std::filesystem::remove(tmp);
}

TEST_CASE("usage errors") {
  CHECK(run({"audit", "--model", "weak", "--axioms", "bogus"}).status == 2);
  CHECK(run({"audit", "--model", "missing.mv", "--axioms", "a6"}).status == 2);
  CHECK(run({"nonsense"}).status == 2);
  CHECK(run({"rank", "--class", "{", "--model", "weak"}).status == 2);
  CHECK(run({"--version"}).out == "mverse 0.1.0\n");
}

TEST_CASE("guards are overridable through the environment") {
  setenv("MVERSE_EF_DEPTH_MAX", "2", 1);
  const RunResult blocked =
      run({"ef", "--left", "frag2", "--right", "frag3", "--depth", "3"});
  CHECK(blocked.status == 2);
  CHECK(blocked.err.find("guard") != std::string::npos);
  unsetenv("MVERSE_EF_DEPTH_MAX");
  const RunResult fine =
      run({"ef", "--left", "frag2", "--right", "frag3", "--depth", "3"});
  CHECK(fine.status == 0);
}

TEST_CASE("extra schema instances through the cli") {
  const RunResult r = run({"audit", "--model", "weak", "--axioms", "a6", "--sep",
                           "x = x", "--format", "json"});
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["axioms"].size() == 2);
  CHECK(j["axioms"][1]["id"] == "extra#1");
  CHECK(j["axioms"][1]["verdict"] == "holds");
}
