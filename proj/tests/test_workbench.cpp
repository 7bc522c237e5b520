#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rwl/workbench.hpp"
#include "util.hpp"

using namespace rwl;
using namespace rwl::wb;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(RunConfig cfg) {
  std::ostringstream out, err;
  int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig cmd(const std::string& c, std::vector<std::string> theories = {}) {
  RunConfig cfg;
  cfg.command = c;
  for (auto& t : theories) cfg.theory_paths.push_back(testutil::corpus(t));
  return cfg;
}

std::string tmp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_SUITE("workbench_cli") {
  TEST_CASE("prove exits 1 on the exhausted goal and names its budget") {
    RunConfig cfg = cmd("prove", {"sec2_5/base.crwl"});
    cfg.goal = "c -> h(d)";
    cfg.budget = testutil::budget(12, 8, 1000000);
    auto o = call(cfg);
    CHECK(o.code == exit_check_failed);
    CHECK(o.out.find("exhausted") != std::string::npos);
    CHECK(o.out.find("depth=12 term-size=8 nodes=1000000") != std::string::npos);
  }

  TEST_CASE("prove writes derivations that check-derivation accepts") {
    RunConfig cfg = cmd("prove", {"crwl_suite/guarded.crwl"});
    cfg.goal = "f(s(z)) -> a";
    std::string path = tmp("rwl_test_derivation.json");
    cfg.derivation = path;
    auto p = call(cfg);
    RunConfig chk = cmd("check-derivation", {"crwl_suite/guarded.crwl"});
    chk.derivation = path;
    auto c = call(chk);
    if (p.code == exit_ok) CHECK(c.code == exit_ok);
    else CHECK(c.code == exit_bad_config);  // nothing was proved, nothing written

    RunConfig all = cmd("prove", {"rl_suite/chain.rl"});
    all.derivation = path;
    call(all);
    RunConfig chk2 = cmd("check-derivation", {"rl_suite/chain.rl"});
    chk2.derivation = path;
    CHECK(call(chk2).code == exit_ok);
  }

  TEST_CASE("translate beta writes a theory that re-parses") {
    RunConfig cfg = cmd("translate", {"rl_suite/times_zero.rl"});
    cfg.direction = "beta";
    cfg.output = tmp("rwl_test_beta.crwl");
    auto o = call(cfg);
    CHECK(o.code == exit_ok);
    Theory th = load_theory_file(*cfg.output);
    CHECK(std::holds_alternative<CrwlTheory>(th));
    CHECK(std::filesystem::exists(*cfg.output + ".provenance.json"));
  }

  TEST_CASE("bad configurations exit 2") {
    CHECK(call(cmd("frobnicate")).code == exit_bad_config);
    RunConfig missing = cmd("prove");
    missing.theory_paths = {"/nonexistent/x.crwl"};
    CHECK(call(missing).code == exit_bad_config);
    RunConfig budget = cmd("prove", {"sec2_5/base.crwl"});
    budget.budget.max_nodes = 0;
    CHECK(call(budget).code == exit_bad_config);
    RunConfig dir = cmd("translate", {"sec2_5/base.crwl"});
    dir.direction = "gamma";
    CHECK(call(dir).code == exit_bad_config);
    RunConfig wrong = cmd("translate", {"sec2_5/base.crwl"});
    wrong.direction = "beta";
    CHECK(call(wrong).code == exit_bad_config);
    RunConfig goal = cmd("prove", {"sec2_5/base.crwl"});
    goal.goal = "c -> ";
    CHECK(call(goal).code == exit_bad_config);
    RunConfig crit = cmd("paper-suite");
    crit.criteria = {11};
    CHECK(call(crit).code == exit_bad_config);
  }

  TEST_CASE("model commands on the counterexample files") {
    RunConfig cm = cmd("check-model", {"sec3_6/theory.crwl"});
    cm.model_paths = {testutil::corpus("sec3_6/models.txt")};
    CHECK(call(cm).code == exit_ok);
    RunConfig ch = cmd("check-hom");
    ch.model_paths = cm.model_paths;
    CHECK(call(ch).code == exit_ok);
    RunConfig fe = cmd("find-equalizer", {"sec3_6/theory.crwl"});
    fe.model_paths = cm.model_paths;
    fe.max_size = 3;
    CHECK(call(fe).code == exit_check_failed);
    fe.expect_none = true;
    CHECK(call(fe).code == exit_ok);
  }

  TEST_CASE("machine output is byte-identical across runs") {
    RunConfig cfg = cmd("paper-suite");
    cfg.machine = true;
    cfg.criteria = {1, 4, 6, 8};
    auto a = call(cfg), b = call(cfg);
    CHECK(a.code == exit_ok);
    CHECK(a.out == b.out);
    std::istringstream lines(a.out);
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
      auto j = nlohmann::json::parse(line);
      CHECK(j.contains("kind"));
      if (j["kind"] == "record" && !j["verdict"].get<std::string>().empty() && j["item"].get<std::string>().find(':') != std::string::npos)
        CHECK(j.contains("budget"));
      ++n;
    }
    CHECK(n > 5);

    RunConfig prove = cmd("prove", {"crwl_suite/coin.crwl"});
    prove.machine = true;
    CHECK(call(prove).out == call(prove).out);
  }

  TEST_CASE("RWL_CORPUS overrides the corpus location") {
    setenv("RWL_CORPUS", "/somewhere/else", 1);
    CHECK(default_corpus_dir() == "/somewhere/else");
    unsetenv("RWL_CORPUS");
    CHECK(default_corpus_dir() == std::string(RWL_TEST_CORPUS));
  }
}
