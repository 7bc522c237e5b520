#include <CLI11.hpp>
#include <iostream>

#include "rwl/workbench.hpp"

int main(int argc, char** argv) {
  using namespace rwl::wb;
  RunConfig cfg;
  CLI::App app{"rwl: provers, translations and finite models for rewriting logics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "human";
  app.add_option("--budget-depth", cfg.budget.max_depth, "maximum derivation height")->capture_default_str();
  app.add_option("--budget-term-size", cfg.budget.max_term_size, "maximum node count of pool terms")->capture_default_str();
  app.add_option("--budget-nodes", cfg.budget.max_nodes, "maximum search expansions")->capture_default_str();
  app.add_option("--format", format, "human or machine (JSON lines)")->check(CLI::IsMember({"human", "machine"}));
  app.add_option("--seed", cfg.seed, "seed for randomized suites")->capture_default_str();

  auto theories = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("theory", cfg.theory_paths, "theory files");
    if (required) o->required();
  };
  auto models = [&](CLI::App* s) { s->add_option("--models", cfg.model_paths, "model files")->required(); };
  auto names = [&](CLI::App* s) { s->add_option("--name", cfg.names, "only these objects (repeatable)"); };

  auto* prove = app.add_subcommand("prove", "search for derivations of goals");
  theories(prove, true);
  prove->add_option("--goal", cfg.goal, "goal text; default: every goal in the file");
  prove->add_option("--derivation", cfg.derivation, "write derivations of proved goals as JSON");

  auto* tr = app.add_subcommand("translate", "encode a theory into the other logic");
  theories(tr, true);
  tr->add_option("--dir", cfg.direction, "alpha (crwl to rl) or beta (rl to crwl)")->required();
  tr->add_option("-o,--output", cfg.output, "output theory file; default stdout");
  tr->add_option("--provenance", cfg.provenance, "provenance sidecar; default OUTPUT.provenance.json");

  auto* cd = app.add_subcommand("check-derivation", "check derivations written by prove");
  theories(cd, true);
  cd->add_option("--derivation", cfg.derivation, "derivation JSON file")->required();

  auto* cm = app.add_subcommand("check-model", "validate algebras or preorder models against a theory");
  theories(cm, true);
  models(cm);
  names(cm);

  auto* ch = app.add_subcommand("check-hom", "check homomorphisms between finite models");
  models(ch);
  names(ch);

  auto* fe = app.add_subcommand("find-equalizer", "search for an equalizer of two homomorphisms");
  theories(fe, true);
  models(fe);
  fe->add_option("--f", cfg.f_name, "first homomorphism")->capture_default_str();
  fe->add_option("--g", cfg.g_name, "second homomorphism")->capture_default_str();
  fe->add_option("--max-size", cfg.max_size, "largest carrier to try")->capture_default_str();
  fe->add_flag("--expect-none", cfg.expect_none, "succeed when no equalizer exists");

  auto* en = app.add_subcommand("enumerate", "list the finite models of a theory");
  theories(en, true);
  en->add_option("--max-size", cfg.max_size, "largest carrier")->capture_default_str();

  auto* ps = app.add_subcommand("paper-suite", "run the acceptance criteria and print a scorecard");
  ps->add_option("--criterion", cfg.criteria, "only these criteria (repeatable)");
  ps->add_option("--corpus", cfg.corpus, "corpus directory; default RWL_CORPUS or the bundled corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_bad_config;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.machine = format == "machine";
  return run(cfg, std::cout, std::cerr);
}
