#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include "common.hpp"
#include "rwl/model_io.hpp"
#include "rwl/syntax.hpp"

namespace rwl::wb {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* const kCommands[] = {"prove",          "translate", "check-derivation", "check-model",
                                 "check-hom",      "find-equalizer", "enumerate",   "paper-suite"};

bool needs_theory(const std::string& c) { return c != "paper-suite" && c != "check-hom"; }
bool needs_models(const std::string& c) { return c == "check-model" || c == "check-hom" || c == "find-equalizer"; }

// Human lines go out as they come; machine records are JSON, one per line.
class Emitter {
 public:
  Emitter(bool machine, std::ostream& out) : machine_(machine), out_(out) {}

  void emit(const json& rec, const std::string& human) {
    if (machine_) out_ << rec.dump() << '\n';
    else out_ << human << '\n';
  }
  bool machine() const { return machine_; }
  std::ostream& raw() { return out_; }

 private:
  bool machine_;
  std::ostream& out_;
};

std::string mark(bool ok) { return ok ? "ok  " : "FAIL"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

std::vector<Statement> goals_for(const Theory& th, const RunConfig& cfg) {
  if (cfg.goal) return {parse_statement(th, *cfg.goal)};
  return std::visit([](const auto& t) { return t.goals; }, th);
}

bool selected(const RunConfig& cfg, const std::string& name) {
  return cfg.names.empty() || std::find(cfg.names.begin(), cfg.names.end(), name) != cfg.names.end();
}

int cmd_prove(const RunConfig& cfg, Emitter& em) {
  bool all = true;
  json saved = json::array();
  for (const auto& p : cfg.theory_paths) {
    Theory th = load_theory_file(p);
    auto goals = goals_for(th, cfg);
    if (goals.empty()) throw std::invalid_argument(p + ": no goals; pass --goal");
    for (const auto& g : goals) {
      json rec = {{"command", "prove"}, {"theory", theory_name(th)}, {"goal", print_statement(g)},
                  {"budget", cfg.budget.describe()}};
      bool proved = false, checked = false;
      long nodes = 0;
      int height = 0;
      if (auto* T = std::get_if<CrwlTheory>(&th)) {
        auto res = crwl::prove(*T, g, cfg.budget);
        proved = res.proved(), nodes = res.stats.nodes;
        rec["verdict"] = detail::verdict(res);
        if (proved) {
          checked = crwl::check_derivation(*T, *res.derivation).ok;
          height = res.derivation->height();
          saved.push_back({{"kind", "crwl"}, {"theory", T->name}, {"goal", print_statement(g)},
                           {"derivation", crwl::to_json(*res.derivation, *T)}});
        }
      } else {
        const auto& R = std::get<RlTheory>(th);
        auto res = rl::prove(R, g, cfg.budget);
        proved = res.proved(), nodes = res.stats.nodes;
        rec["verdict"] = detail::verdict(res);
        if (proved) {
          checked = rl::check_derivation(R, *res.derivation).ok;
          height = res.derivation->height();
          saved.push_back({{"kind", "rl"}, {"theory", R.name}, {"goal", print_statement(g)},
                           {"derivation", rl::to_json(*res.derivation)}});
        }
      }
      rec["nodes"] = nodes;
      if (proved) rec["height"] = height, rec["checked"] = checked;
      bool ok = proved && checked;
      all = all && ok;
      std::string human = mark(ok) + " " + theory_name(th) + ": " + print_statement(g) + "  " +
                          rec["verdict"].get<std::string>() + " under " + cfg.budget.describe() +
                          " (nodes " + std::to_string(nodes) +
                          (proved ? ", height " + std::to_string(height) + (checked ? ", checked" : ", CHECK FAILED") : "") + ")";
      em.emit(rec, human);
    }
  }
  if (cfg.derivation) write_file(*cfg.derivation, saved.dump(2) + "\n");
  return all ? exit_ok : exit_check_failed;
}

int cmd_translate(const RunConfig& cfg, Emitter& em) {
  const std::string& src = cfg.theory_paths.front();
  Theory th = load_theory_file(src);
  Theory result;
  std::vector<std::string> prov;
  if (cfg.direction == "alpha") {
    auto* T = std::get_if<CrwlTheory>(&th);
    if (!T) throw std::invalid_argument(src + ": alpha takes a crwl theory");
    auto a = translate::alpha(*T);
    result = a.theory;
    prov = a.provenance;
  } else {
    auto* T = std::get_if<RlTheory>(&th);
    if (!T) throw std::invalid_argument(src + ": beta takes an rl theory");
    auto b = translate::beta(*T);
    result = b.theory;
    prov = b.provenance;
  }
  std::string text = print_theory(result);
  bool reparsed = true;
  std::string why;
  try {
    parse_theory(text);
  } catch (const TheoryError& e) {
    reparsed = false;
    why = e.what();
  }
  json rec = {{"command", "translate"}, {"direction", cfg.direction}, {"source", theory_name(th)},
              {"target", theory_name(result)}, {"reparsed", reparsed}};
  if (!why.empty()) rec["error"] = why;
  std::optional<std::string> sidecar = cfg.provenance;
  if (cfg.output) {
    write_file(*cfg.output, text);
    if (!sidecar) sidecar = *cfg.output + ".provenance.json";
    rec["output"] = *cfg.output;
  } else if (!em.machine()) {
    em.raw() << text;
  } else {
    rec["text"] = text;
  }
  if (sidecar) {
    write_file(*sidecar, translate::provenance_json(prov, cfg.direction).dump(2) + "\n");
    rec["provenance"] = *sidecar;
  }
  em.emit(rec, mark(reparsed) + " " + cfg.direction + "(" + theory_name(th) + ") -> " + theory_name(result) +
                   (cfg.output ? " written to " + *cfg.output : "") + (reparsed ? ", re-parses" : ", does not re-parse: " + why));
  return reparsed ? exit_ok : exit_check_failed;
}

int cmd_check_derivation(const RunConfig& cfg, Emitter& em) {
  Theory th = load_theory_file(cfg.theory_paths.front());
  json file;
  try {
    file = json::parse(read_file(*cfg.derivation));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(*cfg.derivation + ": " + e.what());
  }
  if (!file.is_array()) file = json::array({file});
  bool all = true;
  std::size_t seen = 0;
  for (const auto& entry : file) {
    if (!entry.is_object() || !entry.contains("derivation"))
      throw std::invalid_argument(*cfg.derivation + ": entries need a derivation field");
    std::string owner = entry.value("theory", theory_name(th));
    if (owner != theory_name(th)) continue;
    ++seen;
    std::string goal = entry.value("goal", "");
    bool ok = false;
    std::string msg, concl;
    try {
      if (auto* T = std::get_if<CrwlTheory>(&th)) {
        auto d = crwl::derivation_from_json(entry["derivation"], *T);
        auto chk = crwl::check_derivation(*T, *d);
        ok = chk.ok, msg = chk.message, concl = print_statement(d->conclusion);
      } else {
        const auto& R = std::get<RlTheory>(th);
        auto d = rl::derivation_from_json(entry["derivation"], R);
        auto chk = rl::check_derivation(R, *d);
        ok = chk.ok, msg = chk.message, concl = print_statement(d->conclusion());
      }
    } catch (const std::exception& e) {
      msg = e.what();
    }
    if (!goal.empty() && !concl.empty() && goal != concl) {
      ok = false;
      msg = "concludes " + concl + ", not " + goal;
    }
    all = all && ok;
    json rec = {{"command", "check-derivation"}, {"theory", theory_name(th)}, {"goal", goal.empty() ? concl : goal},
                {"accepted", ok}};
    if (!ok) rec["error"] = msg;
    em.emit(rec, mark(ok) + " " + theory_name(th) + ": " + (goal.empty() ? concl : goal) + (ok ? " accepted" : " rejected: " + msg));
  }
  if (seen == 0) throw std::invalid_argument(*cfg.derivation + ": no derivations for theory " + theory_name(th));
  return all ? exit_ok : exit_check_failed;
}

std::string problems(const model::Report& r) {
  std::string s;
  for (const auto& p : r.problems) s += (s.empty() ? "" : "; ") + p;
  return s;
}

int cmd_check_model(const RunConfig& cfg, Emitter& em) {
  Theory th = load_theory_file(cfg.theory_paths.front());
  auto mf = model::load_model_files(cfg.model_paths);
  bool all = true;
  std::size_t seen = 0;
  auto report = [&](const std::string& name, const model::Report& rep, bool is_model) {
    ++seen;
    bool ok = rep.ok() && is_model;
    all = all && ok;
    json rec = {{"command", "check-model"}, {"theory", theory_name(th)}, {"object", name}, {"valid", rep.ok()},
                {"model", is_model}};
    if (!rep.ok()) rec["problems"] = rep.problems;
    em.emit(rec, mark(ok) + " " + name + (rep.ok() ? "" : " invalid: " + problems(rep)) +
                     (rep.ok() ? (is_model ? " is a model of " : " is not a model of ") + theory_name(th) : ""));
  };
  if (auto* T = std::get_if<CrwlTheory>(&th)) {
    for (const auto& a : mf.algebras) {
      if (!selected(cfg, a->name)) continue;
      auto rep = model::validate_algebra(*a);
      report(a->name, rep, rep.ok() && model::is_model(*a, *T));
    }
  } else {
    const auto& R = std::get<RlTheory>(th);
    for (const auto& m : mf.preorders) {
      if (!selected(cfg, m->name)) continue;
      auto rep = model::validate_preorder_model(*m);
      report(m->name, rep, rep.ok() && model::is_preorder_model(*m, R));
    }
  }
  if (seen == 0) throw std::invalid_argument("no matching models in the model files");
  return all ? exit_ok : exit_check_failed;
}

int cmd_check_hom(const RunConfig& cfg, Emitter& em) {
  auto mf = model::load_model_files(cfg.model_paths);
  bool all = true;
  std::size_t seen = 0;
  auto report = [&](const std::string& name, const std::string& src, const std::string& tgt, const model::Report& rep) {
    ++seen;
    all = all && rep.ok();
    json rec = {{"command", "check-hom"}, {"hom", name}, {"source", src}, {"target", tgt}, {"accepted", rep.ok()}};
    if (!rep.ok()) rec["problems"] = rep.problems;
    em.emit(rec, mark(rep.ok()) + " " + name + " : " + src + " -> " + tgt + (rep.ok() ? "" : ": " + problems(rep)));
  };
  for (const auto& h : mf.homs)
    if (selected(cfg, h.name)) report(h.name, h.source->name, h.target->name, model::check_homomorphism(h));
  for (const auto& h : mf.preorder_homs)
    if (selected(cfg, h.name)) report(h.name, h.source->name, h.target->name, model::check_preorder_hom(h));
  if (seen == 0) throw std::invalid_argument("no matching homomorphisms in the model files");
  return all ? exit_ok : exit_check_failed;
}

int cmd_find_equalizer(const RunConfig& cfg, Emitter& em) {
  Theory th = load_theory_file(cfg.theory_paths.front());
  auto mf = model::load_model_files(cfg.model_paths);
  json rec = {{"command", "find-equalizer"}, {"f", cfg.f_name}, {"g", cfg.g_name}, {"max_size", cfg.max_size},
              {"expect_none", cfg.expect_none}};
  bool found = false;
  std::string what;
  if (auto* T = std::get_if<CrwlTheory>(&th)) {
    const auto *F = mf.hom(cfg.f_name), *G = mf.hom(cfg.g_name);
    if (!F || !G) throw std::invalid_argument("model files lack homomorphisms " + cfg.f_name + " and " + cfg.g_name);
    auto s = model::search_equalizer(*F, *G, cfg.max_size, T);
    found = s.found.has_value();
    what = s.describe();
    rec["candidates"] = s.candidates;
    if (found) rec["object"] = s.found->object->name;
  } else {
    const auto& R = std::get<RlTheory>(th);
    const auto *F = mf.preorder_hom(cfg.f_name), *G = mf.preorder_hom(cfg.g_name);
    if (!F || !G) throw std::invalid_argument("model files lack preorder homomorphisms " + cfg.f_name + " and " + cfg.g_name);
    auto e = model::preorder_equalizer(*F, *G, R, cfg.max_size);
    found = e.ok();
    what = found ? "equalizer with " + std::to_string(e.object->size()) + " elements" : "no equalizer: " + e.message;
  }
  bool ok = found != cfg.expect_none;
  rec["found"] = found;
  rec["pass"] = ok;
  em.emit(rec, mark(ok) + " " + cfg.f_name + ", " + cfg.g_name + ": " + what + " (carrier size <= " +
                   std::to_string(cfg.max_size) + ")");
  return ok ? exit_ok : exit_check_failed;
}

int cmd_enumerate(const RunConfig& cfg, Emitter& em) {
  Theory th = load_theory_file(cfg.theory_paths.front());
  std::size_t n = 0;
  auto one = [&](const std::string& name, const std::string& text) {
    ++n;
    if (em.machine()) em.emit({{"command", "enumerate"}, {"object", name}, {"text", text}}, "");
    else em.raw() << text << '\n';
  };
  if (auto* T = std::get_if<CrwlTheory>(&th)) {
    model::enumerate_algebras(T->sig, cfg.max_size, [&](const model::FiniteCrwlAlgebra& a) { return model::is_model(a, *T); },
                              [&](const model::FiniteCrwlAlgebra& a) {
                                one(a.name, model::print_algebra(a));
                                return true;
                              });
  } else {
    const auto& R = std::get<RlTheory>(th);
    model::enumerate_preorder_models(R, cfg.max_size, [&](const model::PreorderRlModel& m) {
      one(m.name, model::print_preorder(m));
      return true;
    });
  }
  em.emit({{"command", "enumerate"}, {"theory", theory_name(th)}, {"count", n}, {"max_size", cfg.max_size}},
          "# " + std::to_string(n) + " models of " + theory_name(th) + " with carrier size <= " + std::to_string(cfg.max_size));
  return exit_ok;
}

int cmd_paper_suite(const RunConfig& cfg, Emitter& em) {
  SuiteOptions o{cfg.corpus ? *cfg.corpus : default_corpus_dir(), cfg.seed};
  AcceptanceSuite suite(o);
  std::vector<int> ids = cfg.criteria;
  if (ids.empty())
    for (int i = 1; i <= kCriteria; ++i) ids.push_back(i);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::vector<CriterionResult> results;
  for (int id : ids) results.push_back(suite.run(id));
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass();

  if (em.machine()) {
    // No timings, so identical runs print identical bytes.
    std::vector<std::tuple<int, int, std::string, json>> lines;
    for (const auto& r : results) {
      lines.push_back({r.id, 0, "", json{{"kind", "criterion"}, {"criterion", r.id}, {"title", r.title},
                                        {"pass", r.pass()}, {"summary", r.summary}, {"time_limit_s", r.time_limit_s}}});
      for (const auto& rec : r.records)
        lines.push_back({r.id, 1, rec.item, json{{"kind", "record"}, {"criterion", r.id}, {"item", rec.item},
                                                 {"pass", rec.pass}, {"verdict", rec.verdict}, {"budget", rec.budget},
                                                 {"detail", rec.detail}}});
    }
    std::stable_sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) < std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
    });
    for (const auto& l : lines) em.emit(std::get<3>(l), "");
    em.emit({{"kind", "scorecard"}, {"passed", passed}, {"total", results.size()}}, "");
  } else {
    auto& out = em.raw();
    for (const auto& r : results) {
      char secs[32];
      std::snprintf(secs, sizeof secs, "%.1f", r.seconds);
      out << (r.pass() ? "PASS" : "FAIL") << "  " << r.id << ". " << r.title << "  [" << secs << " s, limit "
          << r.time_limit_s << " s]  " << r.summary << '\n';
      if (!r.within_time()) out << "      over the time limit\n";
      for (const auto& rec : r.records) {
        if (rec.pass) continue;
        out << "      x " << rec.item << ": " << rec.verdict;
        if (!rec.budget.empty()) out << " under " << rec.budget;
        if (!rec.detail.empty()) out << " (" << rec.detail << ")";
        out << '\n';
      }
    }
    out << passed << "/" << results.size() << " criteria passed\n";
  }
  return passed == results.size() ? exit_ok : exit_check_failed;
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (std::find(std::begin(kCommands), std::end(kCommands), cfg.command) == std::end(kCommands))
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
  cfg.budget.validate();
  if (needs_theory(cfg.command) && cfg.theory_paths.empty()) throw std::invalid_argument(cfg.command + " needs a theory file");
  for (const auto& p : cfg.theory_paths)
    if (!fs::is_regular_file(p)) throw std::invalid_argument("no such theory file: " + p);
  if (needs_models(cfg.command) && cfg.model_paths.empty()) throw std::invalid_argument(cfg.command + " needs --models");
  for (const auto& p : cfg.model_paths)
    if (!fs::is_regular_file(p)) throw std::invalid_argument("no such model file: " + p);
  if (cfg.command == "translate") {
    if (cfg.direction != "alpha" && cfg.direction != "beta") throw std::invalid_argument("--dir must be alpha or beta");
    if (cfg.theory_paths.size() != 1) throw std::invalid_argument("translate takes exactly one theory file");
  }
  if (cfg.command == "check-derivation") {
    if (!cfg.derivation) throw std::invalid_argument("check-derivation needs --derivation");
    if (!fs::is_regular_file(*cfg.derivation)) throw std::invalid_argument("no such derivation file: " + *cfg.derivation);
  }
  if (cfg.max_size < 1 || cfg.max_size > 6) throw std::invalid_argument("--max-size must be between 1 and 6");
  for (int c : cfg.criteria)
    if (c < 1 || c > kCriteria) throw std::invalid_argument("criteria are numbered 1 to " + std::to_string(kCriteria));
  if (cfg.corpus && !fs::is_directory(*cfg.corpus)) throw std::invalid_argument("no such corpus directory: " + *cfg.corpus);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    Emitter em(cfg.machine, out);
    const std::string& c = cfg.command;
    if (c == "prove") return cmd_prove(cfg, em);
    if (c == "translate") return cmd_translate(cfg, em);
    if (c == "check-derivation") return cmd_check_derivation(cfg, em);
    if (c == "check-model") return cmd_check_model(cfg, em);
    if (c == "check-hom") return cmd_check_hom(cfg, em);
    if (c == "find-equalizer") return cmd_find_equalizer(cfg, em);
    if (c == "enumerate") return cmd_enumerate(cfg, em);
    return cmd_paper_suite(cfg, em);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_bad_config;
  } catch (const TheoryError& e) {
    err << "error: " << e.what() << '\n';
    return exit_bad_config;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
}

}  // namespace rwl::wb
