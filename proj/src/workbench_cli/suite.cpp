#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#include "common.hpp"

namespace rwl::wb {

std::string default_corpus_dir() {
  if (const char* env = std::getenv("RWL_CORPUS"); env && *env) return env;
  return RWL_DEFAULT_CORPUS;
}

AcceptanceSuite::AcceptanceSuite(SuiteOptions opts) : opts_(std::move(opts)) {
  if (opts_.corpus.empty()) opts_.corpus = default_corpus_dir();
}

std::string AcceptanceSuite::path(const std::string& rel) const {
  return (std::filesystem::path(opts_.corpus) / rel).string();
}

std::vector<std::string> AcceptanceSuite::listing(const std::string& dir, const std::string& ext) const {
  std::vector<std::string> out;
  std::filesystem::path p = std::filesystem::path(opts_.corpus) / dir;
  if (!std::filesystem::is_directory(p)) throw TheoryError("corpus directory missing: " + p.string());
  for (const auto& e : std::filesystem::directory_iterator(p))
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct Meta {
  const char* title;
  double limit_s;
};

const Meta kMeta[kCriteria] = {
    {"non-transitivity triple", 10},
    {"CRWL against alpha-encoded RL", 120},
    {"classification predicates under alpha", 60},
    {"naturals: pexpr but not pterm", 5},
    {"RL against beta-encoded CRWL", 120},
    {"no-equalizer witness", 300},
    {"preorder models: one point, equalizers", 120},
    {"satisfaction condition", 120},
    {"entailment laws", 180},
    {"soundness bridge", 180},
};

}  // namespace

CriterionResult AcceptanceSuite::run(int id) {
  if (id < 1 || id > kCriteria) throw std::invalid_argument("no criterion " + std::to_string(id));
  detail::Stopwatch sw;
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = non_transitivity(); break;
      case 2: r = alpha_oracle(); break;
      case 3: r = classification(); break;
      case 4: r = naturals(); break;
      case 5: r = beta_oracle(); break;
      case 6: r = no_equalizer(); break;
      case 7: r = preorder_side(); break;
      case 8: r = satisfaction_condition(); break;
      case 9: r = entailment_laws(); break;
      case 10: r = soundness_bridge(); break;
    }
  } catch (const std::exception& e) {
    r.checks_pass = false;
    r.summary = std::string("error: ") + e.what();
  }
  if (id <= 5) log_.sources.insert(id);
  r.id = id;
  r.title = kMeta[id - 1].title;
  r.time_limit_s = kMeta[id - 1].limit_s;
  r.seconds = sw.seconds();
  return r;
}

std::vector<CriterionResult> AcceptanceSuite::run_all() {
  std::vector<CriterionResult> out;
  for (int i = 1; i <= kCriteria; ++i) out.push_back(run(i));
  return out;
}

}  // namespace rwl::wb
