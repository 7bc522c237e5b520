#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rwl/crwl.hpp"
#include "rwl/rl.hpp"
#include "rwl/search.hpp"

namespace rwl::wb {

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_bad_config = 2, exit_internal = 3 };

// One checked item of a suite. `budget` names the limits the verdict was obtained under.
struct Record {
  std::string item;
  bool pass = true;
  std::string verdict;
  std::string budget;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  double time_limit_s = 0;
  double seconds = 0;
  bool checks_pass = false;  // every record passes and the size requirements are met
  std::string summary;
  std::vector<Record> records;

  bool within_time() const { return seconds <= time_limit_s; }
  bool pass() const { return checks_pass && within_time(); }
};

struct SuiteOptions {
  std::string corpus;
  std::uint64_t seed = 1;
};

// Derivations produced while running criteria 1-5, rechecked by criterion 10.
struct DerivationLog {
  struct CrwlEntry {
    std::shared_ptr<const CrwlTheory> theory;
    crwl::DerivRef derivation;
    std::string origin;
  };
  struct RlEntry {
    std::shared_ptr<const RlTheory> theory;
    rl::DerivRef derivation;
    std::string origin;
  };
  std::vector<CrwlEntry> crwl;
  std::vector<RlEntry> rl;
  std::set<int> sources;  // criteria that have contributed
};

constexpr int kCriteria = 10;

class AcceptanceSuite {
 public:
  explicit AcceptanceSuite(SuiteOptions opts);

  CriterionResult run(int id);
  std::vector<CriterionResult> run_all();
  const DerivationLog& log() const { return log_; }

 private:
  CriterionResult non_transitivity();      // 1
  CriterionResult alpha_oracle();          // 2
  CriterionResult classification();        // 3
  CriterionResult naturals();              // 4
  CriterionResult beta_oracle();           // 5
  CriterionResult no_equalizer();          // 6
  CriterionResult preorder_side();         // 7
  CriterionResult satisfaction_condition();// 8
  CriterionResult entailment_laws();       // 9
  CriterionResult soundness_bridge();      // 10

  std::string path(const std::string& rel) const;
  std::vector<std::string> listing(const std::string& dir, const std::string& ext) const;

  SuiteOptions opts_;
  DerivationLog log_;
};

// RWL_CORPUS when set, otherwise the corpus directory of the source tree.
std::string default_corpus_dir();

struct RunConfig {
  std::string command;
  std::vector<std::string> theory_paths;
  std::optional<std::string> goal;
  SearchBudget budget;
  bool machine = false;
  std::uint64_t seed = 1;
  std::optional<std::string> corpus;

  std::string direction;                    // translate: alpha | beta
  std::optional<std::string> output;        // translate: theory file
  std::optional<std::string> provenance;    // translate: sidecar, default OUTPUT.provenance.json
  std::optional<std::string> derivation;    // prove writes, check-derivation reads
  std::vector<std::string> model_paths;     // check-model, check-hom, find-equalizer
  std::vector<std::string> names;           // objects to check, empty for all
  std::string f_name = "F", g_name = "G";   // find-equalizer
  int max_size = 3;                         // find-equalizer, enumerate
  bool expect_none = false;                 // find-equalizer
  std::vector<int> criteria;                // paper-suite, empty for all
};

// Throws std::invalid_argument describing the first problem.
void validate(const RunConfig& cfg);

// Never throws; failures map onto ExitCode.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace rwl::wb
