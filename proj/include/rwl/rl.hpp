#pragma once

#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rwl/search.hpp"
#include "rwl/theory.hpp"
#include "rwl/universe.hpp"

namespace rwl::rl {

using Equations = std::vector<std::pair<Term, Term>>;

// One oriented equation application at a position.
struct EqStep {
  std::size_t equation = 0;
  bool left_to_right = true;
  Path position;
  Substitution subst;
  Term result;
};

enum class Verdict { equal, exhausted };

struct EClassProbe {
  Term lhs, rhs;
  Verdict verdict = Verdict::exhausted;
  std::vector<EqStep> trace;  // lhs to rhs, when equal
  long nodes = 0;
};

// Bounded breadth-first search over oriented equation applications.
EClassProbe eq_equal(const Equations& E, const Term& t, const Term& u, const SearchBudget& budget);

// Breadth-first sample of the E-class of t, at most `cap` members of size <= max_size, t first.
// Unbound variables introduced by an equation range over `pool`.
std::vector<Term> eq_class_sample(const Equations& E, const Term& t, const std::vector<Term>& pool, int max_size,
                                  std::size_t cap);

// Replays `trace` from `from`; true iff every step applies and the end is `to`.
bool replay_trace(const Equations& E, const Term& from, const std::vector<EqStep>& trace, const Term& to,
                  std::string* why = nullptr);

enum class Rule { Reflexivity, Transitivity, Congruence, Replacement, ImplicationIntro, EqualityStep };
const char* to_string(Rule r);

struct Derivation;
using DerivRef = std::shared_ptr<const Derivation>;

struct Derivation {
  Rule rule = Rule::Reflexivity;
  Term lhs, rhs;                      // conclusion [lhs] -> [rhs]
  std::optional<RlRule> conditional;  // ImplicationIntro conclusion
  std::vector<DerivRef> premises;
  std::optional<std::size_t> rule_index;  // Replacement
  std::optional<RlRule> applied_rule;     // Replacement
  std::optional<Substitution> w, w_prime; // Replacement
  std::vector<EqStep> trace_lhs;          // EqualityStep: conclusion lhs to premise lhs (or to rhs)
  std::vector<EqStep> trace_rhs;          // EqualityStep: premise rhs to conclusion rhs

  Statement conclusion() const;
  int height() const;
  std::size_t node_count() const;
};

struct SearchResult {
  Outcome outcome = Outcome::exhausted;
  DerivRef derivation;
  SearchStats stats;
  SearchBudget budget;
  bool proved() const { return outcome == Outcome::proved; }
};

struct ProveOptions {
  std::vector<Term> extra_terms;
};

SearchResult prove_rewrite(const RlTheory& th, const Term& t, const Term& u, const SearchBudget& budget,
                           const ProveOptions& opts = {});
SearchResult prove_conditional(const RlTheory& th, const RlRule& sentence, const SearchBudget& budget,
                               const ProveOptions& opts = {});
// Dispatches on the statement kind.
SearchResult prove(const RlTheory& th, const Statement& goal, const SearchBudget& budget,
                   const ProveOptions& opts = {});

Universe search_universe(const RlTheory& th, const Term& t, const Term& u, const SearchBudget& budget,
                         const ProveOptions& opts = {});

// The theory R(x) plus the conditions of `sentence` as axioms; `consts` maps
// each sentence variable to its fresh constant.
RlTheory implication_theory(const RlTheory& th, const RlRule& sentence, Substitution* consts = nullptr);

struct CheckReport {
  bool ok = true;
  std::string message;
  std::string where;
};

CheckReport check_derivation(const RlTheory& th, const Derivation& d);

nlohmann::json to_json(const Derivation& d);
DerivRef derivation_from_json(const nlohmann::json& j, const RlTheory& th);

// Rewrites concluded anywhere in d (ImplicationIntro nodes excluded).
void collect_conclusions(const Derivation& d, std::vector<Statement>& out);
// Both sides of every conclusion plus every intermediate term of the equality traces.
std::vector<Term> derivation_terms(const Derivation& d);

}  // namespace rwl::rl
