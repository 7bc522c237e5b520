#pragma once

#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rwl/search.hpp"
#include "rwl/theory.hpp"
#include "rwl/universe.hpp"

namespace rwl::crwl {

enum class Rule { Bottom, Reflexivity, Monotonicity, Reduction, Transitivity, Join };
const char* to_string(Rule r);

struct Derivation;
using DerivRef = std::shared_ptr<const Derivation>;

struct Derivation {
  Rule rule = Rule::Reflexivity;
  Statement conclusion;
  std::vector<DerivRef> premises;
  std::optional<std::size_t> rule_index;     // Reduction: index into theory rules
  std::optional<Substitution> instantiation; // Reduction: theta
  std::optional<Term> witness;               // Join: total term; Transitivity: cut term

  int height() const;
  std::size_t node_count() const;
};

struct SearchResult {
  Outcome outcome = Outcome::exhausted;
  DerivRef derivation;  // set iff proved
  SearchStats stats;
  SearchBudget budget;
  bool proved() const { return outcome == Outcome::proved; }
};

struct ProveOptions {
  std::vector<Term> extra_terms;  // added to the term pool
};

// Goal must be a reduction or joinability statement over the theory's
// signature (bot allowed); throws TheoryError otherwise.
SearchResult prove(const CrwlTheory& th, const Statement& goal, const SearchBudget& budget,
                   const ProveOptions& opts = {});

// Term pool used by prove for this theory and goal.
Universe search_universe(const CrwlTheory& th, const Statement& goal, const SearchBudget& budget,
                         const ProveOptions& opts = {});

struct CheckReport {
  bool ok = true;
  std::string message;  // first failure
  std::string where;    // path of premise indices, e.g. "0.1"
};

CheckReport check_derivation(const CrwlTheory& th, const Derivation& d);

nlohmann::json to_json(const Derivation& d, const CrwlTheory& th);
// Throws TheoryError on malformed input; semantic problems are left to check_derivation.
DerivRef derivation_from_json(const nlohmann::json& j, const CrwlTheory& th);

// Every statement concluded anywhere in d.
void collect_conclusions(const Derivation& d, std::vector<Statement>& out);

}  // namespace rwl::crwl
