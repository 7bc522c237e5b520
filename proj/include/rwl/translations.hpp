#pragma once

#include <json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rwl/theory.hpp"

namespace rwl::translate {

// CRWL theory encoded as an RL theory with an empty equational part.
struct AlphaResult {
  RlTheory theory;
  std::vector<std::string> var_pool;  // object variables embedded as constants
  std::vector<std::string> provenance;  // one entry per generated rule
};

// Object variables of T: declared, in rules and in goals.
std::vector<std::string> object_vars(const CrwlTheory& T);

// V = object_vars(T) plus extra_vars. Throws TheoryError on a name clash.
AlphaResult alpha(const CrwlTheory& T, const std::vector<std::string>& extra_vars = {});

// RL theory encoded as a CRWL theory over constructors Sigma + true and the single function R.
struct BetaResult {
  CrwlTheory theory;
  std::vector<std::string> provenance;
};

BetaResult beta(const RlTheory& T);

// Variables become object constants of the same name.
Term alpha_embed(const Term& e);
// Inverse of alpha_embed; nullopt when t uses a symbol outside Sigma, bot and V.
std::optional<Term> alpha_unembed(const Term& t, const AlphaResult& a);

// l -> r becomes R(l,r) => true, a >< b becomes join(a,b) => true.
Statement encode_goal_alpha(const Statement& goal);
Statement decode_goal_alpha(const Statement& goal, const AlphaResult& a);

// [t] => [u] becomes R(t,u) -> true.
Statement encode_goal_beta(const Statement& goal);
Statement decode_goal_beta(const Statement& goal);

nlohmann::json provenance_json(const std::vector<std::string>& provenance, const std::string& direction);

}  // namespace rwl::translate
