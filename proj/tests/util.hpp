#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "rwl/search.hpp"
#include "rwl/syntax.hpp"
#include "rwl/theory.hpp"

namespace testutil {

inline rwl::CrwlTheory crwl(const std::string& text) { return std::get<rwl::CrwlTheory>(rwl::parse_theory(text)); }
inline rwl::RlTheory rl(const std::string& text) { return std::get<rwl::RlTheory>(rwl::parse_theory(text)); }
inline std::string corpus(const std::string& rel) { return std::string(RWL_TEST_CORPUS) + "/" + rel; }

inline rwl::SearchBudget budget(int depth, int size = 8, long nodes = 1000000) {
  rwl::SearchBudget b;
  b.max_depth = depth;
  b.max_term_size = size;
  b.max_nodes = nodes;
  return b;
}

// Random term over (name, arity) pairs and variables; fixed seeds keep runs repeatable.
inline rwl::Term random_term(std::mt19937& g, const std::vector<std::pair<std::string, int>>& ops,
                             const std::vector<std::string>& vars, int height) {
  std::vector<std::pair<std::string, int>> leaves, inner;
  for (const auto& o : ops) (o.second == 0 ? leaves : inner).push_back(o);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(g() % n); };
  if (height <= 1 || inner.empty() || pick(3) == 0) {
    if (!vars.empty() && (leaves.empty() || pick(3) == 0)) return rwl::Term::var(vars[pick(vars.size())]);
    return rwl::Term::app(leaves[pick(leaves.size())].first);
  }
  const auto& f = inner[pick(inner.size())];
  std::vector<rwl::Term> args;
  for (int i = 0; i < f.second; ++i) args.push_back(random_term(g, ops, vars, height - 1));
  return rwl::Term::app(f.first, std::move(args));
}

}  // namespace testutil
