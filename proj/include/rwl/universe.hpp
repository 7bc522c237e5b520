#pragma once

#include <functional>
#include <vector>

#include "rwl/term.hpp"

namespace rwl {

// Finite pool of terms from which the engines draw cut terms, join witnesses
// and images for variables not fixed by matching.
struct UniverseSpec {
  std::vector<Term> roots;       // all subterms are added (goal, ground theory parts, extra seeds)
  VarSet allowed_vars;           // subterms mentioning other variables are skipped
  std::vector<Term> templates;   // rule sides, instantiated with pool terms
  std::function<bool(const Term&)> image_ok;  // admissible images for template variables
  bool bottom_replacement = false;
  int max_term_size = 8;
  std::size_t max_terms = 4000;
};

struct Universe {
  std::vector<Term> terms;  // sorted by Term::operator<
  bool truncated = false;
};

Universe build_universe(const UniverseSpec& spec);

}  // namespace rwl
