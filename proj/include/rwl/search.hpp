#pragma once

#include <stdexcept>
#include <string>

namespace rwl {

struct SearchBudget {
  int max_depth = 8;        // derivation height
  int max_term_size = 8;    // node count of any pool term
  long max_nodes = 1000000; // search expansions

  void validate() const {
    if (max_depth <= 0 || max_term_size <= 0 || max_nodes <= 0)
      throw std::invalid_argument("budget fields must be positive");
  }
  std::string describe() const {
    return "depth=" + std::to_string(max_depth) + " term-size=" + std::to_string(max_term_size) +
           " nodes=" + std::to_string(max_nodes);
  }
};

struct SearchStats {
  long nodes = 0;
  int depth_reached = 0;
  std::size_t universe_size = 0;
  bool universe_truncated = false;
  bool node_limit_hit = false;
};

enum class Outcome { proved, exhausted };

inline const char* to_string(Outcome o) { return o == Outcome::proved ? "proved" : "exhausted"; }

}  // namespace rwl
