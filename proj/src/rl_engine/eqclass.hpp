#pragma once

#include <unordered_map>

#include "rwl/rl.hpp"

namespace rwl::rl::detail {


// All terms one oriented equation application away from u, within max_size.
// Variables of the target side not fixed by matching range over `pool`.
std::vector<EqStep> eq_neighbors(const Equations& E, const Term& u, const std::vector<Term>& pool, int max_size);

// Bounded exploration of the E-class of a term, keeping parent links.
class EClass {
 public:
  EClass(const Equations& E, const Term& root, const std::vector<Term>& pool, int max_size, std::size_t cap);

  const std::vector<Term>& members() const { return members_; }
  bool contains(const Term& t) const { return parent_.count(t) > 0; }
  std::vector<EqStep> trace_to(const Term& t) const;    // root to t
  std::vector<EqStep> trace_from(const Term& t) const;  // t to root
  long nodes() const { return nodes_; }

 private:
  struct Link {
    Term prev;
    EqStep step;
    bool is_root = false;
  };
  std::vector<Term> members_;
  std::unordered_map<Term, Link, TermHash> parent_;
  long nodes_ = 0;
};

EqStep reverse_step(const EqStep& s, const Term& before);

}  // namespace rwl::rl::detail
