#pragma once

#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "rwl/crwl.hpp"
#include "rwl/rl.hpp"
#include "rwl/translations.hpp"
#include "rwl/workbench.hpp"

namespace rwl::wb::detail {

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

SearchBudget make_budget(int depth, int term_size, long nodes);

CrwlTheory load_crwl(const std::string& path);
RlTheory load_rl(const std::string& path);

// Conclusion sides and cut/join witnesses of a CRWL derivation.
std::vector<Term> derivation_terms(const crwl::Derivation& d);

// A CRWL goal and its alpha encoding, each engine seeded with the other's term pool.
struct AlphaProbe {
  crwl::SearchResult source;
  rl::SearchResult target;
  bool reseeded = false;  // source rerun with terms from the target derivation
  bool agree() const { return source.proved() == target.proved(); }
};
AlphaProbe alpha_probe(const CrwlTheory& T, const translate::AlphaResult& a, const Statement& goal,
                       const SearchBudget& source_budget, const SearchBudget& target_budget);

// An RL rewrite goal [l] => [r] against beta's R(l', r') -> true for chosen representatives.
struct BetaProbe {
  rl::SearchResult source;
  crwl::SearchResult target;
  bool reseeded = false;
  bool agree() const { return source.proved() == target.proved(); }
};
BetaProbe beta_probe(const RlTheory& T, const translate::BetaResult& b, const Statement& goal,
                     const SearchBudget& source_budget, const SearchBudget& target_budget,
                     const std::optional<Term>& lhs_rep = std::nullopt, const std::optional<Term>& rhs_rep = std::nullopt);

// Every ground term over `symbols` with at most max_size nodes, smallest first.
std::vector<Term> ground_terms(const std::vector<Symbol>& symbols, int max_size);

std::string verdict(const crwl::SearchResult& r);
std::string verdict(const rl::SearchResult& r);

Record make_record(std::string item, bool pass, std::string verdict, std::string budget, std::string detail = "");

// The engine sequence is fixed by the standard; the <random> distributions are not, so reduce by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::size_t below(std::size_t n) { return n ? static_cast<std::size_t>(eng_() % n) : 0; }
  bool chance(int percent) { return below(100) < static_cast<std::size_t>(percent); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rwl::wb::detail
