#include "common.hpp"

#include <functional>

#include "rwl/syntax.hpp"

namespace rwl::wb::detail {

SearchBudget make_budget(int depth, int term_size, long nodes) {
  SearchBudget b;
  b.max_depth = depth;
  b.max_term_size = term_size;
  b.max_nodes = nodes;
  return b;
}

CrwlTheory load_crwl(const std::string& path) {
  auto th = load_theory_file(path);
  if (!std::holds_alternative<CrwlTheory>(th)) throw TheoryError(path + ": expected a crwl theory");
  return std::get<CrwlTheory>(std::move(th));
}

RlTheory load_rl(const std::string& path) {
  auto th = load_theory_file(path);
  if (!std::holds_alternative<RlTheory>(th)) throw TheoryError(path + ": expected an rl theory");
  return std::get<RlTheory>(std::move(th));
}

std::vector<Term> derivation_terms(const crwl::Derivation& d) {
  std::vector<Term> out;
  std::function<void(const crwl::Derivation&)> walk = [&](const crwl::Derivation& n) {
    out.push_back(n.conclusion.lhs);
    out.push_back(n.conclusion.rhs);
    if (n.witness) out.push_back(*n.witness);
    for (const auto& p : n.premises) walk(*p);
  };
  walk(d);
  return out;
}

namespace {

void append_subterms(const Term& t, std::vector<Term>& out) {
  std::vector<Term> subs;
  collect_subterms(t, subs);
  out.insert(out.end(), subs.begin(), subs.end());
}

}  // namespace

AlphaProbe alpha_probe(const CrwlTheory& T, const translate::AlphaResult& a, const Statement& goal,
                       const SearchBudget& source_budget, const SearchBudget& target_budget) {
  AlphaProbe p;
  p.source = crwl::prove(T, goal, source_budget);
  rl::ProveOptions to;
  for (const auto& t : crwl::search_universe(T, goal, source_budget).terms) to.extra_terms.push_back(translate::alpha_embed(t));
  if (p.source.proved())
    for (const auto& t : derivation_terms(*p.source.derivation)) to.extra_terms.push_back(translate::alpha_embed(t));
  p.target = rl::prove(a.theory, translate::encode_goal_alpha(goal), target_budget, to);
  if (p.target.proved() && !p.source.proved()) {
    // Give the source engine the object-level terms the encoding went through.
    crwl::ProveOptions so;
    for (const auto& t : rl::derivation_terms(*p.target.derivation)) {
      std::vector<Term> subs;
      append_subterms(t, subs);
      for (const auto& s : subs)
        if (auto u = translate::alpha_unembed(s, a)) so.extra_terms.push_back(*u);
    }
    p.source = crwl::prove(T, goal, source_budget, so);
    p.reseeded = true;
  }
  return p;
}

BetaProbe beta_probe(const RlTheory& T, const translate::BetaResult& b, const Statement& goal,
                     const SearchBudget& source_budget, const SearchBudget& target_budget,
                     const std::optional<Term>& lhs_rep, const std::optional<Term>& rhs_rep) {
  BetaProbe p;
  p.source = rl::prove(T, goal, source_budget);
  crwl::ProveOptions to;
  to.extra_terms = rl::search_universe(T, goal.lhs, goal.rhs, source_budget).terms;
  if (p.source.proved())
    for (const auto& t : rl::derivation_terms(*p.source.derivation)) to.extra_terms.push_back(t);
  Statement encoded = translate::encode_goal_beta(
      Statement::rewrite(lhs_rep.value_or(goal.lhs), rhs_rep.value_or(goal.rhs)));
  p.target = crwl::prove(b.theory, encoded, target_budget, to);
  if (p.target.proved() && !p.source.proved()) {
    rl::ProveOptions so;
    for (const auto& t : derivation_terms(*p.target.derivation)) {
      std::vector<Term> subs;
      append_subterms(t, subs);
      for (const auto& s : subs)
        if (!s.is_var() && s.name() == kRelName)
          for (const auto& arg : s.args()) so.extra_terms.push_back(arg);
    }
    p.source = rl::prove(T, goal, source_budget, so);
    p.reseeded = true;
  }
  return p;
}

std::vector<Term> ground_terms(const std::vector<Symbol>& symbols, int max_size) {
  // by_size[n]: terms with exactly n nodes
  std::vector<std::vector<Term>> by_size(max_size + 1);
  for (int n = 1; n <= max_size; ++n)
    for (const auto& f : symbols) {
      if (f.arity == 0) {
        if (n == 1) by_size[1].push_back(Term::app(f.name));
        continue;
      }
      // split n-1 nodes over the arguments
      std::vector<Term> args(f.arity);
      std::function<void(int, int)> fill = [&](int i, int left) {
        if (i == f.arity - 1) {
          if (left >= 1 && left <= max_size)
            for (const auto& t : by_size[left]) {
              args[i] = t;
              by_size[n].push_back(Term::app(f.name, args));
            }
          return;
        }
        for (int k = 1; k <= left - (f.arity - 1 - i); ++k)
          for (const auto& t : by_size[k]) {
            args[i] = t;
            fill(i + 1, left - k);
          }
      };
      fill(0, n - 1);
    }
  std::vector<Term> out;
  for (const auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::string verdict(const crwl::SearchResult& r) {
  std::string v = to_string(r.outcome);
  if (r.stats.node_limit_hit) v += " (node limit)";
  return v;
}

std::string verdict(const rl::SearchResult& r) {
  std::string v = to_string(r.outcome);
  if (r.stats.node_limit_hit) v += " (node limit)";
  return v;
}

Record make_record(std::string item, bool pass, std::string verdict, std::string budget, std::string detail) {
  return Record{std::move(item), pass, std::move(verdict), std::move(budget), std::move(detail)};
}

}  // namespace rwl::wb::detail
