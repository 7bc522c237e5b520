#include <algorithm>
#include <set>

#include "common.hpp"
#include "rwl/model.hpp"
#include "rwl/syntax.hpp"

namespace rwl::wb {

using detail::make_budget;
using detail::make_record;
using detail::Rng;

namespace {

bool all_pass(const std::vector<Record>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const Record& r) { return r.pass; });
}

// Random terms over `ops`; leaves are constants or, when allowed, variables.
Term random_term(Rng& rng, const std::vector<Symbol>& ops, const std::vector<std::string>& vars, int height) {
  std::vector<Symbol> leaves, inner;
  for (const auto& s : ops) (s.arity == 0 ? leaves : inner).push_back(s);
  if (height <= 1 || inner.empty() || rng.chance(35)) {
    if (!vars.empty() && (leaves.empty() || rng.chance(30))) return Term::var(rng.pick(vars));
    return Term::app(rng.pick(leaves).name);
  }
  const Symbol& f = rng.pick(inner);
  std::vector<Term> args;
  for (int i = 0; i < f.arity; ++i) args.push_back(random_term(rng, ops, vars, height - 1));
  return Term::app(f.name, std::move(args));
}

std::vector<std::string> var_list(const Term& t) {
  auto vs = vars_of(t);
  return {vs.begin(), vs.end()};
}

// One unconditional rule step anywhere in t; conditions are left to the prover.
template <class Rule>
std::vector<Term> successors(const std::vector<Rule>& rules, const Term& t) {
  std::vector<Path> ps;
  collect_positions(t, ps);
  std::vector<Term> out;
  for (const auto& p : ps)
    for (const auto& r : rules) {
      if (!r.conditions.empty()) continue;
      Substitution s;
      if (match(r.lhs, subterm_at(t, p), s) && apply_substitution(r.rhs, s).is_ground())
        out.push_back(replace_at(t, p, apply_substitution(r.rhs, s)));
    }
  return out;
}

Term rename(const Term& t, const std::map<std::string, std::string>& m) {
  if (t.is_var()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(rename(a, m));
  auto it = m.find(t.name());
  return Term::app(it == m.end() ? t.name() : it->second, std::move(args));
}

void append(std::vector<Term>& into, const std::vector<Term>& more) { into.insert(into.end(), more.begin(), more.end()); }

// ---- RL side ----

RlRule random_rl_rule(Rng& rng, const RlTheory& T) {
  const auto& ops = T.sig.operators.symbols();
  for (;;) {
    RlRule r;
    r.lhs = random_term(rng, ops, T.vars, 3);
    if (r.lhs.is_var()) continue;
    r.rhs = random_term(rng, ops, var_list(r.lhs), 3);
    auto lv = var_list(r.lhs);
    if (!lv.empty() && rng.chance(20)) r.conditions.push_back({Term::var(rng.pick(lv)), random_term(rng, ops, {}, 2)});
    try {
      validate_rl_rule(T.sig, r);
      return r;
    } catch (const TheoryError&) {
    }
  }
}

RlTheory random_rl_theory(Rng& rng, int index) {
  RlTheory T;
  T.name = "rand" + std::to_string(index);
  T.vars = {"x", "y"};
  for (const char* c : {"a", "b", "c"}) T.sig.operators.add({c, 0});
  T.sig.operators.add({"f", 1});
  T.sig.operators.add({"g", 1});
  bool binary = rng.chance(30);
  if (binary) T.sig.operators.add({"p", 2});
  if (rng.chance(20)) {
    Term x = Term::var("x"), y = Term::var("y");
    switch (rng.below(binary ? 3 : 2)) {
      case 0: T.sig.equations.push_back({Term::app("f", {Term::app("f", {x})}), Term::app("f", {x})}); break;
      case 1: T.sig.equations.push_back({Term::app("g", {Term::app("f", {x})}), Term::app("f", {Term::app("g", {x})})}); break;
      default: T.sig.equations.push_back({Term::app("p", {x, y}), Term::app("p", {y, x})}); break;
    }
  }
  int n = 1 + static_cast<int>(rng.below(3));
  for (int i = 0; i < n; ++i) T.rules.push_back(random_rl_rule(rng, T));
  return T;
}

RlTheory rename_rl(const RlTheory& T, const std::map<std::string, std::string>& m) {
  RlTheory out;
  out.name = T.name + "'";
  out.vars = T.vars;
  for (const auto& s : T.sig.operators.symbols()) {
    auto it = m.find(s.name);
    std::string name = it == m.end() ? s.name : it->second;
    if (!out.sig.operators.find(name)) out.sig.operators.add({name, s.arity});
  }
  for (const auto& [l, r] : T.sig.equations) out.sig.equations.push_back({rename(l, m), rename(r, m)});
  for (auto r : T.rules) {
    r.lhs = rename(r.lhs, m);
    r.rhs = rename(r.rhs, m);
    for (auto& [a, b] : r.conditions) a = rename(a, m), b = rename(b, m);
    out.rules.push_back(std::move(r));
  }
  return out;
}

// ---- CRWL side ----

// Linear constructor term; each variable at most once.
Term random_pattern(Rng& rng, const std::vector<Symbol>& ctors, std::vector<std::string>& free_vars, int height) {
  if (!free_vars.empty() && rng.chance(30)) {
    Term v = Term::var(free_vars.back());
    free_vars.pop_back();
    return v;
  }
  std::vector<Term> args;
  std::vector<Symbol> pick = ctors;
  if (height <= 1) std::erase_if(pick, [](const Symbol& s) { return s.arity > 0; });
  const Symbol& c = rng.pick(pick);
  for (int i = 0; i < c.arity; ++i) args.push_back(random_pattern(rng, ctors, free_vars, height - 1));
  return Term::app(c.name, std::move(args));
}

CrwlTheory random_crwl_theory(Rng& rng, int index) {
  CrwlTheory T;
  T.name = "crand" + std::to_string(index);
  T.vars = {"x", "y"};
  T.sig.add_constructor("a", 0);
  T.sig.add_constructor("b", 0);
  T.sig.add_constructor("s", 1);
  T.sig.add_function("f", 1);
  T.sig.add_function("g", 0);
  if (rng.chance(30)) T.sig.add_function("k", 1);
  auto ctors = T.sig.constructors(), funs = T.sig.functions();
  const auto& all = T.sig.symbols();
  int n = 1 + static_cast<int>(rng.below(3));
  while (static_cast<int>(T.rules.size()) < n) {
    const Symbol& head = rng.pick(funs);
    std::vector<std::string> fv = {"y", "x"};
    std::vector<Term> args;
    for (int i = 0; i < head.arity; ++i) args.push_back(random_pattern(rng, ctors, fv, 2));
    CrwlRule r;
    r.lhs = Term::app(head.name, std::move(args));
    auto lv = var_list(r.lhs);
    r.rhs = random_term(rng, all, lv, 3);
    if (rng.chance(25)) r.conditions.push_back({random_term(rng, all, lv, 2), random_term(rng, all, lv, 2)});
    try {
      validate_crwl_rule(T.sig, r);
      T.rules.push_back(std::move(r));
    } catch (const TheoryError&) {
    }
  }
  return T;
}

Term ground_lhs(Rng& rng, const CrwlTheory& T) {
  const Symbol head = rng.pick(T.sig.functions());
  std::vector<std::string> none;
  std::vector<Term> args;
  for (int i = 0; i < head.arity; ++i) args.push_back(random_pattern(rng, T.sig.constructors(), none, 3));
  return Term::app(head.name, std::move(args));
}

Term wrap(Rng& rng, const std::vector<Symbol>& syms, const Term& t) {
  std::vector<Symbol> unary;
  for (const auto& s : syms)
    if (s.arity == 1) unary.push_back(s);
  return Term::app(rng.pick(unary).name, {t});
}

struct Tally {
  std::size_t tried = 0, failed = 0;
  void add(bool ok, std::vector<Record>& out, const std::string& item, const std::string& verdict,
                  const std::string& budget, const std::string& detail = "") {
    ++tried;
    if (!ok) {
      ++failed;
      out.push_back(make_record(item, false, verdict, budget, detail));
    }
  }
  std::string line() const { return std::to_string(tried - failed) + "/" + std::to_string(tried); }
};

}  // namespace

CriterionResult AcceptanceSuite::entailment_laws() {
  CriterionResult r;
  constexpr int kTheories = 100;
  const SearchBudget small = make_budget(6, 8, 50000);
  const SearchBudget roomy = make_budget(6, 8, 200000);
  const SearchBudget cut = make_budget(12, 8, 300000);
  Rng rng(opts_.seed ^ 0x9e3779b97f4a7c15ULL);
  Tally refl, mono, transl, trans;
  std::size_t trivial = 0;

  for (int i = 0; i < kTheories; ++i) {
    RlTheory T = random_rl_theory(rng, i);
    const auto& ops = T.sig.operators.symbols();

    {
      RlRule ax{std::nullopt, random_term(rng, ops, {}, 3), random_term(rng, ops, {}, 3), {}};
      RlTheory T1 = T;
      T1.rules.push_back(ax);
      auto res = rl::prove(T1, Statement::rewrite(ax.lhs, ax.rhs), small);
      refl.add(res.proved(), r.records, T.name + " + phi proves phi: " + print_rule(ax), detail::verdict(res),
               small.describe());
    }

    // A provable phi, found by stepping with the rules and confirming with the prover.
    std::optional<Statement> phi;
    rl::SearchResult phi_res;
    for (int attempt = 0; attempt < 30 && !phi; ++attempt) {
      Term t = random_term(rng, ops, {}, 3);
      auto next = successors(T.rules, t);
      if (next.empty()) continue;
      Term u = rng.pick(next);
      if (rng.chance(50)) {
        auto more = successors(T.rules, u);
        if (!more.empty()) u = rng.pick(more);
      }
      auto res = rl::prove(T, Statement::rewrite(t, u), small);
      if (res.proved()) phi = Statement::rewrite(t, u), phi_res = res;
    }
    if (!phi) {
      ++trivial;
      Term t = random_term(rng, ops, {}, 3);
      phi = Statement::rewrite(t, t);
      phi_res = rl::prove(T, *phi, small);
    }
    const std::string tag = T.name + ": " + print_statement(*phi);
    if (!phi_res.proved()) {
      r.records.push_back(make_record(tag, false, "phi not provable", small.describe()));
      continue;
    }

    {
      RlTheory T2 = T;
      T2.rules.push_back(random_rl_rule(rng, T));
      auto res = rl::prove(T2, *phi, roomy, {rl::derivation_terms(*phi_res.derivation)});
      mono.add(res.proved(), r.records, tag + " after adding " + print_rule(T2.rules.back()), detail::verdict(res),
               roomy.describe());
    }

    {
      // b and a merge, every other symbol is renamed apart
      std::map<std::string, std::string> m = {{"a", "a1"}, {"b", "a1"}, {"c", "c1"}, {"f", "f1"}, {"g", "g1"}, {"p", "p1"}};
      RlTheory S = rename_rl(T, m);
      Statement g = Statement::rewrite(rename(phi->lhs, m), rename(phi->rhs, m));
      std::vector<Term> seed;
      for (const auto& t : rl::derivation_terms(*phi_res.derivation)) seed.push_back(rename(t, m));
      auto res = rl::prove(S, g, roomy, {seed});
      transl.add(res.proved(), r.records, "sigma(" + tag + ")", detail::verdict(res), roomy.describe());
    }

    {
      RlTheory T1 = T;
      T1.rules.push_back(phi->as_rule());
      Term ct = wrap(rng, ops, phi->lhs), cu = wrap(rng, ops, phi->rhs);
      std::vector<Statement> psis = {Statement::rewrite(ct, cu)};
      auto more = successors(T1.rules, cu);
      if (!more.empty()) psis.push_back(Statement::rewrite(ct, rng.pick(more)));
      for (const auto& psi : psis) {
        auto with = rl::prove(T1, psi, small);
        if (!with.proved()) continue;
        std::vector<Term> seed = rl::derivation_terms(*with.derivation);
        append(seed, rl::derivation_terms(*phi_res.derivation));
        auto res = rl::prove(T, psi, cut, {seed});
        trans.add(res.proved(), r.records, T.name + ": cut " + print_statement(*phi) + " into " + print_statement(psi),
                  detail::verdict(res), cut.describe());
      }
    }
  }

  // CRWL: the two-rule theory must keep failing; random ground lemmas must not.
  const SearchBudget cs = make_budget(8, 8, 100000);
  const SearchBudget cc = make_budget(12, 8, 500000);
  bool reproduced = false;
  {
    CrwlTheory base = detail::load_crwl(path("sec2_5/base.crwl"));
    Statement lemma = parse_statement(base, "h(x) -> h(d)");
    Statement goal = parse_statement(base, "c -> h(d)");
    CrwlTheory T1 = base;
    T1.rules.push_back({lemma.lhs, lemma.rhs, {}});
    auto p1 = crwl::prove(base, lemma, make_budget(8, 8, 1000000));
    auto p2 = crwl::prove(T1, goal, make_budget(10, 8, 1000000));
    auto p3 = crwl::prove(base, goal, make_budget(12, 8, 1000000));
    reproduced = p1.proved() && p2.proved() && !p3.proved();
    r.records.push_back(make_record(base.name + ": cut of " + print_statement(lemma) + " into " + print_statement(goal),
                                    reproduced, reproduced ? "cut fails, as expected" : "not reproduced",
                                    "depth 8/10/12, nodes 1000000",
                                    std::string("lemma ") + detail::verdict(p1) + ", with lemma " + detail::verdict(p2) +
                                        ", without " + detail::verdict(p3)));
  }
  Tally crwl_trans;
  for (int i = 0; i < kTheories; ++i) {
    CrwlTheory T = random_crwl_theory(rng, i);
    std::optional<Statement> phi;
    crwl::SearchResult phi_res;
    for (int attempt = 0; attempt < 30 && !phi; ++attempt) {
      Term l = ground_lhs(rng, T);
      auto next = successors(T.rules, l);
      if (next.empty()) continue;
      Term u = rng.pick(next);
      auto res = crwl::prove(T, Statement::reduction(l, u), cs);
      if (res.proved()) phi = Statement::reduction(l, u), phi_res = res;
    }
    if (!phi) continue;
    CrwlTheory T1 = T;
    T1.rules.push_back({phi->lhs, phi->rhs, {}});
    Term cl = wrap(rng, T.sig.symbols(), phi->lhs), cr = wrap(rng, T.sig.symbols(), phi->rhs);
    std::vector<Statement> psis = {Statement::reduction(cl, cr)};
    auto more = successors(T1.rules, cr);
    if (!more.empty()) psis.push_back(Statement::reduction(cl, rng.pick(more)));
    for (const auto& psi : psis) {
      auto with = crwl::prove(T1, psi, cs);
      if (!with.proved()) continue;
      crwl::ProveOptions o;
      o.extra_terms = detail::derivation_terms(*with.derivation);
      append(o.extra_terms, detail::derivation_terms(*phi_res.derivation));
      auto res = crwl::prove(T, psi, cc, o);
      crwl_trans.add(res.proved(), r.records, T.name + ": cut " + print_statement(*phi) + " into " + print_statement(psi),
                     detail::verdict(res), cc.describe());
    }
  }

  auto line = [&](const std::string& law, const Tally& t, const std::string& budget) {
    r.records.push_back(make_record(law, t.failed == 0 && t.tried > 0, t.line() + " hold", budget));
  };
  line("rl reflexivity", refl, small.describe());
  line("rl monotonicity", mono, roomy.describe());
  line("rl translation", transl, roomy.describe());
  line("rl transitivity (sampled)", trans, cut.describe());
  line("crwl transitivity, random ground lemmas", crwl_trans, cc.describe());
  r.checks_pass = reproduced && all_pass(r.records);
  r.summary = std::to_string(kTheories) + " RL theories (" + std::to_string(trivial) + " with a reflexive phi): refl " +
              refl.line() + ", mono " + mono.line() + ", transl " + transl.line() + ", trans " + trans.line() +
              "; CRWL random cuts " + crwl_trans.line() + (reproduced ? ", non-transitivity reproduced" : "");
  return r;
}

CriterionResult AcceptanceSuite::soundness_bridge() {
  CriterionResult r;
  for (int id = 1; id <= 5; ++id)
    if (!log_.sources.count(id)) run(id);

  std::size_t crwl_ok = 0, rl_ok = 0;
  for (const auto& e : log_.crwl) {
    auto chk = crwl::check_derivation(*e.theory, *e.derivation);
    if (chk.ok) ++crwl_ok;
    else
      r.records.push_back(make_record(e.theory->name + ": " + print_statement(e.derivation->conclusion), false,
                                      "rejected", "", e.origin + ": " + chk.message));
  }
  for (const auto& e : log_.rl) {
    auto chk = rl::check_derivation(*e.theory, *e.derivation);
    if (chk.ok) ++rl_ok;
    else
      r.records.push_back(make_record(e.theory->name + ": " + print_statement(e.derivation->conclusion()), false,
                                      "rejected", "", e.origin + ": " + chk.message));
  }
  r.records.push_back(make_record("logged derivations", crwl_ok == log_.crwl.size() && rl_ok == log_.rl.size(),
                                  std::to_string(crwl_ok) + "/" + std::to_string(log_.crwl.size()) + " crwl, " +
                                      std::to_string(rl_ok) + "/" + std::to_string(log_.rl.size()) + " rl accepted",
                                  ""));

  // Everything derived must hold in every small model, at every total valuation.
  constexpr int kMaxSize = 3;
  const SearchBudget b = make_budget(10, 8, 1000000);
  const std::string cap = "models of size <= " + std::to_string(kMaxSize) + "; " + b.describe();
  std::size_t statements = 0, violations = 0;
  const char* files[] = {"sec3_6/theory.crwl", "crwl_suite/coin.crwl", "crwl_suite/loop.crwl",
                         "crwl_suite/undefined.crwl", "crwl_suite/guarded.crwl"};
  for (const char* f : files) {
    CrwlTheory T = detail::load_crwl(path(f));
    auto models = model::all_algebras(T.sig, kMaxSize, [&](const model::FiniteCrwlAlgebra& a) { return model::is_model(a, T); });
    std::vector<Statement> derived;
    for (const auto& g : T.goals) {
      auto res = crwl::prove(T, g, b);
      if (res.proved()) crwl::collect_conclusions(*res.derivation, derived);
    }
    std::sort(derived.begin(), derived.end(), [](const Statement& x, const Statement& y) {
      return std::tie(x.kind, x.lhs, x.rhs) < std::tie(y.kind, y.lhs, y.rhs);
    });
    derived.erase(std::unique(derived.begin(), derived.end()), derived.end());
    std::size_t local = 0;
    for (const auto& s : derived)
      for (const auto& m : models) {
        ++statements;
        if (model::satisfies_everywhere(*m, s, true)) continue;
        ++violations;
        ++local;
        r.records.push_back(make_record(T.name + ": " + print_statement(s) + " in " + m->name, false, "violated", cap));
      }
    r.records.push_back(make_record(T.name + ": " + std::to_string(derived.size()) + " derived statements x " +
                                        std::to_string(models.size()) + " models",
                                    local == 0 && !models.empty(), std::to_string(local) + " violations", cap));
  }
  r.checks_pass = all_pass(r.records);
  r.summary = std::to_string(crwl_ok + rl_ok) + " derivations rechecked; " + std::to_string(statements) +
              " model checks, " + std::to_string(violations) + " violations";
  return r;
}

}  // namespace rwl::wb
