#include "rwl/translations.hpp"

#include <algorithm>

#include "rwl/syntax.hpp"

namespace rwl::translate {

namespace {

Term app(const std::string& f, std::vector<Term> args = {}) { return Term::app(f, std::move(args)); }
Term tru() { return app(kTrueName); }

// Allocates meta-variable names that avoid every symbol of the target signature.
class Names {
 public:
  explicit Names(std::set<std::string> taken) : taken_(std::move(taken)) {}
  Term var(const std::string& base) {
    auto it = cache_.find(base);
    if (it != cache_.end()) return it->second;
    std::string n = fresh_name(base, taken_);
    taken_.insert(n);
    return cache_.emplace(base, Term::var(n)).first->second;
  }

 private:
  std::set<std::string> taken_;
  std::map<std::string, Term> cache_;
};

std::vector<Term> vec(Names& nm, const std::string& base, int n) {
  std::vector<Term> out;
  for (int i = 1; i <= n; ++i) out.push_back(nm.var(base + std::to_string(i)));
  return out;
}

std::vector<std::string> sorted_vars(const std::vector<RlRule>& rules) {
  VarSet all;
  for (const auto& r : rules)
    for (const auto& v : r.vars()) all.insert(v);
  return {all.begin(), all.end()};
}

std::vector<std::string> sorted_vars(const std::vector<CrwlRule>& rules) {
  VarSet all;
  for (const auto& r : rules)
    for (const auto& v : r.vars()) all.insert(v);
  return {all.begin(), all.end()};
}

void reject_reserved(const std::vector<Symbol>& syms) {
  for (const auto& s : syms)
    if (is_reserved_name(s.name)) throw TheoryError("source symbol " + s.name + " clashes with a reserved name");
}

}  // namespace

std::vector<std::string> object_vars(const CrwlTheory& T) {
  std::vector<std::string> out;
  auto add = [&](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const auto& v : T.vars) add(v);
  for (const auto& r : T.rules)
    for (const auto& v : r.vars()) add(v);
  for (const auto& g : T.goals)
    for (const auto& v : g.vars()) add(v);
  return out;
}

Term alpha_embed(const Term& e) {
  if (e.is_var()) return app(e.name());
  if (e.is_ground()) return e;
  std::vector<Term> args;
  for (const auto& a : e.args()) args.push_back(alpha_embed(a));
  return app(e.name(), std::move(args));
}

std::optional<Term> alpha_unembed(const Term& t, const AlphaResult& a) {
  if (t.is_var()) return std::nullopt;
  if (t.arity() == 0 && std::find(a.var_pool.begin(), a.var_pool.end(), t.name()) != a.var_pool.end())
    return Term::var(t.name());
  if (is_bottom(t)) return t;
  if (is_reserved_name(t.name()) || !a.theory.sig.operators.find(t.name())) return std::nullopt;
  std::vector<Term> args;
  for (const auto& x : t.args()) {
    auto d = alpha_unembed(x, a);
    if (!d) return std::nullopt;
    args.push_back(*d);
  }
  return app(t.name(), std::move(args));
}

AlphaResult alpha(const CrwlTheory& T, const std::vector<std::string>& extra_vars) {
  if (T.translated) reject_reserved(T.sig.symbols());
  AlphaResult out;
  out.var_pool = object_vars(T);
  for (const auto& v : extra_vars) {
    if (T.sig.find(v) || is_reserved_name(v)) throw TheoryError("extra variable " + v + " clashes with a symbol");
    if (std::find(out.var_pool.begin(), out.var_pool.end(), v) == out.var_pool.end()) out.var_pool.push_back(v);
  }

  RlTheory& th = out.theory;
  th.name = T.name + "_alpha";
  th.translated = true;
  auto& ops = th.sig.operators;
  std::set<std::string> taken;
  for (const auto& s : T.sig.symbols()) {
    ops.add(Symbol{s.name, s.arity, SymbolKind::rl_operator, false});
    taken.insert(s.name);
  }
  for (const auto& v : out.var_pool) {
    ops.add(Symbol{v, 0, SymbolKind::rl_operator, true});
    taken.insert(v);
  }
  for (auto [n, k] : {std::pair{kTrueName, 0}, {kPtermName, 1}, {kPexprName, 1}, {kTtermName, 1}, {kRelName, 2},
                      {kJoinName, 2}, {kBottomName, 0}}) {
    ops.add(Symbol{n, k, SymbolKind::rl_operator, false});
    taken.insert(n);
  }
  Names nm(taken);

  auto emit = [&](Term lhs, std::vector<std::pair<Term, Term>> conds, std::string why) {
    th.rules.push_back(RlRule{std::nullopt, std::move(lhs), tru(), std::move(conds)});
    out.provenance.push_back(std::move(why));
  };
  auto is_true = [&](const std::string& pred, const Term& x) { return std::pair{app(pred, {x}), tru()}; };
  const Term bot = bottom();
  const Term x = nm.var("x"), y = nm.var("y"), z = nm.var("z");

  // Classification predicates.
  emit(app(kPtermName, {bot}), {}, "pterm: bot");
  for (const auto& v : out.var_pool) emit(app(kPtermName, {app(v)}), {}, "pterm: variable " + v);
  for (const auto& c : T.sig.constructors()) {
    auto xs = vec(nm, "x", c.arity);
    std::vector<std::pair<Term, Term>> cs;
    for (const auto& xi : xs) cs.push_back(is_true(kPtermName, xi));
    emit(app(kPtermName, {app(c.name, xs)}), cs, "pterm: constructor " + c.name);
  }
  for (const auto& v : out.var_pool) emit(app(kTtermName, {app(v)}), {}, "tterm: variable " + v);
  for (const auto& c : T.sig.constructors()) {
    auto xs = vec(nm, "x", c.arity);
    std::vector<std::pair<Term, Term>> cs;
    for (const auto& xi : xs) cs.push_back(is_true(kTtermName, xi));
    emit(app(kTtermName, {app(c.name, xs)}), cs, "tterm: constructor " + c.name);
  }
  emit(app(kPexprName, {bot}), {}, "pexpr: bot");
  for (const auto& v : out.var_pool) emit(app(kPexprName, {app(v)}), {}, "pexpr: variable " + v);
  for (const auto& h : T.sig.symbols()) {
    auto xs = vec(nm, "x", h.arity);
    std::vector<std::pair<Term, Term>> cs;
    for (const auto& xi : xs) cs.push_back(is_true(kPexprName, xi));
    emit(app(kPexprName, {app(h.name, xs)}), cs, "pexpr: symbol " + h.name);
  }

  // The CRWL calculus.
  emit(app(kRelName, {x, bot}), {is_true(kPexprName, x)}, "Bottom");
  emit(app(kRelName, {x, x}), {is_true(kPexprName, x)}, "Reflexivity");
  emit(app(kRelName, {x, y}), {{app(kRelName, {x, z}), tru()}, {app(kRelName, {z, y}), tru()}}, "Transitivity");
  for (const auto& h : T.sig.symbols()) {
    auto xs = vec(nm, "x", h.arity);
    auto ys = vec(nm, "y", h.arity);
    std::vector<std::pair<Term, Term>> cs;
    for (int i = 0; i < h.arity; ++i) cs.push_back({app(kRelName, {xs[i], ys[i]}), tru()});
    emit(app(kRelName, {app(h.name, xs), app(h.name, ys)}), cs, "Monotonicity: " + h.name);
  }
  emit(app(kJoinName, {x, y}),
       {{app(kRelName, {x, z}), tru()}, {app(kRelName, {y, z}), tru()}, is_true(kTtermName, z)}, "Join");

  // Theory axioms, rule variables turned into meta-variables.
  for (std::size_t i = 0; i < T.rules.size(); ++i) {
    const CrwlRule& r = T.rules[i];
    Substitution s;
    std::vector<std::pair<Term, Term>> guards;
    int k = 0;
    for (const auto& v : vars_in_order(r.lhs)) {
      if (s.find(v)) continue;
      s.mapping[v] = nm.var("x" + std::to_string(++k));
    }
    for (const auto& v : r.vars())
      if (!s.find(v)) s.mapping[v] = nm.var("x" + std::to_string(++k));
    std::vector<std::pair<Term, Term>> cs;
    for (const auto& [a, b] : r.conditions)
      cs.push_back({app(kJoinName, {apply_substitution(a, s), apply_substitution(b, s)}), tru()});
    for (const auto& [v, mv] : s.mapping) guards.push_back(is_true(kPtermName, mv));
    std::sort(guards.begin(), guards.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    cs.insert(cs.end(), guards.begin(), guards.end());
    emit(app(kRelName, {apply_substitution(r.lhs, s), apply_substitution(r.rhs, s)}), cs,
         "axiom " + std::to_string(i) + ": " + print_rule(r));
  }

  for (const auto& g : T.goals) th.goals.push_back(encode_goal_alpha(g));
  th.vars = sorted_vars(th.rules);
  return out;
}

Statement encode_goal_alpha(const Statement& goal) {
  Term l = alpha_embed(goal.lhs), r = alpha_embed(goal.rhs);
  if (goal.kind == StatementKind::reduction) return Statement::rewrite(app(kRelName, {l, r}), tru());
  if (goal.kind == StatementKind::joinability) return Statement::rewrite(app(kJoinName, {l, r}), tru());
  throw TheoryError("alpha encodes CRWL goals only");
}

Statement decode_goal_alpha(const Statement& goal, const AlphaResult& a) {
  if (goal.kind != StatementKind::rl_rewrite || !(goal.rhs == tru()) || goal.lhs.is_var() || goal.lhs.arity() != 2)
    throw TheoryError("not an encoded CRWL goal: " + print_statement(goal));
  bool red = goal.lhs.name() == kRelName;
  if (!red && goal.lhs.name() != kJoinName) throw TheoryError("not an encoded CRWL goal: " + print_statement(goal));
  auto l = alpha_unembed(goal.lhs.args()[0], a);
  auto r = alpha_unembed(goal.lhs.args()[1], a);
  if (!l || !r) throw TheoryError("encoded goal mentions reserved symbols: " + print_statement(goal));
  return red ? Statement::reduction(*l, *r) : Statement::joinability(*l, *r);
}

BetaResult beta(const RlTheory& T) {
  if (T.translated) reject_reserved(T.sig.operators.symbols());
  BetaResult out;
  CrwlTheory& th = out.theory;
  th.name = T.name + "_beta";
  th.translated = true;
  std::set<std::string> taken;
  for (const auto& s : T.sig.operators.symbols()) {
    th.sig.add_constructor(s.name, s.arity);
    taken.insert(s.name);
  }
  th.sig.add_constructor(kTrueName, 0);
  th.sig.add_function(kRelName, 2);
  taken.insert(kTrueName);
  taken.insert(kRelName);
  Names nm(taken);

  auto rel = [](const Term& a, const Term& b) { return app(kRelName, {a, b}); };
  auto emit = [&](Term a, Term b, std::vector<Condition> cs, std::string why) {
    th.rules.push_back(linearise_rule(CrwlRule{rel(a, b), tru(), std::move(cs)}));
    out.provenance.push_back(std::move(why));
  };
  const Term x1 = nm.var("x1"), x2 = nm.var("x2"), x = nm.var("x"), y = nm.var("y"), z = nm.var("z");

  emit(x1, x2, {{x1, x2}}, "Reflexivity");
  emit(x, y, {{rel(x, z), tru()}, {rel(z, y), tru()}}, "Transitivity");
  for (const auto& f : T.sig.operators.symbols()) {
    auto xs = vec(nm, "x", f.arity);
    auto ys = vec(nm, "y", f.arity);
    std::vector<Condition> cs;
    for (int i = 0; i < f.arity; ++i) cs.push_back({rel(xs[i], ys[i]), tru()});
    emit(app(f.name, xs), app(f.name, ys), cs, "Congruence: " + f.name);
  }
  for (std::size_t i = 0; i < T.sig.equations.size(); ++i) {
    const auto& [l, r] = T.sig.equations[i];
    std::string eq = print_term(l) + " = " + print_term(r);
    emit(l, r, {}, "equation " + std::to_string(i) + " left-to-right: " + eq);
    emit(r, l, {}, "equation " + std::to_string(i) + " right-to-left: " + eq);
  }
  for (std::size_t i = 0; i < T.rules.size(); ++i) {
    const RlRule& r = T.rules[i];
    std::vector<Condition> cs;
    for (const auto& [a, b] : r.conditions) cs.push_back({rel(a, b), tru()});
    emit(r.lhs, r.rhs, cs, "rule " + std::to_string(i) + ": " + print_rule(r));
  }
  for (const auto& g : T.goals)
    if (g.kind == StatementKind::rl_rewrite) th.goals.push_back(encode_goal_beta(g));
  th.vars = sorted_vars(th.rules);
  return out;
}

Statement encode_goal_beta(const Statement& goal) {
  if (goal.kind != StatementKind::rl_rewrite) throw TheoryError("beta encodes unconditional RL goals only");
  std::vector<Term> subs;
  collect_subterms(goal.lhs, subs);
  collect_subterms(goal.rhs, subs);
  for (const auto& s : subs)
    if (!s.is_var() && is_reserved_name(s.name())) throw TheoryError("goal mentions reserved symbol " + s.name());
  return Statement::reduction(app(kRelName, {goal.lhs, goal.rhs}), tru());
}

Statement decode_goal_beta(const Statement& goal) {
  if (goal.kind != StatementKind::reduction || !(goal.rhs == tru()) || goal.lhs.is_var() ||
      goal.lhs.name() != kRelName || goal.lhs.arity() != 2)
    throw TheoryError("not an encoded RL goal: " + print_statement(goal));
  return Statement::rewrite(goal.lhs.args()[0], goal.lhs.args()[1]);
}

nlohmann::json provenance_json(const std::vector<std::string>& provenance, const std::string& direction) {
  nlohmann::json j;
  j["translation"] = direction;
  j["rules"] = nlohmann::json::array();
  for (std::size_t i = 0; i < provenance.size(); ++i) j["rules"].push_back({{"index", i}, {"source", provenance[i]}});
  return j;
}

}  // namespace rwl::translate
