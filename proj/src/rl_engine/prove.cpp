#include <algorithm>
#include <functional>
#include <unordered_map>

#include "eqclass.hpp"

namespace rwl::rl {

const char* to_string(Rule r) {
  switch (r) {
    case Rule::Reflexivity: return "Reflexivity";
    case Rule::Transitivity: return "Transitivity";
    case Rule::Congruence: return "Congruence";
    case Rule::Replacement: return "Replacement";
    case Rule::ImplicationIntro: return "ImplicationIntro";
    case Rule::EqualityStep: return "EqualityStep";
  }
  return "?";
}

Statement Derivation::conclusion() const {
  if (rule == Rule::ImplicationIntro && conditional) return Statement::conditional(*conditional);
  return Statement::rewrite(lhs, rhs);
}

int Derivation::height() const {
  int h = 0;
  for (const auto& p : premises) h = std::max(h, p->height());
  return h + 1;
}

std::size_t Derivation::node_count() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p->node_count();
  return n;
}

void collect_conclusions(const Derivation& d, std::vector<Statement>& out) {
  if (d.rule != Rule::ImplicationIntro) out.push_back(Statement::rewrite(d.lhs, d.rhs));
  for (const auto& p : d.premises) collect_conclusions(*p, out);
}

std::vector<Term> derivation_terms(const Derivation& d) {
  std::vector<Term> out;
  std::function<void(const Derivation&)> walk = [&](const Derivation& n) {
    out.push_back(n.lhs);
    out.push_back(n.rhs);
    for (const auto& s : n.trace_lhs) out.push_back(s.result);
    for (const auto& s : n.trace_rhs) out.push_back(s.result);
    for (const auto& p : n.premises) walk(*p);
  };
  walk(d);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Universe search_universe(const RlTheory& th, const Term& t, const Term& u, const SearchBudget& budget,
                         const ProveOptions& opts) {
  UniverseSpec spec;
  spec.roots = {t, u};
  for (const auto& x : opts.extra_terms) spec.roots.push_back(x);
  for (const auto& r : th.rules) {
    spec.roots.push_back(r.lhs);
    spec.roots.push_back(r.rhs);
    for (const auto& [a, b] : r.conditions) {
      spec.roots.push_back(a);
      spec.roots.push_back(b);
    }
    spec.templates.push_back(r.rhs);
  }
  for (const auto& [a, b] : th.sig.equations) {
    spec.roots.push_back(a);
    spec.roots.push_back(b);
  }
  spec.allowed_vars = vars_of(t);
  collect_vars(u, spec.allowed_vars);
  for (const auto& x : opts.extra_terms) collect_vars(x, spec.allowed_vars);
  // Only translated theories can declare the reserved bottom constant.
  const Symbol* b = th.sig.operators.find(kBottomName);
  spec.bottom_replacement = b && b->arity == 0;
  spec.max_term_size = budget.max_term_size;
  return build_universe(spec);
}

RlTheory implication_theory(const RlTheory& th, const RlRule& sentence, Substitution* consts) {
  RlTheory ext = th;
  ext.goals.clear();
  std::set<std::string> taken;
  for (const auto& s : th.sig.operators.symbols()) taken.insert(s.name);
  Substitution c;
  for (const auto& v : sentence.vars()) {
    std::string n = fresh_name("$" + v, taken);
    taken.insert(n);
    ext.sig.operators.add(Symbol{n, 0, SymbolKind::rl_operator, false});
    c.mapping[v] = Term::app(n);
  }
  // Rule variables cannot collide with the new constants: `$` names are reserved.
  for (std::size_t i = 0; i < sentence.conditions.size(); ++i) {
    const auto& [a, b] = sentence.conditions[i];
    ext.rules.push_back(RlRule{"$hyp" + std::to_string(i), apply_substitution(a, c), apply_substitution(b, c), {}});
  }
  ext.translated = true;
  if (consts) *consts = c;
  return ext;
}

namespace {

struct NodeLimit {};

struct Key {
  bool first;
  Term a, b;
  bool operator==(const Key& o) const { return first == o.first && a == o.a && b == o.b; }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const { return k.a.hash() * 1000003u ^ (k.b.hash() + k.first); }
};

struct Entry {
  DerivRef proof;
  int failed_depth = 0;
};

std::shared_ptr<Derivation> node(Rule r, const Term& a, const Term& b) {
  auto d = std::make_shared<Derivation>();
  d->rule = r;
  d->lhs = a;
  d->rhs = b;
  return d;
}

struct RuleInfo {
  std::vector<std::string> vars;  // sorted
  VarSet lhs_vars, rhs_vars, cond_vars;
};

constexpr std::size_t kClassCap = 48;

class Searcher {
 public:
  Searcher(const RlTheory& th, const SearchBudget& b, std::vector<Term> pool)
      : th_(th), E_(th.sig.equations), budget_(b), pool_(std::move(pool)) {
    for (const auto& r : th_.rules) {
      RuleInfo info;
      VarSet all = r.vars();
      info.vars.assign(all.begin(), all.end());
      info.lhs_vars = vars_of(r.lhs);
      info.rhs_vars = vars_of(r.rhs);
      for (const auto& [a, c] : r.conditions) {
        collect_vars(a, info.cond_vars);
        collect_vars(c, info.cond_vars);
      }
      rules_.push_back(std::move(info));
    }
  }

  long nodes() const { return nodes_; }

  DerivRef prove(const Term& a, const Term& b, int depth, bool first) {
    if (depth <= 0) return nullptr;
    Key key{first, a, b};
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      if (it->second.proof && it->second.proof->height() <= depth) return it->second.proof;
      if (it->second.failed_depth >= depth) return nullptr;
    }
    if (++nodes_ > budget_.max_nodes) throw NodeLimit{};
    DerivRef r = expand(a, b, depth, first);
    Entry& e = memo_[key];
    if (r) {
      if (!e.proof || e.proof->height() > r->height()) e.proof = r;
    } else {
      e.failed_depth = std::max(e.failed_depth, depth);
    }
    return r;
  }

 private:
  const RlTheory& th_;
  const Equations& E_;
  SearchBudget budget_;
  std::vector<Term> pool_;
  std::vector<RuleInfo> rules_;
  std::unordered_map<Key, Entry, KeyHash> memo_;
  std::unordered_map<Term, std::unique_ptr<detail::EClass>, TermHash> classes_;
  std::unordered_map<Term, std::vector<Term>, TermHash> cut_cache_;
  long nodes_ = 0;

  const detail::EClass& cls(const Term& t) {
    auto it = classes_.find(t);
    if (it != classes_.end()) return *it->second;
    auto c = std::make_unique<detail::EClass>(E_, t, pool_, budget_.max_term_size, kClassCap);
    return *classes_.emplace(t, std::move(c)).first->second;
  }

  // Wraps a derivation of [lt] -> [ru] into one of [t] -> [u] when they differ modulo E.
  DerivRef wrap(DerivRef inner, const Term& t, const Term& u) {
    if (inner->lhs == t && inner->rhs == u) return inner;
    auto d = node(Rule::EqualityStep, t, u);
    d->trace_lhs = cls(t).trace_to(inner->lhs);
    d->trace_rhs = cls(u).trace_from(inner->rhs);
    d->premises = {inner};
    return d;
  }

  DerivRef expand(const Term& t, const Term& u, int depth, bool first) {
    if (t == u) return node(Rule::Reflexivity, t, u);
    if (!E_.empty() && cls(t).contains(u)) {
      auto d = node(Rule::EqualityStep, t, u);
      d->trace_lhs = cls(t).trace_to(u);
      return d;
    }
    if (auto d = try_replacement(t, u, depth)) return d;
    if (auto d = try_congruence(t, u, depth)) return d;
    if (!first && depth >= 2) {
      for (const auto& mid : cut_candidates(t)) {
        if (mid == u || mid == t) continue;
        auto p1 = prove(t, mid, depth - 1, true);
        if (!p1) continue;
        auto p2 = prove(mid, u, depth - 1, false);
        if (!p2) continue;
        auto d = node(Rule::Transitivity, t, u);
        d->premises = {p1, p2};
        return d;
      }
    }
    return nullptr;
  }

  std::vector<Term> class_of(const Term& t) { return E_.empty() ? std::vector<Term>{t} : cls(t).members(); }

  DerivRef try_congruence(const Term& t, const Term& u, int depth) {
    for (const auto& lt : class_of(t)) {
      if (lt.is_var() || lt.arity() == 0) continue;
      for (const auto& ru : class_of(u)) {
        if (ru.is_var() || ru.name() != lt.name() || ru.arity() != lt.arity()) continue;
        bool exact = lt == t && ru == u;
        int inner = exact ? depth : depth - 1;
        if (inner < 2) continue;
        std::vector<DerivRef> ps;
        bool ok = true;
        for (std::size_t i = 0; i < lt.arity() && ok; ++i) {
          auto p = prove(lt.args()[i], ru.args()[i], inner - 1, false);
          if (p) ps.push_back(p);
          else ok = false;
        }
        if (!ok) continue;
        auto d = node(Rule::Congruence, lt, ru);
        d->premises = std::move(ps);
        return wrap(d, t, u);
      }
    }
    return nullptr;
  }

  DerivRef try_replacement(const Term& t, const Term& u, int depth) {
    auto ct = class_of(t);
    auto cu = class_of(u);
    for (std::size_t i = 0; i < th_.rules.size(); ++i) {
      const RlRule& r = th_.rules[i];
      for (const auto& lt : ct) {
        if (!r.lhs.is_var() && (lt.is_var() || lt.name() != r.lhs.name())) continue;
        Substitution w;
        if (!match(r.lhs, lt, w)) continue;
        for (const auto& ru : cu) {
          Substitution wp;
          if (!match(r.rhs, ru, wp)) continue;
          int inner = (lt == t && ru == u) ? depth : depth - 1;
          if (auto d = assemble(i, w, wp, inner)) return wrap(d, t, u);
        }
      }
    }
    return nullptr;
  }

  DerivRef assemble(std::size_t ri, Substitution w, Substitution wp, int depth) {
    const RlRule& r = th_.rules[ri];
    const RuleInfo& info = rules_[ri];
    if (depth < 1 || (depth < 2 && (!info.vars.empty() || !r.conditions.empty()))) return nullptr;
    VarSet open;
    for (const auto& x : info.vars) {
      bool in_w = w.find(x) != nullptr;
      bool in_wp = wp.find(x) != nullptr;
      if (in_w && !in_wp) wp.mapping[x] = *w.find(x);
      else if (!in_w && in_wp && !info.cond_vars.count(x)) w.mapping[x] = *wp.find(x);
      else if (!in_w) open.insert(x);
    }
    std::vector<DerivRef> cond_proofs(r.conditions.size());
    std::vector<bool> done(r.conditions.size(), false);
    return solve(ri, w, wp, open, cond_proofs, done, depth);
  }

  DerivRef solve(std::size_t ri, Substitution& w, Substitution& wp, VarSet& open, std::vector<DerivRef>& cps,
                 std::vector<bool>& done, int depth) {
    const RlRule& r = th_.rules[ri];
    // Next condition: fewest unbound variables, then smallest left side.
    int pick = -1;
    std::size_t best_open = 0;
    int best_size = 0;
    for (std::size_t c = 0; c < r.conditions.size(); ++c) {
      if (done[c]) continue;
      VarSet vs = vars_of(r.conditions[c].first);
      collect_vars(r.conditions[c].second, vs);
      std::size_t n = 0;
      for (const auto& v : vs) n += open.count(v);
      int sz = r.conditions[c].first.size();
      if (pick < 0 || n < best_open || (n == best_open && sz < best_size)) {
        pick = static_cast<int>(c);
        best_open = n;
        best_size = sz;
      }
    }
    if (pick < 0) return finish(ri, w, wp, cps, depth);

    const auto& [ca, cb] = r.conditions[pick];
    std::vector<std::string> need;
    {
      VarSet vs = vars_of(ca);
      collect_vars(cb, vs);
      for (const auto& v : vs)
        if (open.count(v)) need.push_back(v);
    }
    std::function<DerivRef(std::size_t)> bind = [&](std::size_t k) -> DerivRef {
      if (k == need.size()) {
        auto p = prove(apply_substitution(ca, w), apply_substitution(cb, w), depth - 1, false);
        if (!p) return nullptr;
        cps[pick] = p;
        done[pick] = true;
        auto d = solve(ri, w, wp, open, cps, done, depth);
        done[pick] = false;
        return d;
      }
      const std::string& x = need[k];
      open.erase(x);
      bool wp_fixed = wp.find(x) != nullptr;
      for (const auto& img : pool_) {
        w.mapping[x] = img;
        if (!wp_fixed) wp.mapping[x] = img;
        if (auto d = bind(k + 1)) {
          open.insert(x);
          return d;
        }
      }
      w.mapping.erase(x);
      if (!wp_fixed) wp.mapping.erase(x);
      open.insert(x);
      return nullptr;
    };
    return bind(0);
  }

  DerivRef finish(std::size_t ri, const Substitution& w, const Substitution& wp, const std::vector<DerivRef>& cps,
                  int depth) {
    const RlRule& r = th_.rules[ri];
    const RuleInfo& info = rules_[ri];
    std::vector<DerivRef> ps;
    for (const auto& x : info.vars) {
      auto p = prove(*w.find(x), *wp.find(x), depth - 1, false);
      if (!p) return nullptr;
      ps.push_back(p);
    }
    for (const auto& p : cps) ps.push_back(p);
    auto d = node(Rule::Replacement, apply_substitution(r.lhs, w), apply_substitution(r.rhs, wp));
    d->premises = std::move(ps);
    d->rule_index = ri;
    d->applied_rule = r;
    d->w = w;
    d->w_prime = wp;
    return d;
  }

  // With no equations, the first premise of a Transitivity is a Congruence
  // (same head) or a Replacement (an instance of some rule's rhs).
  const std::vector<Term>& cut_candidates(const Term& t) {
    auto it = cut_cache_.find(t);
    if (it != cut_cache_.end()) return it->second;
    std::vector<Term> out;
    for (const auto& m : pool_) {
      if (m == t) continue;
      bool keep = !E_.empty();
      if (!keep && !t.is_var() && !m.is_var() && m.name() == t.name() && m.arity() == t.arity()) keep = true;
      for (std::size_t i = 0; !keep && i < th_.rules.size(); ++i) {
        Substitution s;
        keep = match(th_.rules[i].rhs, m, s);
      }
      if (keep) out.push_back(m);
    }
    return cut_cache_.emplace(t, std::move(out)).first->second;
  }
};

}  // namespace

SearchResult prove_rewrite(const RlTheory& th, const Term& t, const Term& u, const SearchBudget& budget,
                           const ProveOptions& opts) {
  budget.validate();
  validate_statement(th.sig, Statement::rewrite(t, u));
  SearchResult res;
  res.budget = budget;
  Universe pool = search_universe(th, t, u, budget, opts);
  res.stats.universe_size = pool.terms.size();
  res.stats.universe_truncated = pool.truncated;
  Searcher s(th, budget, std::move(pool.terms));
  try {
    for (int d = 1; d <= budget.max_depth; ++d) {
      res.stats.depth_reached = d;
      if (auto p = s.prove(t, u, d, false)) {
        res.outcome = Outcome::proved;
        res.derivation = p;
        break;
      }
    }
  } catch (const NodeLimit&) {
    res.stats.node_limit_hit = true;
  }
  res.stats.nodes = s.nodes();
  return res;
}

SearchResult prove_conditional(const RlTheory& th, const RlRule& sentence, const SearchBudget& budget,
                               const ProveOptions& opts) {
  validate_statement(th.sig, Statement::conditional(sentence));
  Substitution consts;
  RlTheory ext = implication_theory(th, sentence, &consts);
  ProveOptions o2 = opts;
  for (auto& x : o2.extra_terms) x = apply_substitution(x, consts);
  SearchResult inner = prove_rewrite(ext, apply_substitution(sentence.lhs, consts),
                                     apply_substitution(sentence.rhs, consts), budget, o2);
  if (!inner.proved()) return inner;
  auto d = std::make_shared<Derivation>();
  d->rule = Rule::ImplicationIntro;
  d->lhs = sentence.lhs;
  d->rhs = sentence.rhs;
  d->conditional = sentence;
  d->premises = {inner.derivation};
  inner.derivation = d;
  return inner;
}

SearchResult prove(const RlTheory& th, const Statement& goal, const SearchBudget& budget, const ProveOptions& opts) {
  if (goal.kind == StatementKind::rl_conditional) return prove_conditional(th, goal.as_rule(), budget, opts);
  if (goal.kind != StatementKind::rl_rewrite) throw TheoryError("not an RL goal");
  return prove_rewrite(th, goal.lhs, goal.rhs, budget, opts);
}

}  // namespace rwl::rl
