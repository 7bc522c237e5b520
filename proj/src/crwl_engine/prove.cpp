#include <algorithm>
#include <unordered_map>

#include "rwl/crwl.hpp"

namespace rwl::crwl {

const char* to_string(Rule r) {
  switch (r) {
    case Rule::Bottom: return "Bottom";
    case Rule::Reflexivity: return "Reflexivity";
    case Rule::Monotonicity: return "Monotonicity";
    case Rule::Reduction: return "Reduction";
    case Rule::Transitivity: return "Transitivity";
    case Rule::Join: return "Join";
  }
  return "?";
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
  out.push_back(d.conclusion);
  for (const auto& p : d.premises) collect_conclusions(*p, out);
}

namespace {

// A defined function strictly below the root symbol of t.
bool nested_function(const CrwlSignature& sig, const Term& t) {
  if (t.is_var()) return false;
  for (const auto& a : t.args()) {
    std::vector<Term> subs;
    collect_subterms(a, subs);
    for (const auto& s : subs)
      if (!s.is_var() && !is_bottom(s) && !sig.is_constructor(s.name())) return true;
  }
  return false;
}

}  // namespace

Universe search_universe(const CrwlTheory& th, const Statement& goal, const SearchBudget& budget,
                         const ProveOptions& opts) {
  UniverseSpec spec;
  spec.roots = {goal.lhs, goal.rhs};
  for (const auto& t : opts.extra_terms) spec.roots.push_back(t);
  for (const auto& r : th.rules) {
    spec.roots.push_back(r.lhs);
    spec.roots.push_back(r.rhs);
    for (const auto& [a, b] : r.conditions) {
      spec.roots.push_back(a);
      spec.roots.push_back(b);
    }
    spec.templates.push_back(r.rhs);
  }
  // Monotonicity into a Reduction needs lhs instances as midpoints, but only when some
  // argument can still be reduced, which takes a function below the root.
  bool nested = false;
  for (const auto& t : spec.roots) nested = nested || nested_function(th.sig, t);
  if (nested)
    for (const auto& r : th.rules) spec.templates.push_back(r.lhs);
  spec.allowed_vars = vars_of(goal.lhs);
  collect_vars(goal.rhs, spec.allowed_vars);
  for (const auto& t : opts.extra_terms) collect_vars(t, spec.allowed_vars);
  const CrwlSignature* sig = &th.sig;
  spec.image_ok = [sig](const Term& t) { return is_partial_term(*sig, t); };
  spec.bottom_replacement = true;
  spec.max_term_size = budget.max_term_size;
  return build_universe(spec);
}

namespace {

struct NodeLimit {};

enum class GoalKind : int { red = 0, red_first = 1, join = 2 };

struct Key {
  GoalKind kind;
  Term a, b;
  bool operator==(const Key& o) const { return kind == o.kind && a == o.a && b == o.b; }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    return k.a.hash() * 1000003u ^ (k.b.hash() + 0x9e37 * static_cast<std::size_t>(k.kind));
  }
};

struct Entry {
  DerivRef proof;
  int failed_depth = 0;
};

DerivRef make(Rule rule, Statement concl, std::vector<DerivRef> premises = {}) {
  auto d = std::make_shared<Derivation>();
  d->rule = rule;
  d->conclusion = std::move(concl);
  d->premises = std::move(premises);
  return d;
}

class Searcher {
 public:
  Searcher(const CrwlTheory& th, const SearchBudget& b, std::vector<Term> pool)
      : th_(th), budget_(b), pool_(std::move(pool)) {
    for (const auto& t : pool_) {
      auto c = classify_expression(th_.sig, t);
      if (c == ExprClass::total_term) {
        total_.push_back(t);
        pterm_.push_back(t);
      } else if (c == ExprClass::partial_term) {
        pterm_.push_back(t);
      }
    }
    for (const auto& r : th_.rules) {
      VarSet bound = vars_of(r.lhs);
      collect_vars(r.rhs, bound);
      std::vector<std::string> free;
      for (const auto& v : r.vars())
        if (!bound.count(v)) free.push_back(v);
      free_vars_.push_back(std::move(free));
    }
  }

  long nodes() const { return nodes_; }

  DerivRef solve(const Statement& g, int depth) {
    if (g.kind == StatementKind::joinability) return prove(GoalKind::join, g.lhs, g.rhs, depth);
    return prove(GoalKind::red, g.lhs, g.rhs, depth);
  }

 private:
  const CrwlTheory& th_;
  SearchBudget budget_;
  std::vector<Term> pool_, total_, pterm_;
  std::vector<std::vector<std::string>> free_vars_;
  std::unordered_map<Key, Entry, KeyHash> memo_;
  std::unordered_map<Term, std::vector<Term>, TermHash> cut_cache_;
  long nodes_ = 0;

  DerivRef prove(GoalKind kind, const Term& a, const Term& b, int depth) {
    if (depth <= 0) return nullptr;
    Key key{kind, a, b};
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      if (it->second.proof && it->second.proof->height() <= depth) return it->second.proof;
      if (it->second.failed_depth >= depth) return nullptr;
    }
    if (++nodes_ > budget_.max_nodes) throw NodeLimit{};
    DerivRef r = kind == GoalKind::join ? expand_join(a, b, depth) : expand_red(a, b, depth, kind == GoalKind::red_first);
    Entry& e = memo_[key];
    if (r) {
      if (!e.proof || e.proof->height() > r->height()) e.proof = r;
    } else {
      e.failed_depth = std::max(e.failed_depth, depth);
    }
    return r;
  }

  DerivRef expand_red(const Term& a, const Term& b, int depth, bool first_premise) {
    Statement concl = Statement::reduction(a, b);
    if (is_bottom(b)) return make(Rule::Bottom, concl);
    if (a == b) return make(Rule::Reflexivity, concl);
    if (a.is_var() || is_bottom(a)) return nullptr;

    if (!b.is_var() && a.name() == b.name() && a.arity() == b.arity()) {
      std::vector<DerivRef> ps;
      bool ok = true;
      for (std::size_t i = 0; i < a.arity() && ok; ++i) {
        auto p = prove(GoalKind::red, a.args()[i], b.args()[i], depth - 1);
        if (p) ps.push_back(p);
        else ok = false;
      }
      if (ok) return make(Rule::Monotonicity, concl, std::move(ps));
    }

    if (auto r = try_reduction(a, b, depth)) return r;

    if (!first_premise && depth >= 2) {
      for (const auto& mid : cut_candidates(a)) {
        if (mid == b) continue;
        auto p1 = prove(GoalKind::red_first, a, mid, depth - 1);
        if (!p1) continue;
        auto p2 = prove(GoalKind::red, mid, b, depth - 1);
        if (!p2) continue;
        auto d = make(Rule::Transitivity, concl, {p1, p2});
        std::const_pointer_cast<Derivation>(d)->witness = mid;
        return d;
      }
    }
    return nullptr;
  }

  DerivRef try_reduction(const Term& a, const Term& b, int depth) {
    for (std::size_t i = 0; i < th_.rules.size(); ++i) {
      const CrwlRule& r = th_.rules[i];
      if (r.lhs.name() != a.name()) continue;
      Substitution th;
      th.range_class = RangeClass::partial_term;
      if (!match(r.lhs, a, th) || !match(r.rhs, b, th)) continue;
      bool ok = true;
      for (const auto& [v, img] : th.mapping)
        if (!is_partial_term(th_.sig, img)) ok = false;
      if (!ok) continue;
      if (auto d = instantiate_free(i, th, 0, depth)) return d;
    }
    return nullptr;
  }

  DerivRef instantiate_free(std::size_t ri, Substitution& th, std::size_t k, int depth) {
    const auto& free = free_vars_[ri];
    if (k < free.size()) {
      for (const auto& img : pterm_) {
        th.mapping[free[k]] = img;
        if (auto d = instantiate_free(ri, th, k + 1, depth)) return d;
      }
      th.mapping.erase(free[k]);
      return nullptr;
    }
    const CrwlRule& r = th_.rules[ri];
    std::vector<DerivRef> ps;
    for (const auto& [ca, cb] : r.conditions) {
      auto p = prove(GoalKind::join, apply_substitution(ca, th), apply_substitution(cb, th), depth - 1);
      if (!p) return nullptr;
      ps.push_back(p);
    }
    auto d = std::make_shared<Derivation>();
    d->rule = Rule::Reduction;
    d->conclusion = Statement::reduction(apply_substitution(r.lhs, th), apply_substitution(r.rhs, th));
    d->premises = std::move(ps);
    d->rule_index = ri;
    d->instantiation = th;
    return d;
  }

  // Intermediate terms for Transitivity whose first premise is Monotonicity
  // (same head) or Reduction (an instance of a matching rule's rhs).
  const std::vector<Term>& cut_candidates(const Term& a) {
    auto it = cut_cache_.find(a);
    if (it != cut_cache_.end()) return it->second;
    std::vector<Term> out;
    std::vector<std::pair<const CrwlRule*, Substitution>> matching;
    for (const auto& r : th_.rules) {
      Substitution s;
      if (r.lhs.name() == a.name() && match(r.lhs, a, s)) matching.emplace_back(&r, s);
    }
    for (const auto& t : pool_) {
      if (t == a || is_bottom(t)) continue;
      bool keep = !t.is_var() && t.name() == a.name() && t.arity() == a.arity();
      for (std::size_t j = 0; !keep && j < matching.size(); ++j) {
        Substitution s = matching[j].second;
        keep = match(matching[j].first->rhs, t, s);
      }
      if (keep) out.push_back(t);
    }
    return cut_cache_.emplace(a, std::move(out)).first->second;
  }

  DerivRef expand_join(const Term& a, const Term& b, int depth) {
    Statement concl = Statement::joinability(a, b);
    auto ca = classify_expression(th_.sig, a);
    auto cb = classify_expression(th_.sig, b);
    // A partial term only reduces to approximations of itself.
    if (ca == ExprClass::partial_term || cb == ExprClass::partial_term) return nullptr;
    std::vector<Term> single;
    const std::vector<Term>* cands = &total_;
    if (ca == ExprClass::total_term) {
      if (cb == ExprClass::total_term && !(a == b)) return nullptr;
      single = {a};
      cands = &single;
    } else if (cb == ExprClass::total_term) {
      single = {b};
      cands = &single;
    }
    for (const auto& t : *cands) {
      auto p1 = prove(GoalKind::red, a, t, depth - 1);
      if (!p1) continue;
      auto p2 = prove(GoalKind::red, b, t, depth - 1);
      if (!p2) continue;
      auto d = make(Rule::Join, concl, {p1, p2});
      std::const_pointer_cast<Derivation>(d)->witness = t;
      return d;
    }
    return nullptr;
  }
};

}  // namespace

SearchResult prove(const CrwlTheory& th, const Statement& goal, const SearchBudget& budget,
                   const ProveOptions& opts) {
  budget.validate();
  validate_statement(th.sig, goal);
  SearchResult res;
  res.budget = budget;
  Universe u = search_universe(th, goal, budget, opts);
  res.stats.universe_size = u.terms.size();
  res.stats.universe_truncated = u.truncated;
  Searcher s(th, budget, std::move(u.terms));
  try {
    for (int d = 1; d <= budget.max_depth; ++d) {
      res.stats.depth_reached = d;
      if (auto p = s.solve(goal, d)) {
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

}  // namespace rwl::crwl
