#include "rwl/theory.hpp"

#include <algorithm>

namespace rwl {

bool is_reserved_name(const std::string& name) {
  static const std::set<std::string> reserved = {kBottomName, kTrueName,  kPtermName, kTtermName,
                                                 kPexprName,  kRelName,   kJoinName};
  return reserved.count(name) > 0 || (!name.empty() && name[0] == '$');
}

TheoryError::TheoryError(const std::string& msg, int line, int col)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(col) + ": " + msg
                                  : msg),
      line_(line),
      col_(col) {}

void SymbolTable::add(const Symbol& s) {
  if (s.name.empty()) throw TheoryError("empty symbol name");
  if (s.arity < 0) throw TheoryError("negative arity for " + s.name);
  if (index_.count(s.name)) throw TheoryError("duplicate symbol " + s.name);
  index_.emplace(s.name, list_.size());
  list_.push_back(s);
}

const Symbol* SymbolTable::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &list_[it->second];
}

void CrwlSignature::add_constructor(const std::string& name, int arity, bool var_constant) {
  if (var_constant && arity != 0) throw TheoryError("object variable " + name + " must be nullary");
  table_.add(Symbol{name, arity, SymbolKind::constructor, var_constant});
}

void CrwlSignature::add_function(const std::string& name, int arity) {
  table_.add(Symbol{name, arity, SymbolKind::function, false});
}

bool CrwlSignature::is_constructor(const std::string& name) const {
  const Symbol* s = find(name);
  return s && s->kind == SymbolKind::constructor;
}

bool CrwlSignature::is_function(const std::string& name) const {
  const Symbol* s = find(name);
  return s && s->kind == SymbolKind::function;
}

std::vector<Symbol> CrwlSignature::constructors() const {
  std::vector<Symbol> out;
  for (const auto& s : table_.symbols())
    if (s.kind == SymbolKind::constructor) out.push_back(s);
  return out;
}

std::vector<Symbol> CrwlSignature::functions() const {
  std::vector<Symbol> out;
  for (const auto& s : table_.symbols())
    if (s.kind == SymbolKind::function) out.push_back(s);
  return out;
}

VarSet CrwlRule::vars() const {
  VarSet s;
  collect_vars(lhs, s);
  collect_vars(rhs, s);
  for (const auto& [a, b] : conditions) {
    collect_vars(a, s);
    collect_vars(b, s);
  }
  return s;
}

VarSet RlRule::vars() const {
  VarSet s;
  collect_vars(lhs, s);
  collect_vars(rhs, s);
  for (const auto& [a, b] : conditions) {
    collect_vars(a, s);
    collect_vars(b, s);
  }
  return s;
}

Statement Statement::reduction(Term a, Term b) {
  return Statement{StatementKind::reduction, std::move(a), std::move(b), {}, {}};
}
Statement Statement::joinability(Term a, Term b) {
  return Statement{StatementKind::joinability, std::move(a), std::move(b), {}, {}};
}
Statement Statement::rewrite(Term t, Term u) {
  return Statement{StatementKind::rl_rewrite, std::move(t), std::move(u), {}, {}};
}
Statement Statement::conditional(const RlRule& r) {
  return Statement{StatementKind::rl_conditional, r.lhs, r.rhs, r.conditions, r.label};
}

RlRule Statement::as_rule() const { return RlRule{label, lhs, rhs, conditions}; }

VarSet Statement::vars() const { return as_rule().vars(); }

const char* to_string(ExprClass c) {
  switch (c) {
    case ExprClass::total_term: return "total-term";
    case ExprClass::partial_term: return "partial-term";
    case ExprClass::total_expression: return "total-expression";
    case ExprClass::partial_expression: return "partial-expression";
    case ExprClass::ill_formed: return "ill-formed";
  }
  return "?";
}

namespace {

struct ClassFlags {
  bool bottom = false;
  bool function = false;
  bool ill = false;
};

void classify_rec(const CrwlSignature& sig, const Term& t, ClassFlags& f) {
  if (f.ill) return;
  if (t.is_var()) return;
  if (sig.includes_bottom && is_bottom(t)) {
    f.bottom = true;
    return;
  }
  const Symbol* s = sig.find(t.name());
  if (!s || s->arity != static_cast<int>(t.arity())) {
    f.ill = true;
    return;
  }
  if (s->kind == SymbolKind::function) f.function = true;
  else if (s->kind != SymbolKind::constructor) {
    f.ill = true;
    return;
  }
  for (const auto& a : t.args()) classify_rec(sig, a, f);
}

}  // namespace

ExprClass classify_expression(const CrwlSignature& sig, const Term& t) {
  ClassFlags f;
  classify_rec(sig, t, f);
  if (f.ill) return ExprClass::ill_formed;
  if (f.function) return f.bottom ? ExprClass::partial_expression : ExprClass::total_expression;
  return f.bottom ? ExprClass::partial_term : ExprClass::total_term;
}

bool is_partial_term(const CrwlSignature& sig, const Term& t) {
  auto c = classify_expression(sig, t);
  return c == ExprClass::total_term || c == ExprClass::partial_term;
}
bool is_total_term(const CrwlSignature& sig, const Term& t) {
  return classify_expression(sig, t) == ExprClass::total_term;
}
bool is_partial_expression(const CrwlSignature& sig, const Term& t) {
  return classify_expression(sig, t) != ExprClass::ill_formed;
}
bool is_total_expression(const CrwlSignature& sig, const Term& t) {
  auto c = classify_expression(sig, t);
  return c == ExprClass::total_term || c == ExprClass::total_expression;
}

bool well_formed(const CrwlSignature& sig, const Term& t, bool allow_bottom) {
  auto c = classify_expression(sig, t);
  if (c == ExprClass::ill_formed) return false;
  return allow_bottom || (c != ExprClass::partial_term && c != ExprClass::partial_expression);
}

bool well_formed(const RlSignature& sig, const Term& t) {
  if (t.is_var()) return true;
  const Symbol* s = sig.operators.find(t.name());
  if (!s || s->arity != static_cast<int>(t.arity())) return false;
  for (const auto& a : t.args())
    if (!well_formed(sig, a)) return false;
  return true;
}

bool is_left_linear(const CrwlRule& r) {
  std::set<std::string> seen;
  std::vector<Term> subs;
  collect_subterms(r.lhs, subs);
  for (const auto& s : subs)
    if (s.is_var() && !seen.insert(s.name()).second) return false;
  return true;
}

namespace {
std::string render(const Term& t) {
  if (t.is_var() || t.arity() == 0) return t.name();
  std::string s = t.name() + "(";
  for (std::size_t i = 0; i < t.arity(); ++i) s += (i ? "," : "") + render(t.args()[i]);
  return s + ")";
}
}  // namespace

void validate_crwl_rule(const CrwlSignature& sig, const CrwlRule& r) {
  if (!r.lhs.valid() || !r.rhs.valid()) throw TheoryError("incomplete rule");
  if (r.lhs.is_var()) throw TheoryError("rule lhs is a variable");
  const Symbol* head = sig.find(r.lhs.name());
  if (!head) throw TheoryError("unknown symbol " + r.lhs.name() + " in " + render(r.lhs));
  if (head->kind != SymbolKind::function)
    throw TheoryError("rule lhs head " + head->name + " is not a defined function");
  if (head->arity != static_cast<int>(r.lhs.arity()))
    throw TheoryError("arity mismatch for " + head->name + " in " + render(r.lhs));
  for (const auto& a : r.lhs.args())
    if (classify_expression(sig, a) != ExprClass::total_term)
      throw TheoryError("lhs argument " + render(a) + " is not a constructor term");
  if (!is_left_linear(r)) throw TheoryError("non-left-linear lhs " + render(r.lhs));
  auto expr_ok = [&](const Term& t) {
    if (!well_formed(sig, t, false))
      throw TheoryError("ill-formed expression " + render(t) + " (arity, unknown symbol or bot)");
  };
  expr_ok(r.rhs);
  for (const auto& [a, b] : r.conditions) {
    expr_ok(a);
    expr_ok(b);
  }
}

void validate_rl_rule(const RlSignature& sig, const RlRule& r) {
  auto ok = [&](const Term& t) {
    if (!t.valid() || !well_formed(sig, t)) throw TheoryError("ill-formed term " + render(t));
  };
  ok(r.lhs);
  ok(r.rhs);
  for (const auto& [a, b] : r.conditions) {
    ok(a);
    ok(b);
  }
}

void validate_statement(const CrwlSignature& sig, const Statement& s) {
  if (s.kind != StatementKind::reduction && s.kind != StatementKind::joinability)
    throw TheoryError("not a CRWL statement");
  for (const Term* t : {&s.lhs, &s.rhs})
    if (!t->valid() || !well_formed(sig, *t, true)) throw TheoryError("ill-formed goal side " + render(*t));
}

void validate_statement(const RlSignature& sig, const Statement& s) {
  if (s.kind != StatementKind::rl_rewrite && s.kind != StatementKind::rl_conditional)
    throw TheoryError("not an RL statement");
  validate_rl_rule(sig, s.as_rule());
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int k = 1;; ++k) {
    std::string c = base + "_" + std::to_string(k);
    if (!taken.count(c)) return c;
  }
}

namespace {

Term linearise_rec(const Term& t, std::map<std::string, int>& seen, const std::map<std::string, int>& total,
                   std::set<std::string>& taken, const std::set<std::string>& joined, std::vector<Condition>& added) {
  if (t.is_var()) {
    int j = ++seen[t.name()];
    if (j == 1) {
      if (total.at(t.name()) == 1 && !joined.count(t.name())) added.emplace_back(t, t);
      return t;
    }
    std::string y = fresh_name(t.name() + "#" + std::to_string(j), taken);
    taken.insert(y);
    Term yv = Term::var(y);
    added.emplace_back(t, yv);
    return yv;
  }
  if (t.is_ground()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(linearise_rec(a, seen, total, taken, joined, added));
  return Term::app(t.name(), std::move(args));
}

}  // namespace

CrwlRule linearise_rule(const CrwlRule& r) {
  std::map<std::string, int> total;
  for (const auto& v : vars_in_order(r.lhs)) total[v] = count_occurrences(r.lhs, v);
  std::set<std::string> taken = r.vars();
  // a bare variable on either side of a join is already forced to be total
  std::set<std::string> joined;
  for (const auto& [a, b] : r.conditions)
    for (const Term* side : {&a, &b})
      if (side->is_var()) joined.insert(side->name());
  std::map<std::string, int> seen;
  std::vector<Condition> added;
  CrwlRule out = r;
  out.lhs = linearise_rec(r.lhs, seen, total, taken, joined, added);
  for (auto& c : added)
    if (std::find(out.conditions.begin(), out.conditions.end(), c) == out.conditions.end())
      out.conditions.push_back(c);
  return out;
}

void SignatureMorphism::validate() const {
  auto check = [&](const std::vector<Symbol>& syms, const std::map<std::string, std::string>& map,
                   SymbolKind kind) {
    for (const auto& s : syms) {
      auto it = map.find(s.name);
      if (it == map.end()) throw TheoryError("morphism undefined on " + s.name);
      const Symbol* t = target.find(it->second);
      if (!t) throw TheoryError("morphism image " + it->second + " not in target");
      if (t->kind != kind) throw TheoryError("morphism changes the kind of " + s.name);
      if (t->arity != s.arity) throw TheoryError("morphism changes the arity of " + s.name);
    }
  };
  check(source.constructors(), constructor_map, SymbolKind::constructor);
  check(source.functions(), function_map, SymbolKind::function);
  for (const auto& [from, to] : constructor_map)
    if (!source.is_constructor(from)) throw TheoryError("morphism maps unknown constructor " + from);
  for (const auto& [from, to] : function_map)
    if (!source.is_function(from)) throw TheoryError("morphism maps unknown function " + from);
}

std::string SignatureMorphism::map_symbol(const std::string& name) const {
  if (name == kBottomName) return name;
  if (auto it = constructor_map.find(name); it != constructor_map.end()) return it->second;
  if (auto it = function_map.find(name); it != function_map.end()) return it->second;
  throw TheoryError("symbol " + name + " not in morphism domain");
}

SignatureMorphism identity_morphism(const CrwlSignature& sig) {
  SignatureMorphism m{sig, sig, {}, {}};
  for (const auto& s : sig.constructors()) m.constructor_map[s.name] = s.name;
  for (const auto& s : sig.functions()) m.function_map[s.name] = s.name;
  return m;
}

SignatureMorphism compose(const SignatureMorphism& m1, const SignatureMorphism& m2) {
  SignatureMorphism m{m1.source, m2.target, {}, {}};
  for (const auto& [a, b] : m1.constructor_map) m.constructor_map[a] = m2.map_symbol(b);
  for (const auto& [a, b] : m1.function_map) m.function_map[a] = m2.map_symbol(b);
  return m;
}

Term translate_term(const SignatureMorphism& m, const Term& t) {
  if (t.is_var()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(translate_term(m, a));
  return Term::app(m.map_symbol(t.name()), std::move(args));
}

Statement translate_sentence(const SignatureMorphism& m, const Statement& s) {
  Statement out = s;
  out.lhs = translate_term(m, s.lhs);
  out.rhs = translate_term(m, s.rhs);
  for (auto& [a, b] : out.conditions) {
    a = translate_term(m, a);
    b = translate_term(m, b);
  }
  return out;
}

CrwlRule translate_sentence(const SignatureMorphism& m, const CrwlRule& r) {
  CrwlRule out;
  out.lhs = translate_term(m, r.lhs);
  out.rhs = translate_term(m, r.rhs);
  for (const auto& [a, b] : r.conditions)
    out.conditions.emplace_back(translate_term(m, a), translate_term(m, b));
  return out;
}

}  // namespace rwl
