#include "rwl/syntax.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace rwl {

namespace {

bool ident_start(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '\'' ||
         static_cast<unsigned char>(c) >= 0x80;
}
bool ident_cont(char c) { return ident_start(c) || c == '#'; }

}  // namespace

std::vector<std::pair<int, std::string>> logical_lines(std::string_view text) {
  std::vector<std::pair<int, std::string>> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || !ident_cont(line[i - 1]))) {
        line.resize(i);
        break;
      }
    }
    out.emplace_back(line_no, line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

TokenStream::TokenStream(std::string_view s, int line_no) : line_(line_no) {
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.line = line_no;
    t.col = static_cast<int>(i) + 1;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_cont(s[j])) ++j;
      t.kind = Token::ident;
      t.text = std::string(s.substr(i, j - i));
      i = j;
    } else {
      static const char* two[] = {"->", "=>", "<=", "><", "/\\"};
      bool matched = false;
      for (const char* p : two) {
        if (s.substr(i, 2) == p) {
          t.kind = Token::punct;
          t.text = p;
          i += 2;
          matched = true;
          break;
        }
      }
      if (!matched) {
        static const std::string single = "(),/=[]{}<>:;.";
        if (single.find(c) == std::string::npos)
          throw TheoryError(std::string("unexpected character '") + c + "'", line_no, t.col);
        t.kind = Token::punct;
        t.text = std::string(1, c);
        ++i;
      }
    }
    toks_.push_back(std::move(t));
  }
  Token e;
  e.kind = Token::end;
  e.line = line_no;
  e.col = static_cast<int>(s.size()) + 1;
  toks_.push_back(e);
}

const Token& TokenStream::peek(std::size_t k) const {
  std::size_t i = std::min(pos_ + k, toks_.size() - 1);
  return toks_[i];
}

Token TokenStream::next() {
  Token t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::accept(std::string_view w) {
  if (peek().kind != Token::end && peek().text == w) {
    next();
    return true;
  }
  return false;
}

void TokenStream::expect(std::string_view w) {
  if (!accept(w)) fail("expected '" + std::string(w) + "'");
}

std::string TokenStream::expect_ident() {
  if (peek().kind != Token::ident) fail("expected identifier");
  return next().text;
}

void TokenStream::fail(const std::string& msg) const {
  const Token& t = peek();
  std::string found = t.kind == Token::end ? "end of line" : "'" + t.text + "'";
  throw TheoryError(msg + ", found " + found, t.line, t.col);
}

Term parse_term(TokenStream& ts, const std::set<std::string>& vars) {
  Token head = ts.peek();
  std::string name = ts.expect_ident();
  if (ts.accept("(")) {
    if (vars.count(name)) throw TheoryError("variable " + name + " applied to arguments", head.line, head.col);
    std::vector<Term> args;
    if (!ts.accept(")")) {
      do {
        args.push_back(parse_term(ts, vars));
      } while (ts.accept(","));
      ts.expect(")");
    }
    return Term::app(name, std::move(args));
  }
  if (vars.count(name)) return Term::var(name);
  return Term::app(name);
}

Term parse_term(std::string_view text, const std::set<std::string>& vars) {
  TokenStream ts(text, 1);
  Term t = parse_term(ts, vars);
  if (!ts.at_end()) ts.fail("trailing input after term");
  return t;
}

namespace {

enum class Kind { crwl, rl };

struct Decls {
  Kind kind = Kind::crwl;
  std::string name;
  bool translated = false;
  CrwlSignature csig;
  RlSignature rsig;
  std::vector<std::string> vars;
  std::set<std::string> var_set;
};

struct SymSpec {
  std::string name;
  int arity;
  Token where;
};

std::vector<SymSpec> parse_symbol_list(TokenStream& ts) {
  std::vector<SymSpec> out;
  while (!ts.at_end()) {
    Token w = ts.peek();
    std::string name = ts.expect_ident();
    ts.expect("/");
    Token n = ts.peek();
    std::string digits = ts.expect_ident();
    int arity = 0;
    try {
      std::size_t used = 0;
      arity = std::stoi(digits, &used);
      if (used != digits.size() || arity < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw TheoryError("bad arity '" + digits + "'", n.line, n.col);
    }
    out.push_back({name, arity, w});
  }
  return out;
}

void check_name(const Decls& d, const std::string& name, const Token& where) {
  if (!d.translated && is_reserved_name(name))
    throw TheoryError("reserved symbol " + name, where.line, where.col);
}

Term term_in(TokenStream& ts, const Decls& d) { return parse_term(ts, d.var_set); }

// Reports unknown symbols with a position before the structural validators run.
void check_symbols(const Decls& d, const Term& t, const Token& where) {
  if (t.is_var()) return;
  bool known = d.kind == Kind::crwl ? (d.csig.find(t.name()) != nullptr || t.name() == kBottomName)
                                    : d.rsig.operators.find(t.name()) != nullptr;
  if (!known) throw TheoryError("unknown symbol " + t.name(), where.line, where.col);
  const Symbol* s = d.kind == Kind::crwl ? d.csig.find(t.name()) : d.rsig.operators.find(t.name());
  int arity = s ? s->arity : 0;
  if (arity != static_cast<int>(t.arity()))
    throw TheoryError("arity mismatch for " + t.name() + ": expected " + std::to_string(arity) + ", got " +
                          std::to_string(t.arity()),
                      where.line, where.col);
  for (const auto& a : t.args()) check_symbols(d, a, where);
}

Term checked_term(TokenStream& ts, const Decls& d) {
  Token where = ts.peek();
  Term t = term_in(ts, d);
  check_symbols(d, t, where);
  return t;
}

CrwlRule parse_crwl_rule(TokenStream& ts, const Decls& d) {
  CrwlRule r;
  r.lhs = checked_term(ts, d);
  ts.expect("->");
  r.rhs = checked_term(ts, d);
  if (ts.accept("<=")) {
    do {
      Term a = checked_term(ts, d);
      ts.expect("><");
      Term b = checked_term(ts, d);
      r.conditions.emplace_back(a, b);
    } while (ts.accept(","));
  }
  if (!ts.at_end()) ts.fail("unexpected input after rule");
  return r;
}

RlRule parse_rl_rule(TokenStream& ts, const Decls& d) {
  RlRule r;
  if (ts.accept("[")) {
    r.label = ts.expect_ident();
    ts.expect("]");
  }
  r.lhs = checked_term(ts, d);
  ts.expect("=>");
  r.rhs = checked_term(ts, d);
  if (ts.accept("if")) {
    do {
      Term a = checked_term(ts, d);
      ts.expect("=>");
      Term b = checked_term(ts, d);
      r.conditions.emplace_back(a, b);
    } while (ts.accept("/\\"));
  }
  if (!ts.at_end()) ts.fail("unexpected input after rule");
  return r;
}

Statement parse_goal(TokenStream& ts, const Decls& d) {
  if (d.kind == Kind::rl) {
    RlRule r = parse_rl_rule(ts, d);
    if (r.conditions.empty() && !r.label) return Statement::rewrite(r.lhs, r.rhs);
    return Statement::conditional(r);
  }
  Term a = checked_term(ts, d);
  Statement s;
  if (ts.accept("->")) s = Statement::reduction(a, checked_term(ts, d));
  else if (ts.accept("><")) s = Statement::joinability(a, checked_term(ts, d));
  else ts.fail("expected '->' or '><'");
  if (!ts.at_end()) ts.fail("unexpected input after goal");
  return s;
}

template <class F>
auto at_line(int line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const TheoryError& e) {
    if (e.line() > 0) throw;
    throw TheoryError(e.what(), line, 1);
  }
}

}  // namespace

Theory parse_theory(std::string_view text) {
  auto lines = logical_lines(text);
  Decls d;
  bool have_header = false;
  struct Pending {
    int line;
    std::string text;
  };
  std::vector<Pending> body;

  for (const auto& [no, line] : lines) {
    TokenStream ts(line, no);
    if (ts.at_end()) continue;
    Token first = ts.peek();
    std::string kw = ts.expect_ident();
    if (!have_header) {
      if (kw != "crwl" && kw != "rl") throw TheoryError("expected 'crwl theory' or 'rl theory' header", no, first.col);
      d.kind = kw == "crwl" ? Kind::crwl : Kind::rl;
      ts.expect("theory");
      d.name = ts.expect_ident();
      if (ts.accept("translated")) d.translated = true;
      if (!ts.at_end()) ts.fail("unexpected input after header");
      have_header = true;
      continue;
    }
    if (kw == "crwl" || kw == "rl") throw TheoryError("only one theory per file", no, first.col);
    if (kw == "constructors" || kw == "functions" || kw == "ops") {
      bool crwl_kw = kw != "ops";
      if (crwl_kw != (d.kind == Kind::crwl))
        throw TheoryError("'" + kw + "' not allowed in this theory kind", no, first.col);
      for (const auto& s : parse_symbol_list(ts)) {
        check_name(d, s.name, s.where);
        at_line(no, [&] {
          if (kw == "constructors") d.csig.add_constructor(s.name, s.arity);
          else if (kw == "functions") d.csig.add_function(s.name, s.arity);
          else d.rsig.operators.add(Symbol{s.name, s.arity, SymbolKind::rl_operator, false});
          return 0;
        });
      }
    } else if (kw == "objvars") {
      while (!ts.at_end()) {
        Token w = ts.peek();
        std::string n = ts.expect_ident();
        check_name(d, n, w);
        at_line(no, [&] {
          if (d.kind == Kind::crwl) d.csig.add_constructor(n, 0, true);
          else d.rsig.operators.add(Symbol{n, 0, SymbolKind::rl_operator, true});
          return 0;
        });
      }
    } else if (kw == "vars") {
      while (!ts.at_end()) {
        Token w = ts.peek();
        std::string v = ts.expect_ident();
        if (v[0] == '$') throw TheoryError("reserved variable name " + v, w.line, w.col);
        if (d.var_set.insert(v).second) d.vars.push_back(v);
      }
    } else if (kw == "rule" || kw == "eq" || kw == "goal") {
      body.push_back({no, line});
    } else {
      throw TheoryError("unknown keyword '" + kw + "'", no, first.col);
    }
  }
  if (!have_header) throw TheoryError("empty theory file", 1, 1);

  for (const auto& v : d.vars) {
    bool clash = d.kind == Kind::crwl ? d.csig.find(v) != nullptr : d.rsig.operators.find(v) != nullptr;
    if (clash || v == kBottomName) throw TheoryError("variable " + v + " clashes with a symbol");
  }

  if (d.kind == Kind::crwl) {
    CrwlTheory th;
    th.name = d.name;
    th.translated = d.translated;
    for (const auto& p : body) {
      TokenStream ts(p.text, p.line);
      std::string kw = ts.expect_ident();
      if (kw == "eq") throw TheoryError("equations are not allowed in a CRWL theory", p.line, 1);
      if (kw == "rule") {
        CrwlRule r = parse_crwl_rule(ts, d);
        at_line(p.line, [&] {
          validate_crwl_rule(d.csig, r);
          return 0;
        });
        th.rules.push_back(std::move(r));
      } else {
        Statement s = parse_goal(ts, d);
        at_line(p.line, [&] {
          validate_statement(d.csig, s);
          return 0;
        });
        th.goals.push_back(std::move(s));
      }
    }
    th.sig = std::move(d.csig);
    th.vars = std::move(d.vars);
    return th;
  }

  RlTheory th;
  th.name = d.name;
  th.translated = d.translated;
  for (const auto& p : body) {
    TokenStream ts(p.text, p.line);
    std::string kw = ts.expect_ident();
    if (kw == "eq") {
      Term a = checked_term(ts, d);
      ts.expect("=");
      Term b = checked_term(ts, d);
      if (!ts.at_end()) ts.fail("unexpected input after equation");
      d.rsig.equations.emplace_back(a, b);
    } else if (kw == "rule") {
      RlRule r = parse_rl_rule(ts, d);
      at_line(p.line, [&] {
        validate_rl_rule(d.rsig, r);
        return 0;
      });
      th.rules.push_back(std::move(r));
    } else {
      Statement s = parse_goal(ts, d);
      th.goals.push_back(std::move(s));
    }
  }
  th.sig = std::move(d.rsig);
  th.vars = std::move(d.vars);
  return th;
}

Theory load_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TheoryError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_theory(ss.str());
}

const std::string& theory_name(const Theory& th) {
  return std::visit([](const auto& t) -> const std::string& { return t.name; }, th);
}

std::set<std::string> declared_vars(const Theory& th) {
  return std::visit([](const auto& t) { return std::set<std::string>(t.vars.begin(), t.vars.end()); }, th);
}

Statement parse_statement(const Theory& th, std::string_view text) {
  Decls d;
  if (const auto* c = std::get_if<CrwlTheory>(&th)) {
    d.kind = Kind::crwl;
    d.csig = c->sig;
    d.vars = c->vars;
  } else {
    const auto& r = std::get<RlTheory>(th);
    d.kind = Kind::rl;
    d.rsig = r.sig;
    d.vars = r.vars;
  }
  d.var_set = std::set<std::string>(d.vars.begin(), d.vars.end());
  TokenStream ts(text, 1);
  Statement s = parse_goal(ts, d);
  if (d.kind == Kind::crwl) validate_statement(d.csig, s);
  else validate_statement(d.rsig, s);
  return s;
}

std::string print_term(const Term& t) {
  if (!t.valid()) return "<null>";
  if (t.is_var() || t.arity() == 0) return t.name();
  std::string s = t.name() + "(";
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) s += ",";
    s += print_term(t.args()[i]);
  }
  return s + ")";
}

std::string print_statement(const Statement& s) {
  switch (s.kind) {
    case StatementKind::reduction: return print_term(s.lhs) + " -> " + print_term(s.rhs);
    case StatementKind::joinability: return print_term(s.lhs) + " >< " + print_term(s.rhs);
    case StatementKind::rl_rewrite: return print_term(s.lhs) + " => " + print_term(s.rhs);
    case StatementKind::rl_conditional: return print_rule(s.as_rule());
  }
  return "";
}

std::string print_rule(const CrwlRule& r) {
  std::string s = print_term(r.lhs) + " -> " + print_term(r.rhs);
  for (std::size_t i = 0; i < r.conditions.size(); ++i) {
    s += i ? " , " : " <= ";
    s += print_term(r.conditions[i].first) + " >< " + print_term(r.conditions[i].second);
  }
  return s;
}

std::string print_rule(const RlRule& r) {
  std::string s;
  if (r.label) s += "[" + *r.label + "] ";
  s += print_term(r.lhs) + " => " + print_term(r.rhs);
  for (std::size_t i = 0; i < r.conditions.size(); ++i) {
    s += i ? " /\\ " : " if ";
    s += print_term(r.conditions[i].first) + " => " + print_term(r.conditions[i].second);
  }
  return s;
}

namespace {

void print_symbols(std::ostringstream& os, const char* kw, const std::vector<Symbol>& syms) {
  bool any = false;
  for (const auto& s : syms) {
    if (s.is_var_constant) continue;
    if (!any) os << "  " << kw;
    any = true;
    os << " " << s.name << "/" << s.arity;
  }
  if (any) os << "\n";
}

void print_objvars(std::ostringstream& os, const std::vector<Symbol>& syms) {
  bool any = false;
  for (const auto& s : syms) {
    if (!s.is_var_constant) continue;
    if (!any) os << "  objvars";
    any = true;
    os << " " << s.name;
  }
  if (any) os << "\n";
}

template <class Th>
std::vector<std::string> all_vars(const Th& th) {
  std::vector<std::string> out = th.vars;
  std::set<std::string> seen(out.begin(), out.end());
  auto add = [&](const VarSet& vs) {
    for (const auto& v : vs)
      if (seen.insert(v).second) out.push_back(v);
  };
  for (const auto& r : th.rules) add(r.vars());
  for (const auto& g : th.goals) add(g.vars());
  if constexpr (std::is_same_v<Th, RlTheory>)
    for (const auto& [a, b] : th.sig.equations) {
      add(vars_of(a));
      add(vars_of(b));
    }
  return out;
}

}  // namespace

std::string print_theory(const Theory& th) {
  std::ostringstream os;
  if (const auto* c = std::get_if<CrwlTheory>(&th)) {
    os << "crwl theory " << c->name << (c->translated ? " translated" : "") << "\n";
    print_symbols(os, "constructors", c->sig.constructors());
    print_objvars(os, c->sig.constructors());
    print_symbols(os, "functions", c->sig.functions());
    auto vs = all_vars(*c);
    if (!vs.empty()) {
      os << "  vars";
      for (const auto& v : vs) os << " " << v;
      os << "\n";
    }
    for (const auto& r : c->rules) os << "  rule " << print_rule(r) << "\n";
    for (const auto& g : c->goals) os << "  goal " << print_statement(g) << "\n";
    return os.str();
  }
  const auto& r = std::get<RlTheory>(th);
  os << "rl theory " << r.name << (r.translated ? " translated" : "") << "\n";
  print_symbols(os, "ops", r.sig.operators.symbols());
  print_objvars(os, r.sig.operators.symbols());
  auto vs = all_vars(r);
  if (!vs.empty()) {
    os << "  vars";
    for (const auto& v : vs) os << " " << v;
    os << "\n";
  }
  for (const auto& [a, b] : r.sig.equations) os << "  eq " << print_term(a) << " = " << print_term(b) << "\n";
  for (const auto& rule : r.rules) os << "  rule " << print_rule(rule) << "\n";
  for (const auto& g : r.goals) os << "  goal " << print_statement(g) << "\n";
  return os.str();
}

}  // namespace rwl
