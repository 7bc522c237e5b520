#include "rwl/model_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "detail.hpp"
#include "rwl/syntax.hpp"

namespace rwl::model {

AlgebraRef ModelFile::algebra(const std::string& name) const {
  for (const auto& a : algebras)
    if (a->name == name) return a;
  return nullptr;
}

const CrwlHom* ModelFile::hom(const std::string& name) const {
  for (const auto& h : homs)
    if (h.name == name) return &h;
  return nullptr;
}

PreorderRef ModelFile::preorder(const std::string& name) const {
  for (const auto& m : preorders)
    if (m->name == name) return m;
  return nullptr;
}

const PreorderHom* ModelFile::preorder_hom(const std::string& name) const {
  for (const auto& h : preorder_homs)
    if (h.name == name) return &h;
  return nullptr;
}

namespace {

struct Where {
  int line = 0, col = 0;
};

struct ConeSpec {
  enum Kind { principal, set, all } kind = set;
  std::vector<std::string> names;
  Where at;
};

struct OpLine {
  std::string symbol;
  std::vector<std::string> args;  // element names or `_`
  ConeSpec cone;                  // algebras
  std::string value;              // preorders
  Where at;
};

struct Block {
  enum Kind { none, algebra, hom, preorder, phom } kind = none;
  std::string name, source, target;
  Where at;
  CrwlSignature csig;
  RlSignature rsig;
  std::set<std::string> vars;
  std::vector<std::string> carrier;
  std::optional<std::string> bottom;
  std::vector<std::pair<std::string, std::string>> below;
  std::vector<Where> below_at;
  std::vector<OpLine> ops;
  std::vector<std::pair<Term, Term>> equations;
};

Where here(const TokenStream& ts) { return {ts.peek().line, ts.peek().col}; }

int parse_arity(TokenStream& ts) {
  Where w = here(ts);
  std::string digits = ts.expect_ident();
  try {
    std::size_t used = 0;
    int k = std::stoi(digits, &used);
    if (used == digits.size() && k >= 0) return k;
  } catch (const std::exception&) {
  }
  throw TheoryError("bad arity '" + digits + "'", w.line, w.col);
}

std::vector<std::pair<std::string, int>> parse_symbols(TokenStream& ts) {
  std::vector<std::pair<std::string, int>> out;
  while (!ts.at_end()) {
    std::string n = ts.expect_ident();
    ts.expect("/");
    out.emplace_back(n, parse_arity(ts));
    ts.accept(",");
  }
  return out;
}

ConeSpec parse_cone(TokenStream& ts) {
  ConeSpec c;
  c.at = here(ts);
  if (ts.accept("<")) {
    c.kind = ConeSpec::principal;
    c.names.push_back(ts.expect_ident());
    ts.expect(">");
  } else if (ts.accept("{")) {
    c.kind = ConeSpec::set;
    if (!ts.accept("}")) {
      do c.names.push_back(ts.expect_ident());
      while (ts.accept(","));
      ts.expect("}");
    }
  } else if (ts.accept("all")) {
    c.kind = ConeSpec::all;
  } else {
    ts.fail("expected a cone: <x>, {x,...} or all");
  }
  return c;
}

// `a <= b <= c , d <= e`
void parse_chains(TokenStream& ts, Block& b) {
  while (!ts.at_end()) {
    Where w = here(ts);
    std::string prev = ts.expect_ident();
    ts.expect("<=");
    do {
      std::string nxt = ts.expect_ident();
      b.below.emplace_back(prev, nxt);
      b.below_at.push_back(w);
      prev = nxt;
    } while (ts.accept("<="));
    if (!ts.accept(",")) break;
  }
  if (!ts.at_end()) ts.fail("unexpected input in order");
}

Elem lookup(const std::vector<std::string>& carrier, const std::string& n, Where w) {
  for (std::size_t i = 0; i < carrier.size(); ++i)
    if (carrier[i] == n) return static_cast<Elem>(i);
  throw TheoryError("unknown element '" + n + "'", w.line, w.col);
}

std::vector<std::uint32_t> build_order(const Block& b) {
  int n = static_cast<int>(b.carrier.size());
  if (n > kMaxCarrier) throw TheoryError("carrier too large", b.at.line, b.at.col);
  std::vector<std::pair<Elem, Elem>> pairs;
  for (std::size_t i = 0; i < b.below.size(); ++i)
    pairs.emplace_back(lookup(b.carrier, b.below[i].first, b.below_at[i]),
                       lookup(b.carrier, b.below[i].second, b.below_at[i]));
  return order_closure(n, pairs);
}

// Tuples matched by an op line, `_` matching anything.
template <class F>
void for_matching(const std::vector<std::string>& carrier, const OpLine& l, int arity, F&& f) {
  if (static_cast<int>(l.args.size()) != arity)
    throw TheoryError("wrong number of arguments for " + l.symbol, l.at.line, l.at.col);
  std::vector<int> fixed;
  for (const auto& a : l.args) fixed.push_back(a == "_" ? -1 : lookup(carrier, a, l.at));
  detail::for_each_tuple(static_cast<int>(carrier.size()), arity, [&](const std::vector<Elem>& u) {
    for (int i = 0; i < arity; ++i)
      if (fixed[i] >= 0 && fixed[i] != u[i]) return;
    f(u);
  });
}

std::string tuple_text(const std::string& f, const std::vector<Elem>& u, const std::vector<std::string>& names) {
  std::string s = f;
  if (u.empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < u.size(); ++i) s += (i ? "," : "") + names[u[i]];
  return s + ")";
}

Cone resolve_cone(const FiniteCrwlAlgebra& a, const ConeSpec& c) {
  switch (c.kind) {
    case ConeSpec::principal: return a.principal(lookup(a.elems, c.names[0], c.at));
    case ConeSpec::all: return a.carrier();
    case ConeSpec::set: {
      Cone out;
      for (const auto& n : c.names) out.insert(lookup(a.elems, n, c.at));
      return out;
    }
  }
  return Cone();
}

void finish_algebra(const Block& b, ModelFile& into) {
  if (b.carrier.empty()) throw TheoryError("algebra " + b.name + " has no carrier", b.at.line, b.at.col);
  FiniteCrwlAlgebra a;
  a.name = b.name;
  a.sig = b.csig;
  a.elems = b.carrier;
  if (b.bottom) a.bottom = lookup(a.elems, *b.bottom, b.at);
  else if (auto x = a.find(kBottomName)) a.bottom = *x;
  a.down = build_order(b);
  for (const auto& s : a.sig.symbols()) {
    std::vector<std::optional<Cone>> vals(detail::power(a.size(), s.arity));
    for (const auto& l : b.ops) {
      if (l.symbol != s.name) continue;
      Cone c = resolve_cone(a, l.cone);
      for_matching(a.elems, l, s.arity, [&](const std::vector<Elem>& u) { vals[a.index(u)] = c; });
    }
    OpTable t{s.arity, {}};
    detail::for_each_tuple(a.size(), s.arity, [&](const std::vector<Elem>& u) {
      if (!vals[a.index(u)])
        throw TheoryError("algebra " + b.name + ": no value for " + tuple_text(s.name, u, a.elems), b.at.line,
                          b.at.col);
      t.values.push_back(*vals[a.index(u)]);
    });
    a.tables[s.name] = std::move(t);
  }
  for (const auto& l : b.ops)
    if (!a.sig.find(l.symbol)) throw TheoryError("unknown symbol " + l.symbol, l.at.line, l.at.col);
  if (into.algebra(a.name)) throw TheoryError("duplicate algebra " + a.name, b.at.line, b.at.col);
  into.algebras.push_back(std::make_shared<const FiniteCrwlAlgebra>(std::move(a)));
}

void finish_hom(const Block& b, ModelFile& into) {
  CrwlHom h;
  h.name = b.name;
  h.source = into.algebra(b.source);
  h.target = into.algebra(b.target);
  if (!h.source || !h.target)
    throw TheoryError("hom " + b.name + " refers to an undefined algebra", b.at.line, b.at.col);
  std::vector<std::optional<Cone>> vals(h.source->size());
  for (const auto& l : b.ops) {
    Cone c = resolve_cone(*h.target, l.cone);
    for_matching(h.source->elems, l, 1, [&](const std::vector<Elem>& u) { vals[u[0]] = c; });
  }
  for (Elem x = 0; x < h.source->size(); ++x) {
    if (!vals[x]) throw TheoryError("hom " + b.name + ": no image for " + h.source->show(x), b.at.line, b.at.col);
    h.table.push_back(*vals[x]);
  }
  if (into.hom(h.name)) throw TheoryError("duplicate hom " + h.name, b.at.line, b.at.col);
  into.homs.push_back(std::move(h));
}

void finish_preorder(const Block& b, ModelFile& into) {
  if (b.carrier.empty()) throw TheoryError("preorder " + b.name + " has no carrier", b.at.line, b.at.col);
  PreorderRlModel m;
  m.name = b.name;
  m.sig = b.rsig;
  m.sig.equations = b.equations;
  for (const auto& [l, r] : m.sig.equations)
    if (!well_formed(m.sig, l) || !well_formed(m.sig, r))
      throw TheoryError("preorder " + b.name + ": ill-formed equation", b.at.line, b.at.col);
  m.elems = b.carrier;
  m.down = build_order(b);
  for (const auto& s : m.sig.operators.symbols()) {
    std::vector<Elem> vals(detail::power(m.size(), s.arity), -1);
    for (const auto& l : b.ops) {
      if (l.symbol != s.name) continue;
      Elem v = lookup(m.elems, l.value, l.at);
      for_matching(m.elems, l, s.arity, [&](const std::vector<Elem>& u) { vals[m.index(u)] = v; });
    }
    detail::for_each_tuple(m.size(), s.arity, [&](const std::vector<Elem>& u) {
      if (vals[m.index(u)] < 0)
        throw TheoryError("preorder " + b.name + ": no value for " + tuple_text(s.name, u, m.elems), b.at.line,
                          b.at.col);
    });
    m.ops[s.name] = std::move(vals);
  }
  for (const auto& l : b.ops)
    if (!m.sig.operators.find(l.symbol)) throw TheoryError("unknown operation " + l.symbol, l.at.line, l.at.col);
  if (into.preorder(m.name)) throw TheoryError("duplicate preorder " + m.name, b.at.line, b.at.col);
  into.preorders.push_back(std::make_shared<const PreorderRlModel>(std::move(m)));
}

void finish_phom(const Block& b, ModelFile& into) {
  PreorderHom h;
  h.name = b.name;
  h.source = into.preorder(b.source);
  h.target = into.preorder(b.target);
  if (!h.source || !h.target)
    throw TheoryError("phom " + b.name + " refers to an undefined preorder", b.at.line, b.at.col);
  h.map.assign(h.source->size(), -1);
  for (const auto& l : b.ops) {
    Elem v = lookup(h.target->elems, l.value, l.at);
    for_matching(h.source->elems, l, 1, [&](const std::vector<Elem>& u) { h.map[u[0]] = v; });
  }
  for (Elem x = 0; x < h.source->size(); ++x)
    if (h.map[x] < 0)
      throw TheoryError("phom " + b.name + ": no image for " + h.source->elems[x], b.at.line, b.at.col);
  if (into.preorder_hom(h.name)) throw TheoryError("duplicate phom " + h.name, b.at.line, b.at.col);
  into.preorder_homs.push_back(std::move(h));
}

}  // namespace

void parse_model_text(std::string_view text, ModelFile& into) {
  Block b;
  for (const auto& [no, line] : logical_lines(text)) {
    TokenStream ts(line, no);
    if (ts.at_end()) continue;
    Where w = here(ts);
    std::string kw = ts.expect_ident();
    if (b.kind == Block::none) {
      b = Block{};
      b.at = w;
      if (kw == "algebra") b.kind = Block::algebra;
      else if (kw == "hom") b.kind = Block::hom;
      else if (kw == "preorder") b.kind = Block::preorder;
      else if (kw == "phom") b.kind = Block::phom;
      else throw TheoryError("expected algebra, hom, preorder or phom", w.line, w.col);
      b.name = ts.expect_ident();
      if (b.kind == Block::hom || b.kind == Block::phom) {
        ts.expect(":");
        b.source = ts.expect_ident();
        ts.expect("->");
        b.target = ts.expect_ident();
      }
      if (!ts.at_end()) ts.fail("unexpected input after block header");
      continue;
    }
    bool is_alg = b.kind == Block::algebra, is_pre = b.kind == Block::preorder;
    bool is_map = b.kind == Block::hom || b.kind == Block::phom;
    if (kw == "end") {
      if (!ts.at_end()) ts.fail("unexpected input after end");
      if (is_alg) finish_algebra(b, into);
      else if (is_pre) finish_preorder(b, into);
      else if (b.kind == Block::hom) finish_hom(b, into);
      else finish_phom(b, into);
      b = Block{};
      continue;
    }
    if (is_alg && (kw == "constructors" || kw == "functions")) {
      for (const auto& [n, k] : parse_symbols(ts)) {
        if (b.csig.find(n)) throw TheoryError("duplicate symbol " + n, w.line, w.col);
        if (kw == "constructors") b.csig.add_constructor(n, k);
        else b.csig.add_function(n, k);
      }
    } else if (is_pre && kw == "ops") {
      for (const auto& [n, k] : parse_symbols(ts)) {
        if (b.rsig.operators.find(n)) throw TheoryError("duplicate symbol " + n, w.line, w.col);
        b.rsig.operators.add(Symbol{n, k, SymbolKind::rl_operator, false});
      }
    } else if (is_pre && kw == "vars") {
      while (!ts.at_end()) b.vars.insert(ts.expect_ident());
    } else if (is_pre && kw == "eq") {
      Term l = parse_term(ts, b.vars);
      ts.expect("=");
      Term r = parse_term(ts, b.vars);
      if (!ts.at_end()) ts.fail("unexpected input after equation");
      b.equations.emplace_back(l, r);
    } else if ((is_alg || is_pre) && kw == "carrier") {
      while (!ts.at_end()) {
        std::string e = ts.expect_ident();
        if (e == "_") throw TheoryError("'_' is not an element name", w.line, w.col);
        b.carrier.push_back(e);
      }
    } else if (is_alg && kw == "bottom") {
      b.bottom = ts.expect_ident();
    } else if ((is_alg && kw == "order") || (is_pre && kw == "leq")) {
      parse_chains(ts, b);
    } else if ((is_alg || is_pre) && kw == "op") {
      OpLine l;
      l.at = w;
      l.symbol = ts.expect_ident();
      if (ts.accept("(")) {
        if (!ts.accept(")")) {
          do l.args.push_back(ts.expect_ident());
          while (ts.accept(","));
          ts.expect(")");
        }
      }
      ts.expect("=");
      if (is_alg) l.cone = parse_cone(ts);
      else l.value = ts.expect_ident();
      b.ops.push_back(std::move(l));
    } else if (is_map && kw == "map") {
      OpLine l;
      l.at = w;
      l.args.push_back(ts.expect_ident());
      ts.expect("=");
      if (b.kind == Block::hom) l.cone = parse_cone(ts);
      else l.value = ts.expect_ident();
      b.ops.push_back(std::move(l));
    } else {
      throw TheoryError("unexpected '" + kw + "' in this block", w.line, w.col);
    }
    if (!ts.at_end()) ts.fail("unexpected input");
  }
  if (b.kind != Block::none) throw TheoryError("block " + b.name + " not closed by end", b.at.line, b.at.col);
}

ModelFile load_model_files(const std::vector<std::string>& paths) {
  ModelFile mf;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw TheoryError("cannot open " + p);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      parse_model_text(ss.str(), mf);
    } catch (const TheoryError& e) {
      throw TheoryError(p + ":" + e.what());
    }
  }
  return mf;
}

namespace {

void print_covers(std::ostringstream& os, const char* kw, int n, const std::vector<std::string>& names,
                  const std::function<bool(int, int)>& leq, bool strict_only) {
  std::vector<std::string> chains;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y || !leq(x, y)) continue;
      if (strict_only && leq(y, x)) continue;
      bool cover = true;
      for (int z = 0; z < n && cover; ++z)
        if (z != x && z != y && leq(x, z) && leq(z, y) && !(strict_only && (leq(z, x) || leq(y, z)))) cover = false;
      if (!strict_only) cover = true;
      if (cover) chains.push_back(names[x] + " <= " + names[y]);
    }
  if (chains.empty()) return;
  os << "  " << kw << " ";
  for (std::size_t i = 0; i < chains.size(); ++i) os << (i ? ", " : "") << chains[i];
  os << "\n";
}

std::string cone_text(const FiniteCrwlAlgebra& a, Cone c) {
  if (auto g = a.generator(c)) return "<" + a.elems[*g] + ">";
  std::string s = "{";
  auto es = c.elements();
  for (std::size_t i = 0; i < es.size(); ++i) s += (i ? "," : "") + a.elems[es[i]];
  return s + "}";
}

}  // namespace

std::string print_algebra(const FiniteCrwlAlgebra& a) {
  std::ostringstream os;
  os << "algebra " << a.name << "\n";
  auto syms = [&](const char* kw, const std::vector<Symbol>& ss) {
    if (ss.empty()) return;
    os << "  " << kw;
    for (const auto& s : ss) os << " " << s.name << "/" << s.arity;
    os << "\n";
  };
  syms("constructors", a.sig.constructors());
  syms("functions", a.sig.functions());
  os << "  carrier";
  for (const auto& e : a.elems) os << " " << e;
  os << "\n  bottom " << a.elems[a.bottom] << "\n";
  print_covers(os, "order", a.size(), a.elems, [&](int x, int y) { return a.leq(x, y); }, true);
  for (const auto& s : a.sig.symbols())
    detail::for_each_tuple(a.size(), s.arity, [&](const std::vector<Elem>& u) {
      os << "  op " << tuple_text(s.name, u, a.elems) << " = " << cone_text(a, a.op(s.name, u)) << "\n";
    });
  os << "end\n";
  return os.str();
}

std::string print_hom(const CrwlHom& h) {
  std::ostringstream os;
  os << "hom " << h.name << " : " << h.source->name << " -> " << h.target->name << "\n";
  for (Elem x = 0; x < h.source->size(); ++x)
    os << "  map " << h.source->elems[x] << " = " << cone_text(*h.target, h.table[x]) << "\n";
  os << "end\n";
  return os.str();
}

std::string print_preorder(const PreorderRlModel& m) {
  std::ostringstream os;
  os << "preorder " << m.name << "\n";
  if (m.sig.operators.size()) {
    os << "  ops";
    for (const auto& s : m.sig.operators.symbols()) os << " " << s.name << "/" << s.arity;
    os << "\n";
  }
  VarSet vs;
  for (const auto& [l, r] : m.sig.equations) {
    collect_vars(l, vs);
    collect_vars(r, vs);
  }
  if (!vs.empty()) {
    os << "  vars";
    for (const auto& v : vs) os << " " << v;
    os << "\n";
  }
  for (const auto& [l, r] : m.sig.equations) os << "  eq " << print_term(l) << " = " << print_term(r) << "\n";
  os << "  carrier";
  for (const auto& e : m.elems) os << " " << e;
  os << "\n";
  print_covers(os, "leq", m.size(), m.elems, [&](int x, int y) { return m.leq(x, y); }, false);
  for (const auto& s : m.sig.operators.symbols())
    detail::for_each_tuple(m.size(), s.arity, [&](const std::vector<Elem>& u) {
      os << "  op " << tuple_text(s.name, u, m.elems) << " = " << m.elems[m.op(s.name, u)] << "\n";
    });
  os << "end\n";
  return os.str();
}

}  // namespace rwl::model
