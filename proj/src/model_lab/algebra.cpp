#include <bit>
#include <set>

#include "detail.hpp"
#include "rwl/syntax.hpp"

namespace rwl::model {

Cone Cone::of(std::initializer_list<Elem> xs) {
  Cone c;
  for (Elem x : xs) c.insert(x);
  return c;
}

int Cone::size() const { return std::popcount(bits_); }

std::vector<Elem> Cone::elements() const {
  std::vector<Elem> out;
  for (std::uint32_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

Cone FiniteCrwlAlgebra::carrier() const {
  return Cone(size() >= 32 ? ~0u : (1u << size()) - 1);
}

Cone FiniteCrwlAlgebra::defined() const {
  Cone d;
  for (Elem x = 0; x < size(); ++x) {
    bool maximal = true;
    for (Elem y = 0; y < size() && maximal; ++y)
      if (y != x && leq(x, y)) maximal = false;
    if (maximal) d.insert(x);
  }
  return d;
}

bool FiniteCrwlAlgebra::is_cone(Cone c) const {
  if (!c.contains(bottom) || !c.subset_of(carrier())) return false;
  for (Elem x : c.elements())
    if (!principal(x).subset_of(c)) return false;
  return true;
}

std::optional<Elem> FiniteCrwlAlgebra::generator(Cone c) const {
  for (Elem x : c.elements())
    if (principal(x) == c) return x;
  return std::nullopt;
}

std::optional<Elem> FiniteCrwlAlgebra::find(const std::string& e) const {
  for (Elem x = 0; x < size(); ++x)
    if (elems[x] == e) return x;
  return std::nullopt;
}

std::size_t FiniteCrwlAlgebra::index(const std::vector<Elem>& args) const {
  std::size_t i = 0;
  for (Elem a : args) i = i * size() + a;
  return i;
}

Cone FiniteCrwlAlgebra::op(const std::string& h, const std::vector<Elem>& args) const {
  auto it = tables.find(h);
  if (it == tables.end()) throw TheoryError("algebra " + name + " has no table for " + h);
  return it->second.values.at(index(args));
}

Cone FiniteCrwlAlgebra::apply(const std::string& h, const std::vector<Cone>& args) const {
  auto it = tables.find(h);
  if (it == tables.end()) throw TheoryError("algebra " + name + " has no table for " + h);
  const OpTable& t = it->second;
  if (static_cast<int>(args.size()) != t.arity) throw TheoryError("arity mismatch applying " + h);
  std::vector<std::vector<Elem>> choices;
  for (const auto& c : args) {
    choices.push_back(c.elements());
    if (choices.back().empty()) return Cone();
  }
  Cone out;
  std::vector<std::size_t> pos(args.size(), 0);
  while (true) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < args.size(); ++i) idx = idx * size() + choices[i][pos[i]];
    out = out | t.values[idx];
    std::size_t k = args.size();
    while (k > 0) {
      --k;
      if (++pos[k] < choices[k].size()) break;
      pos[k] = 0;
      if (k == 0) return out;
    }
    if (args.empty()) return out;
  }
}

std::string FiniteCrwlAlgebra::show(Cone c) const {
  if (auto g = generator(c)) return "<" + elems[*g] + ">";
  std::string s = "{";
  bool first = true;
  for (Elem x : c.elements()) {
    if (!first) s += ",";
    first = false;
    s += x < size() ? elems[x] : "?" + std::to_string(x);
  }
  return s + "}";
}

std::vector<std::uint32_t> order_closure(int n, const std::vector<std::pair<Elem, Elem>>& below) {
  std::vector<std::uint32_t> down(n);
  for (int x = 0; x < n; ++x) down[x] = 1u << x;
  for (const auto& [x, y] : below) down[y] |= 1u << x;
  for (bool changed = true; changed;) {
    changed = false;
    for (int y = 0; y < n; ++y) {
      std::uint32_t d = down[y];
      for (std::uint32_t b = d; b; b &= b - 1) d |= down[std::countr_zero(b)];
      if (d != down[y]) {
        down[y] = d;
        changed = true;
      }
    }
  }
  return down;
}

using detail::for_each_tuple;
using detail::power;

Report validate_algebra(const FiniteCrwlAlgebra& a) {
  Report r;
  auto bad = [&](const std::string& m) { r.problems.push_back(m); };
  int n = a.size();
  if (n < 1) {
    bad("empty carrier");
    return r;
  }
  if (n > kMaxCarrier) {
    bad("carrier larger than " + std::to_string(kMaxCarrier));
    return r;
  }
  std::set<std::string> names(a.elems.begin(), a.elems.end());
  if (static_cast<int>(names.size()) != n) bad("duplicate element names");
  if (static_cast<int>(a.down.size()) != n) {
    bad("order relation has the wrong size");
    return r;
  }
  for (Elem x = 0; x < n; ++x) {
    if (!a.leq(x, x)) bad("order not reflexive at " + a.show(x));
    if (a.down[x] >> n) bad("order mentions elements outside the carrier");
    for (Elem y = 0; y < n; ++y) {
      if (x != y && a.leq(x, y) && a.leq(y, x)) bad("order not antisymmetric: " + a.show(x) + ", " + a.show(y));
      for (Elem z = 0; z < n; ++z)
        if (a.leq(x, y) && a.leq(y, z) && !a.leq(x, z))
          bad("order not transitive: " + a.show(x) + " " + a.show(y) + " " + a.show(z));
    }
  }
  if (a.bottom < 0 || a.bottom >= n) {
    bad("bottom outside the carrier");
    return r;
  }
  for (Elem x = 0; x < n; ++x)
    if (!a.leq(a.bottom, x)) bad("bottom not below " + a.show(x));
  if (!r.ok()) return r;

  Cone def = a.defined();
  for (const auto& [h, t] : a.tables)
    if (!a.sig.find(h)) bad("table for " + h + " which is not in the signature");
  for (const auto& s : a.sig.symbols()) {
    auto it = a.tables.find(s.name);
    if (it == a.tables.end()) {
      bad("missing table for " + s.name);
      continue;
    }
    const OpTable& t = it->second;
    if (t.arity != s.arity || t.values.size() != power(n, s.arity)) {
      bad("table for " + s.name + " has the wrong shape");
      continue;
    }
    bool ctor = a.sig.is_constructor(s.name);
    for_each_tuple(n, s.arity, [&](const std::vector<Elem>& u) {
      Cone v = t.values[a.index(u)];
      std::string at = s.name + "(";
      for (std::size_t i = 0; i < u.size(); ++i) at += (i ? "," : "") + a.show(u[i]);
      at += ")";
      if (!a.is_cone(v)) bad(at + " = " + a.show(v) + " is not a cone");
      if (ctor) {
        auto g = a.generator(v);
        if (!g) bad(at + " = " + a.show(v) + " is not a principal ideal");
        bool all_def = true;
        for (Elem x : u) all_def = all_def && def.contains(x);
        if (g && all_def && !def.contains(*g)) bad(at + " = " + a.show(v) + " is not totally defined");
      }
      for (std::size_t i = 0; i < u.size(); ++i)
        for (Elem y = 0; y < n; ++y) {
          if (y == u[i] || !a.leq(u[i], y)) continue;
          auto w = u;
          w[i] = y;
          if (!v.subset_of(t.values[a.index(w)])) bad(s.name + " not monotone at " + at);
        }
    });
  }
  return r;
}

Valuation make_valuation(const FiniteCrwlAlgebra& a, std::map<std::string, Elem> m) {
  Valuation v;
  Cone def = a.defined();
  v.total = true;
  for (const auto& [x, e] : m) v.total = v.total && def.contains(e);
  v.mapping = std::move(m);
  return v;
}

Cone eval_expr(const FiniteCrwlAlgebra& a, const Term& e, const Valuation& v) {
  if (e.is_var()) {
    auto it = v.mapping.find(e.name());
    if (it == v.mapping.end()) throw TheoryError("unbound variable " + e.name());
    return a.principal(it->second);
  }
  if (is_bottom(e)) return a.principal(a.bottom);
  std::vector<Cone> args;
  for (const auto& x : e.args()) args.push_back(eval_expr(a, x, v));
  return a.apply(e.name(), args);
}

bool satisfies_statement(const FiniteCrwlAlgebra& a, const Valuation& v, const Statement& s) {
  Cone l = eval_expr(a, s.lhs, v);
  Cone r = eval_expr(a, s.rhs, v);
  if (s.kind == StatementKind::reduction) return r.subset_of(l);
  if (s.kind == StatementKind::joinability) return !(l & r & a.defined()).empty();
  throw TheoryError("not a CRWL statement");
}

bool for_each_valuation(const FiniteCrwlAlgebra& a, const VarSet& vars, bool total_only,
                        const std::function<bool(const Valuation&)>& f) {
  std::vector<std::string> vs(vars.begin(), vars.end());
  std::vector<Elem> range = total_only ? a.defined().elements() : a.carrier().elements();
  if (range.empty() && !vs.empty()) return true;
  Cone def = a.defined();
  std::vector<std::size_t> pos(vs.size(), 0);
  while (true) {
    Valuation v;
    v.total = true;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      v.mapping[vs[i]] = range[pos[i]];
      v.total = v.total && def.contains(range[pos[i]]);
    }
    if (!f(v)) return false;
    std::size_t k = vs.size();
    while (k > 0) {
      --k;
      if (++pos[k] < range.size()) break;
      pos[k] = 0;
      if (k == 0) return true;
    }
    if (vs.empty()) return true;
  }
}

bool satisfies_everywhere(const FiniteCrwlAlgebra& a, const Statement& s, bool total_only) {
  return for_each_valuation(a, s.vars(), total_only, [&](const Valuation& v) { return satisfies_statement(a, v, s); });
}

bool satisfies_rule(const FiniteCrwlAlgebra& a, const CrwlRule& r) {
  Statement head = Statement::reduction(r.lhs, r.rhs);
  return for_each_valuation(a, r.vars(), false, [&](const Valuation& v) {
    for (const auto& [x, y] : r.conditions)
      if (!satisfies_statement(a, v, Statement::joinability(x, y))) return true;
    return satisfies_statement(a, v, head);
  });
}

bool is_model(const FiniteCrwlAlgebra& a, const CrwlTheory& T) {
  for (const auto& r : T.rules)
    if (!satisfies_rule(a, r)) return false;
  return true;
}

Cone CrwlHom::apply(Cone c) const {
  Cone out;
  for (Elem x : c.elements()) out = out | table.at(x);
  return out;
}

Report check_homomorphism(const CrwlHom& h) {
  Report r;
  auto bad = [&](const std::string& m) { r.problems.push_back(m); };
  if (!h.source || !h.target) {
    bad("homomorphism without source or target");
    return r;
  }
  const FiniteCrwlAlgebra& A = *h.source;
  const FiniteCrwlAlgebra& B = *h.target;
  if (A.sig.symbols() != B.sig.symbols()) bad("source and target signatures differ");
  if (static_cast<int>(h.table.size()) != A.size()) {
    bad("table does not cover the source carrier");
    return r;
  }
  for (Elem u = 0; u < A.size(); ++u) {
    Cone v = h.table[u];
    if (!B.is_cone(v)) bad(A.show(u) + " maps to " + B.show(v) + ", not a cone");
    else if (!B.generator(v)) bad("not element-valued at " + A.show(u));
    for (Elem w = 0; w < A.size(); ++w)
      if (A.leq(u, w) && !v.subset_of(h.table[w])) bad("not monotone: " + A.show(u) + " below " + A.show(w));
  }
  if (!(h.table[A.bottom] == B.principal(B.bottom))) bad("not strict");
  if (!r.ok()) return r;
  for (const auto& s : A.sig.symbols()) {
    bool ctor = A.sig.is_constructor(s.name);
    for_each_tuple(A.size(), s.arity, [&](const std::vector<Elem>& u) {
      Cone lhs = h.apply(A.op(s.name, u));
      std::vector<Cone> args;
      for (Elem x : u) args.push_back(h.table[x]);
      Cone rhs = B.apply(s.name, args);
      std::string at = s.name + "(";
      for (std::size_t i = 0; i < u.size(); ++i) at += (i ? "," : "") + A.show(u[i]);
      at += ")";
      if (ctor && !(lhs == rhs)) bad("does not preserve constructor at " + at);
      if (!ctor && !lhs.subset_of(rhs)) bad("does not loosely preserve " + at);
    });
  }
  return r;
}

CrwlHom compose_homomorphisms(const CrwlHom& h1, const CrwlHom& h2) {
  if (!h1.target || !h2.source || h1.target->size() != h2.source->size())
    throw TheoryError("homomorphisms do not compose");
  CrwlHom out;
  out.name = h2.name + "." + h1.name;
  out.source = h1.source;
  out.target = h2.target;
  for (Cone c : h1.table) out.table.push_back(h2.apply(c));
  return out;
}

CrwlHom identity_hom(const AlgebraRef& a) {
  CrwlHom h;
  h.name = "id";
  h.source = h.target = a;
  for (Elem x = 0; x < a->size(); ++x) h.table.push_back(a->principal(x));
  return h;
}

std::vector<CrwlHom> enumerate_homs(const AlgebraRef& a, const AlgebraRef& b) {
  std::vector<CrwlHom> out;
  int n = a->size();
  std::vector<Elem> m(n, -1);
  std::function<void(Elem)> rec = [&](Elem u) {
    if (u == n) {
      CrwlHom h;
      h.name = "h" + std::to_string(out.size());
      h.source = a;
      h.target = b;
      for (Elem x = 0; x < n; ++x) h.table.push_back(b->principal(m[x]));
      if (check_homomorphism(h).ok()) out.push_back(std::move(h));
      return;
    }
    for (Elem v = 0; v < b->size(); ++v) {
      if (u == a->bottom && v != b->bottom) continue;
      bool ok = true;
      for (Elem w = 0; w < u && ok; ++w) {
        if (a->leq(w, u) && !b->leq(m[w], v)) ok = false;
        if (a->leq(u, w) && !b->leq(v, m[w])) ok = false;
      }
      if (!ok) continue;
      m[u] = v;
      rec(u + 1);
    }
    m[u] = -1;
  };
  rec(0);
  return out;
}

FiniteCrwlAlgebra reduct(const SignatureMorphism& m, const FiniteCrwlAlgebra& a) {
  FiniteCrwlAlgebra out;
  out.name = a.name + "|";
  out.sig = m.source;
  out.elems = a.elems;
  out.bottom = a.bottom;
  out.down = a.down;
  for (const auto& s : m.source.symbols()) {
    auto it = a.tables.find(m.map_symbol(s.name));
    if (it == a.tables.end()) throw TheoryError("reduct: no table for " + m.map_symbol(s.name));
    out.tables[s.name] = it->second;
  }
  return out;
}

}  // namespace rwl::model
