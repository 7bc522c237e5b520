#include <set>

#include "detail.hpp"
#include "rwl/syntax.hpp"

namespace rwl::model {

using detail::for_each_tuple;
using detail::permutations;
using detail::permute_order;

std::size_t PreorderRlModel::index(const std::vector<Elem>& args) const {
  std::size_t i = 0;
  for (Elem a : args) i = i * size() + a;
  return i;
}

Elem PreorderRlModel::op(const std::string& f, const std::vector<Elem>& args) const {
  auto it = ops.find(f);
  if (it == ops.end()) throw TheoryError("model " + name + " has no operation " + f);
  return it->second.at(index(args));
}

Elem PreorderRlModel::eval(const Term& t, const std::map<std::string, Elem>& v) const {
  if (t.is_var()) {
    auto it = v.find(t.name());
    if (it == v.end()) throw TheoryError("unbound variable " + t.name());
    return it->second;
  }
  std::vector<Elem> args;
  for (const auto& a : t.args()) args.push_back(eval(a, v));
  return op(t.name(), args);
}

std::optional<Elem> PreorderRlModel::find(const std::string& e) const {
  for (Elem x = 0; x < size(); ++x)
    if (elems[x] == e) return x;
  return std::nullopt;
}

namespace {

// Every assignment of vars into the carrier; stops when f returns false.
bool for_each_assignment(int n, const VarSet& vars, const std::function<bool(const std::map<std::string, Elem>&)>& f) {
  std::vector<std::string> vs(vars.begin(), vars.end());
  if (n == 0) return vs.empty() ? f({}) : true;
  bool go = true;
  for_each_tuple(n, static_cast<int>(vs.size()), [&](const std::vector<Elem>& t) {
    if (!go) return;
    std::map<std::string, Elem> m;
    for (std::size_t i = 0; i < vs.size(); ++i) m[vs[i]] = t[i];
    go = f(m);
  });
  return go;
}

bool equations_hold(const PreorderRlModel& m) {
  for (const auto& [l, r] : m.sig.equations) {
    VarSet vs = vars_of(l);
    collect_vars(r, vs);
    if (!for_each_assignment(m.size(), vs, [&](const auto& v) { return m.eval(l, v) == m.eval(r, v); })) return false;
  }
  return true;
}

}  // namespace

Report validate_preorder_model(const PreorderRlModel& m) {
  Report r;
  auto bad = [&](const std::string& s) { r.problems.push_back(s); };
  int n = m.size();
  if (n > kMaxCarrier) {
    bad("carrier too large");
    return r;
  }
  if (static_cast<int>(m.down.size()) != n) {
    bad("order relation has the wrong size");
    return r;
  }
  for (Elem x = 0; x < n; ++x) {
    if (!m.leq(x, x)) bad("not reflexive at " + m.elems[x]);
    for (Elem y = 0; y < n; ++y)
      for (Elem z = 0; z < n; ++z)
        if (m.leq(x, y) && m.leq(y, z) && !m.leq(x, z))
          bad("not transitive: " + m.elems[x] + " " + m.elems[y] + " " + m.elems[z]);
  }
  for (const auto& [f, t] : m.ops)
    if (!m.sig.operators.find(f)) bad("operation " + f + " not in the signature");
  for (const auto& s : m.sig.operators.symbols()) {
    auto it = m.ops.find(s.name);
    if (it == m.ops.end() || it->second.size() != detail::power(n, s.arity)) {
      bad("operation " + s.name + " missing or of the wrong shape");
      continue;
    }
    const auto& t = it->second;
    bool shape_ok = true;
    for (Elem v : t) shape_ok = shape_ok && v >= 0 && v < n;
    if (!shape_ok) {
      bad("operation " + s.name + " leaves the carrier");
      continue;
    }
    for_each_tuple(n, s.arity, [&](const std::vector<Elem>& u) {
      for (std::size_t i = 0; i < u.size(); ++i)
        for (Elem y = 0; y < n; ++y) {
          if (y == u[i] || !m.leq(u[i], y)) continue;
          auto w = u;
          w[i] = y;
          if (!m.leq(t[m.index(u)], t[m.index(w)])) bad("operation " + s.name + " not monotone");
        }
    });
  }
  if (r.ok() && !equations_hold(m)) bad("an equation fails");
  return r;
}

bool preorder_satisfies(const PreorderRlModel& m, const RlRule& r) {
  return for_each_assignment(m.size(), r.vars(), [&](const auto& v) {
    for (const auto& [a, b] : r.conditions)
      if (!m.leq(m.eval(a, v), m.eval(b, v))) return true;
    return m.leq(m.eval(r.lhs, v), m.eval(r.rhs, v));
  });
}

bool is_preorder_model(const PreorderRlModel& m, const RlTheory& T) {
  if (!validate_preorder_model(m).ok()) return false;
  for (const auto& r : T.rules)
    if (!preorder_satisfies(m, r)) return false;
  return true;
}

void attach_witnesses(PreorderRlModel& m, const RlTheory& T) {
  for (const auto& r : T.rules)
    if (r.label) m.rule_witnesses[*r.label] = preorder_satisfies(m, r);
}

namespace {

std::vector<std::vector<std::uint32_t>> preorders(int n) {
  std::vector<std::pair<Elem, Elem>> pairs;
  for (Elem i = 0; i < n; ++i)
    for (Elem j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  auto perms = permutations(n, false);
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<std::vector<std::uint32_t>> out;
  std::size_t total = detail::power(4, static_cast<int>(pairs.size()));
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::pair<Elem, Elem>> below;
    std::size_t c = code;
    for (const auto& [i, j] : pairs) {
      int st = c % 4;
      c /= 4;
      if (st & 1) below.emplace_back(i, j);
      if (st & 2) below.emplace_back(j, i);
    }
    auto down = order_closure(n, below);
    auto canon = down;
    for (const auto& p : perms) canon = std::min(canon, permute_order(down, p));
    if (seen.insert(canon).second) out.push_back(canon);
  }
  return out;
}

std::vector<std::vector<Elem>> op_tables(const PreorderRlModel& shape, int arity) {
  int n = shape.size();
  std::vector<std::vector<Elem>> tuples;
  for_each_tuple(n, arity, [&](const std::vector<Elem>& u) { tuples.push_back(u); });
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> cur(tuples.size());
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == tuples.size()) {
      out.push_back(cur);
      return;
    }
    const auto& u = tuples[k];
    for (Elem v = 0; v < n; ++v) {
      bool ok = true;
      for (std::size_t i = 0; i < u.size() && ok; ++i)
        for (Elem y = 0; y < n && ok; ++y) {
          if (y == u[i]) continue;
          auto w = u;
          w[i] = y;
          std::size_t wi = shape.index(w);
          if (wi >= k) continue;
          if (shape.leq(y, u[i]) && !shape.leq(cur[wi], v)) ok = false;
          if (shape.leq(u[i], y) && !shape.leq(v, cur[wi])) ok = false;
        }
      if (!ok) continue;
      cur[k] = v;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<Elem> encode(const PreorderRlModel& m, const std::vector<Symbol>& syms, const std::vector<Elem>* p) {
  std::vector<Elem> code;
  for (const auto& s : syms) {
    const auto& t = m.ops.at(s.name);
    if (!p) {
      code.insert(code.end(), t.begin(), t.end());
      continue;
    }
    std::vector<Elem> vals(t.size());
    for_each_tuple(m.size(), s.arity, [&](const std::vector<Elem>& u) {
      std::vector<Elem> pu;
      for (Elem x : u) pu.push_back((*p)[x]);
      vals[m.index(pu)] = (*p)[t[m.index(u)]];
    });
    code.insert(code.end(), vals.begin(), vals.end());
  }
  return code;
}

}  // namespace

std::size_t enumerate_preorder_models(const RlTheory& T, int max_size,
                                      const std::function<bool(const PreorderRlModel&)>& sink, int hard_cap) {
  if (max_size > hard_cap) throw TheoryError("carrier size " + std::to_string(max_size) + " exceeds the cap " +
                                             std::to_string(hard_cap));
  const auto& syms = T.sig.operators.symbols();
  std::size_t count = 0;
  for (int n = 1; n <= max_size; ++n) {
    for (const auto& down : preorders(n)) {
      PreorderRlModel shape;
      shape.sig = T.sig;
      for (int i = 0; i < n; ++i) shape.elems.push_back("s" + std::to_string(i));
      shape.down = down;
      std::vector<std::vector<Elem>> autos;
      for (const auto& p : permutations(n, false))
        if (permute_order(down, p) == down) autos.push_back(p);
      std::vector<std::vector<std::vector<Elem>>> choices;
      for (const auto& s : syms) choices.push_back(op_tables(shape, s.arity));
      std::vector<std::size_t> pos(syms.size(), 0);
      while (true) {
        PreorderRlModel m = shape;
        for (std::size_t i = 0; i < syms.size(); ++i) m.ops[syms[i].name] = choices[i][pos[i]];
        bool canonical = true;
        if (autos.size() > 1) {
          auto code = encode(m, syms, nullptr);
          for (const auto& p : autos)
            if (encode(m, syms, &p) < code) {
              canonical = false;
              break;
            }
        }
        if (canonical && equations_hold(m)) {
          bool rules_ok = true;
          for (const auto& r : T.rules) rules_ok = rules_ok && preorder_satisfies(m, r);
          if (rules_ok) {
            m.name = "P" + std::to_string(count);
            attach_witnesses(m, T);
            ++count;
            if (!sink(m)) return count;
          }
        }
        std::size_t k = syms.size();
        bool done = k == 0;
        while (k > 0) {
          --k;
          if (++pos[k] < choices[k].size()) break;
          pos[k] = 0;
          if (k == 0) done = true;
        }
        if (done) break;
      }
    }
  }
  return count;
}

std::vector<PreorderRef> all_preorder_models(const RlTheory& T, int max_size, int hard_cap) {
  std::vector<PreorderRef> out;
  enumerate_preorder_models(
      T, max_size,
      [&](const PreorderRlModel& m) {
        out.push_back(std::make_shared<const PreorderRlModel>(m));
        return true;
      },
      hard_cap);
  return out;
}

Report check_preorder_hom(const PreorderHom& h) {
  Report r;
  auto bad = [&](const std::string& s) { r.problems.push_back(s); };
  if (!h.source || !h.target) {
    bad("morphism without source or target");
    return r;
  }
  const auto& A = *h.source;
  const auto& B = *h.target;
  if (static_cast<int>(h.map.size()) != A.size()) {
    bad("map does not cover the source carrier");
    return r;
  }
  for (Elem v : h.map)
    if (v < 0 || v >= B.size()) {
      bad("map leaves the target carrier");
      return r;
    }
  for (Elem x = 0; x < A.size(); ++x)
    for (Elem y = 0; y < A.size(); ++y)
      if (A.leq(x, y) && !B.leq(h.map[x], h.map[y])) bad("not monotone at " + A.elems[x] + " <= " + A.elems[y]);
  for (const auto& s : A.sig.operators.symbols()) {
    if (!B.ops.count(s.name)) {
      bad("target lacks operation " + s.name);
      continue;
    }
    for_each_tuple(A.size(), s.arity, [&](const std::vector<Elem>& u) {
      std::vector<Elem> hu;
      for (Elem x : u) hu.push_back(h.map[x]);
      if (h.map[A.op(s.name, u)] != B.op(s.name, hu)) bad("does not preserve " + s.name);
    });
  }
  return r;
}

std::vector<PreorderHom> enumerate_preorder_homs(const PreorderRef& a, const PreorderRef& b) {
  std::vector<PreorderHom> out;
  if (b->size() == 0 && a->size() > 0) return out;
  for_each_tuple(b->size(), a->size(), [&](const std::vector<Elem>& m) {
    PreorderHom h{"", a, b, m};
    if (check_preorder_hom(h).ok()) out.push_back(std::move(h));
  });
  return out;
}

PreorderEqualizer preorder_equalizer(const PreorderHom& F, const PreorderHom& G, const RlTheory& T, int check_size) {
  PreorderEqualizer res;
  const auto& S1 = *F.source;
  if (G.source != F.source || G.target != F.target) {
    res.message = "F and G do not share source and target";
    return res;
  }
  std::vector<Elem> keep;
  std::vector<Elem> pos(S1.size(), -1);
  for (Elem s = 0; s < S1.size(); ++s)
    if (F.map[s] == G.map[s]) {
      pos[s] = static_cast<Elem>(keep.size());
      keep.push_back(s);
    }
  PreorderRlModel E;
  E.name = "Eq";
  E.sig = S1.sig;
  for (Elem s : keep) E.elems.push_back(S1.elems[s]);
  int n = E.size();
  E.down.assign(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (S1.leq(keep[j], keep[i])) E.down[i] |= 1u << j;
  res.closed = true;
  for (const auto& s : S1.sig.operators.symbols()) {
    auto& t = E.ops[s.name];
    t.assign(detail::power(n, s.arity), 0);
    for_each_tuple(n, s.arity, [&](const std::vector<Elem>& u) {
      std::vector<Elem> orig;
      for (Elem x : u) orig.push_back(keep[x]);
      Elem v = S1.op(s.name, orig);
      if (pos[v] < 0) res.closed = false;  // cannot happen: F and G preserve operations
      else t[E.index(u)] = pos[v];
    });
  }
  if (!res.closed) {
    res.message = "agreement set not closed under the operations";
    return res;
  }
  attach_witnesses(E, T);
  res.object = std::make_shared<const PreorderRlModel>(E);
  res.inclusion = PreorderHom{"incl", res.object, F.source, keep};
  res.is_model = is_preorder_model(E, T) && check_preorder_hom(res.inclusion).ok();
  if (!res.is_model) {
    res.message = "equalizer object is not a model";
    return res;
  }
  std::vector<PreorderRef> tests{F.source};
  for (auto& c : all_preorder_models(T, check_size)) tests.push_back(c);
  for (const auto& C : tests) {
    auto mediators = enumerate_preorder_homs(C, res.object);
    for (const auto& h : enumerate_preorder_homs(C, F.source)) {
      bool eq = true;
      for (Elem x = 0; x < C->size(); ++x) eq = eq && F.map[h.map[x]] == G.map[h.map[x]];
      if (!eq) continue;
      int count = 0;
      for (const auto& m : mediators) {
        bool same = true;
        for (Elem x = 0; x < C->size(); ++x) same = same && keep[m.map[x]] == h.map[x];
        count += same;
      }
      if (count != 1) {
        res.message = "universal property fails for a test model of size " + std::to_string(C->size());
        return res;
      }
    }
  }
  res.universal = true;
  res.message = "equalizer with " + std::to_string(n) + " of " + std::to_string(S1.size()) + " elements";
  return res;
}

}  // namespace rwl::model
