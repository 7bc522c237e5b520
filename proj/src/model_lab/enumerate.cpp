#include <set>

#include "detail.hpp"

namespace rwl::model {

using detail::for_each_tuple;
using detail::map_bits;
using detail::permutations;
using detail::permute_order;

namespace {

// Partial orders on {0..n-1} with least element 0, one per isomorphism class.
std::vector<std::vector<std::uint32_t>> posets_with_bottom(int n) {
  std::vector<std::pair<Elem, Elem>> pairs;
  for (Elem i = 1; i < n; ++i)
    for (Elem j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  auto perms = permutations(n, true);
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<std::vector<std::uint32_t>> out;
  std::size_t total = detail::power(3, static_cast<int>(pairs.size()));
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::pair<Elem, Elem>> below;
    for (Elem x = 1; x < n; ++x) below.emplace_back(0, x);
    std::size_t c = code;
    for (const auto& [i, j] : pairs) {
      int st = c % 3;
      c /= 3;
      if (st == 1) below.emplace_back(i, j);
      if (st == 2) below.emplace_back(j, i);
    }
    auto down = order_closure(n, below);
    bool anti = true;
    for (Elem x = 0; x < n && anti; ++x)
      for (Elem y = 0; y < n && anti; ++y)
        if (x != y && ((down[y] >> x) & 1u) && ((down[x] >> y) & 1u)) anti = false;
    if (!anti) continue;
    auto canon = down;
    for (const auto& p : perms) canon = std::min(canon, permute_order(down, p));
    if (seen.insert(canon).second) out.push_back(canon);
  }
  return out;
}

std::vector<Cone> all_cones(const FiniteCrwlAlgebra& a) {
  std::vector<Cone> out;
  for (std::uint32_t b = 0; b < (1u << a.size()); ++b)
    if (a.is_cone(Cone(b))) out.push_back(Cone(b));
  return out;
}

// Every valid table for one symbol over the poset of `a`.
std::vector<OpTable> tables_for(const FiniteCrwlAlgebra& a, const Symbol& s, bool ctor, const std::vector<Cone>& cones) {
  int n = a.size();
  std::vector<std::vector<Elem>> tuples;
  for_each_tuple(n, s.arity, [&](const std::vector<Elem>& u) { tuples.push_back(u); });
  Cone def = a.defined();
  std::vector<std::vector<Cone>> options(tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    bool all_def = true;
    for (Elem x : tuples[i]) all_def = all_def && def.contains(x);
    if (!ctor) {
      options[i] = cones;
      continue;
    }
    for (Elem v = 0; v < n; ++v)
      if (!all_def || def.contains(v)) options[i].push_back(a.principal(v));
  }
  std::vector<OpTable> out;
  OpTable cur{s.arity, std::vector<Cone>(tuples.size())};
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == tuples.size()) {
      out.push_back(cur);
      return;
    }
    const auto& u = tuples[k];
    for (Cone v : options[k]) {
      bool ok = true;
      for (std::size_t i = 0; i < u.size() && ok; ++i)
        for (Elem y = 0; y < n && ok; ++y) {
          if (y == u[i]) continue;
          auto w = u;
          w[i] = y;
          std::size_t wi = a.index(w);
          if (wi >= k) continue;
          if (a.leq(y, u[i]) && !cur.values[wi].subset_of(v)) ok = false;
          if (a.leq(u[i], y) && !v.subset_of(cur.values[wi])) ok = false;
        }
      if (!ok) continue;
      cur.values[k] = v;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<std::uint32_t> encode(const FiniteCrwlAlgebra& a, const std::vector<Symbol>& syms) {
  std::vector<std::uint32_t> code;
  for (const auto& s : syms)
    for (Cone c : a.tables.at(s.name).values) code.push_back(c.bits());
  return code;
}

std::vector<std::uint32_t> encode_permuted(const FiniteCrwlAlgebra& a, const std::vector<Symbol>& syms,
                                           const std::vector<Elem>& p) {
  std::vector<std::uint32_t> code;
  for (const auto& s : syms) {
    const OpTable& t = a.tables.at(s.name);
    std::vector<std::uint32_t> vals(t.values.size());
    for_each_tuple(a.size(), s.arity, [&](const std::vector<Elem>& u) {
      std::vector<Elem> pu;
      for (Elem x : u) pu.push_back(p[x]);
      vals[a.index(pu)] = map_bits(t.values[a.index(u)].bits(), p);
    });
    code.insert(code.end(), vals.begin(), vals.end());
  }
  return code;
}

std::string element_name(int i) { return i == 0 ? std::string(kBottomName) : "e" + std::to_string(i); }

}  // namespace

std::size_t enumerate_algebras(const CrwlSignature& sig, int max_size, const AlgebraPredicate& pred,
                               const std::function<bool(const FiniteCrwlAlgebra&)>& sink, int hard_cap) {
  if (max_size > hard_cap) throw TheoryError("carrier size " + std::to_string(max_size) + " exceeds the cap " +
                                             std::to_string(hard_cap));
  if (max_size > kMaxCarrier) throw TheoryError("carrier size too large");
  std::size_t count = 0;
  const auto& syms = sig.symbols();
  for (int n = 1; n <= max_size; ++n) {
    for (const auto& down : posets_with_bottom(n)) {
      FiniteCrwlAlgebra shape;
      shape.sig = sig;
      for (int i = 0; i < n; ++i) shape.elems.push_back(element_name(i));
      shape.bottom = 0;
      shape.down = down;
      std::vector<std::vector<Elem>> autos;
      for (const auto& p : permutations(n, true))
        if (permute_order(down, p) == down) autos.push_back(p);
      auto cones = all_cones(shape);
      std::vector<std::vector<OpTable>> choices;
      bool empty = false;
      for (const auto& s : syms) {
        choices.push_back(tables_for(shape, s, sig.is_constructor(s.name), cones));
        empty = empty || choices.back().empty();
      }
      if (empty) continue;
      std::vector<std::size_t> pos(syms.size(), 0);
      while (true) {
        FiniteCrwlAlgebra a = shape;
        for (std::size_t i = 0; i < syms.size(); ++i) a.tables[syms[i].name] = choices[i][pos[i]];
        bool canonical = true;
        if (autos.size() > 1) {
          auto code = encode(a, syms);
          for (const auto& p : autos)
            if (encode_permuted(a, syms, p) < code) {
              canonical = false;
              break;
            }
        }
        if (canonical && (!pred || pred(a))) {
          a.name = "M" + std::to_string(count);
          ++count;
          if (!sink(a)) return count;
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

std::vector<AlgebraRef> all_algebras(const CrwlSignature& sig, int max_size, const AlgebraPredicate& pred,
                                     int hard_cap) {
  std::vector<AlgebraRef> out;
  enumerate_algebras(
      sig, max_size, pred,
      [&](const FiniteCrwlAlgebra& a) {
        out.push_back(std::make_shared<const FiniteCrwlAlgebra>(a));
        return true;
      },
      hard_cap);
  return out;
}

namespace {

AlgebraPredicate model_filter(const CrwlTheory* theory) {
  if (!theory) return {};
  return [theory](const FiniteCrwlAlgebra& a) { return is_model(a, *theory); };
}

bool equalizes(const CrwlHom& F, const CrwlHom& G, const CrwlHom& h) {
  return compose_homomorphisms(h, F) == compose_homomorphisms(h, G);
}

std::vector<AlgebraRef> test_objects(const CrwlHom& F, int max_size, const CrwlTheory* theory, int hard_cap) {
  // The source itself first: the arrow that usually breaks a candidate lives there.
  std::vector<AlgebraRef> tests{F.source};
  for (auto& c : all_algebras(F.source->sig, max_size, model_filter(theory), hard_cap)) tests.push_back(c);
  return tests;
}

bool universal(const CrwlHom& F, const CrwlHom& G, const EqualizerCandidate& c, const std::vector<AlgebraRef>& tests,
               std::string* why) {
  for (const auto& C : tests) {
    auto mediators = enumerate_homs(C, c.object);
    for (const auto& h : enumerate_homs(C, F.source)) {
      if (!equalizes(F, G, h)) continue;
      int count = 0;
      for (const auto& m : mediators)
        if (compose_homomorphisms(m, c.arrow) == h) ++count;
      if (count != 1) {
        if (why) {
          std::string tab;
          for (Elem x = 0; x < C->size(); ++x) tab += (x ? " " : "") + C->show(x) + "->" + F.source->show(h.table[x]);
          *why = (count == 0 ? "no mediating arrow" : std::to_string(count) + " mediating arrows") + " for test arrow [" +
                 tab + "] from a " + std::to_string(C->size()) + "-element algebra";
        }
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<EqualizerCandidate> equalizing_candidates(const CrwlHom& F, const CrwlHom& G, int max_size,
                                                      const CrwlTheory* theory, int hard_cap) {
  std::vector<EqualizerCandidate> out;
  for (const auto& E : all_algebras(F.source->sig, max_size, model_filter(theory), hard_cap))
    for (auto& e : enumerate_homs(E, F.source))
      if (equalizes(F, G, e)) {
        e.name = "e";
        out.push_back({E, std::move(e)});
      }
  return out;
}

bool is_equalizer(const CrwlHom& F, const CrwlHom& G, const EqualizerCandidate& c, int max_size,
                  const CrwlTheory* theory, std::string* why, int hard_cap) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (!c.object || c.arrow.source != c.object || c.arrow.target != F.source)
    return fail("candidate arrow does not go from the object to the source");
  if (!validate_algebra(*c.object).ok()) return fail("candidate object is not an algebra");
  if (theory && !is_model(*c.object, *theory)) return fail("candidate object is not a model");
  if (!check_homomorphism(c.arrow).ok()) return fail("candidate arrow is not a homomorphism");
  if (!equalizes(F, G, c.arrow)) return fail("candidate arrow does not equalize");
  return universal(F, G, c, test_objects(F, max_size, theory, hard_cap), why);
}

std::string EqualizerSearch::describe() const {
  if (found) return "equalizer found with a " + std::to_string(found->object->size()) + "-element object";
  return "no equalizer up to size " + std::to_string(max_size) + " (" + std::to_string(candidates) +
         " candidates refuted)";
}

EqualizerSearch search_equalizer(const CrwlHom& F, const CrwlHom& G, int max_size, const CrwlTheory* theory,
                                 int hard_cap) {
  EqualizerSearch res;
  res.max_size = max_size;
  auto tests = test_objects(F, max_size, theory, hard_cap);
  for (auto& c : equalizing_candidates(F, G, max_size, theory, hard_cap)) {
    ++res.candidates;
    if (universal(F, G, c, tests, nullptr)) {
      res.found = std::move(c);
      return res;
    }
  }
  return res;
}

Replay replay_no_equalizer(const CrwlHom& F, const CrwlHom& G, const CrwlHom& H, const EqualizerCandidate& c,
                           const std::string& a1_name, const std::string& b1_name) {
  Replay r;
  const AlgebraRef& A = F.source;
  const AlgebraRef& B = F.target;
  const AlgebraRef& E = c.object;
  auto a1 = A->find(a1_name);
  auto b1 = B->find(b1_name);
  if (!a1 || !b1 || B->size() != 2) {
    r.message = "source or target does not have the expected shape";
    return r;
  }
  if (!equalizes(F, G, H)) {
    r.message = "H does not equalize F and G";
    return r;
  }
  for (auto& m : enumerate_homs(A, E))
    if (compose_homomorphisms(m, c.arrow) == H) {
      r.mediator = std::move(m);
      r.mediator->name = "M";
      break;
    }
  if (!r.mediator) {
    r.refuted = true;
    r.message = "no M with e.M = H, so the candidate already fails existence";
    return r;
  }
  auto e1 = E->generator(r.mediator->table[*a1]);
  if (!e1 || !(c.arrow.table[*e1] == A->principal(*a1))) {
    r.message = "M(a1) is not generated by an element over a1";
    return r;
  }
  r.e1 = *e1;
  for (Elem y = 0; y < E->size(); ++y)
    if (y != r.e1 && E->leq(r.e1, y)) {
      r.e2 = y;
      break;
    }
  if (r.e2 < 0) {
    r.message = "nothing strictly above e1, so the candidate is not a model";
    return r;
  }
  if (!(c.arrow.table[r.e2] == A->principal(*a1))) {
    r.message = "e(e2) differs from <a1>";
    return r;
  }
  auto build = [&](Elem top, const std::string& name) {
    CrwlHom m;
    m.name = name;
    m.source = B;
    m.target = E;
    m.table.assign(2, E->principal(E->bottom));
    m.table[*b1] = E->principal(top);
    return m;
  };
  r.m1 = build(r.e1, "M1");
  r.m2 = build(r.e2, "M2");
  auto k1 = check_homomorphism(*r.m1);
  auto k2 = check_homomorphism(*r.m2);
  if (!k1.ok() || !k2.ok()) {
    r.message = "M1 or M2 is not a homomorphism: " + (k1.ok() ? k2 : k1).problems.front();
    return r;
  }
  if (*r.m1 == *r.m2 || !(compose_homomorphisms(*r.m1, c.arrow) == compose_homomorphisms(*r.m2, c.arrow))) {
    r.message = "M1 and M2 do not witness non-uniqueness";
    return r;
  }
  r.refuted = true;
  r.message = "M1 != M2 with e.M1 = e.M2 (e1=" + E->show(r.e1) + ", e2=" + E->show(r.e2) + ")";
  return r;
}

AlgebraRef automorphism_algebra(const CrwlSignature& sig, int k) {
  if (k < 1 || k + 2 > kMaxCarrier) throw TheoryError("automorphism family size out of range");
  FiniteCrwlAlgebra a;
  a.name = "Aut" + std::to_string(k);
  a.sig = sig;
  a.elems = {kBottomName, "a"};
  for (int i = 1; i <= k; ++i) a.elems.push_back("b" + std::to_string(i));
  int n = a.size();
  std::vector<std::pair<Elem, Elem>> below{{0, 1}, {0, 2}};
  for (Elem i = 2; i + 1 < n; ++i) below.emplace_back(i, i + 1);
  a.down = order_closure(n, below);
  for (const auto& s : sig.symbols()) {
    Cone v = sig.is_constructor(s.name) ? a.principal(1) : a.carrier();
    a.tables[s.name] = OpTable{s.arity, std::vector<Cone>(detail::power(n, s.arity), v)};
  }
  return std::make_shared<const FiniteCrwlAlgebra>(std::move(a));
}

std::vector<CrwlHom> automorphism_family(const AlgebraRef& a, int k) {
  std::vector<CrwlHom> out;
  for (int i = 1; i <= k; ++i) {
    CrwlHom h;
    h.name = "F" + std::to_string(i);
    h.source = h.target = a;
    h.table = {a->principal(0), a->principal(1)};
    for (int j = 1; j <= k; ++j) h.table.push_back(a->principal(1 + i));
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace rwl::model
