#include <doctest.h>

#include "rwl/crwl.hpp"
#include "rwl/model.hpp"
#include "rwl/model_io.hpp"
#include "util.hpp"

using namespace rwl;
using namespace rwl::model;

namespace {

ModelFile sec36() { return load_model_files({testutil::corpus("sec3_6/models.txt")}); }
CrwlTheory sec36_theory() { return std::get<CrwlTheory>(load_theory_file(testutil::corpus("sec3_6/theory.crwl"))); }

ModelFile parse(const std::string& text) {
  ModelFile mf;
  parse_model_text(text, mf);
  return mf;
}

Elem el(const FiniteCrwlAlgebra& a, const std::string& n) { return *a.find(n); }

}  // namespace

TEST_SUITE("model_lab") {
  TEST_CASE("validation of the counterexample algebras and broken variants") {
    auto mf = sec36();
    CHECK(validate_algebra(*mf.algebra("A")).ok());
    CHECK(validate_algebra(*mf.algebra("B")).ok());

    FiniteCrwlAlgebra noBot = *mf.algebra("A");
    noBot.tables["f1"].values[0] = Cone::of({el(noBot, "a1")});
    CHECK_FALSE(validate_algebra(noBot).ok());

    auto bad = parse(
        "algebra C\n constructors c/0\n carrier bot p q\n bottom bot\n order bot <= p, bot <= q\n op c = {p,q}\nend\n");
    CHECK_FALSE(validate_algebra(*bad.algebra("C")).ok());
  }

  TEST_CASE("evaluation and satisfaction on the counterexample algebra") {
    auto A = sec36().algebra("A");
    Valuation any = make_valuation(*A, {});
    CHECK(eval_expr(*A, bottom(), any) == Cone::of({el(*A, "bot")}));
    CHECK(eval_expr(*A, Term::app("f1"), any) == Cone::of({el(*A, "bot"), el(*A, "a1")}));
    Valuation top = make_valuation(*A, {{"x", el(*A, "a2")}});
    CHECK(eval_expr(*A, Term::var("x"), top) == A->carrier());

    Term f1 = Term::app("f1");
    CHECK_FALSE(satisfies_statement(*A, any, Statement::joinability(f1, f1)));
    CHECK(satisfies_statement(*A, any, Statement::reduction(f1, bottom())));
    CHECK(satisfies_statement(*A, any, Statement::reduction(f1, f1)));
  }

  TEST_CASE("models of the one-rule theory") {
    auto mf = sec36();
    CrwlTheory T = sec36_theory();
    CHECK(is_model(*mf.algebra("A"), T));
    CHECK(is_model(*mf.algebra("B"), T));
    auto C = parse("algebra C\n functions f1/0 f2/0\n carrier bot a\n bottom bot\n order bot <= a\n op f1 = <a>\n op f2 = <bot>\nend\n");
    REQUIRE(validate_algebra(*C.algebra("C")).ok());
    CHECK_FALSE(is_model(*C.algebra("C"), T));
  }

  TEST_CASE("homomorphisms F, G, H and their compositions") {
    auto mf = sec36();
    for (const char* h : {"F", "G", "H"}) CHECK(check_homomorphism(*mf.hom(h)).ok());
    CHECK(compose_homomorphisms(*mf.hom("H"), *mf.hom("F")) == compose_homomorphisms(*mf.hom("H"), *mf.hom("G")));
    CHECK_FALSE(*mf.hom("F") == *mf.hom("G"));
  }

  TEST_CASE("property: composition is associative and identities are neutral") {
    auto sig = sec36().algebra("A")->sig;
    auto algs = all_algebras(sig, 3);
    REQUIRE(algs.size() >= 3);
    std::mt19937 g(17);
    int triples = 0;
    for (int i = 0; i < 200 && triples < 60; ++i) {
      const auto& a = algs[g() % algs.size()];
      const auto& b = algs[g() % algs.size()];
      const auto& c = algs[g() % algs.size()];
      const auto& d = algs[g() % algs.size()];
      auto ab = enumerate_homs(a, b), bc = enumerate_homs(b, c), cd = enumerate_homs(c, d);
      if (ab.empty() || bc.empty() || cd.empty()) continue;
      ++triples;
      const auto& f = ab[g() % ab.size()];
      const auto& h = bc[g() % bc.size()];
      const auto& k = cd[g() % cd.size()];
      CHECK(compose_homomorphisms(compose_homomorphisms(f, h), k) == compose_homomorphisms(f, compose_homomorphisms(h, k)));
      CHECK(compose_homomorphisms(identity_hom(a), f) == f);
      CHECK(compose_homomorphisms(f, identity_hom(b)) == f);
      CHECK(check_homomorphism(compose_homomorphisms(f, h)).ok());
    }
    CHECK(triples > 10);
  }

  TEST_CASE("property: evaluation gives cones, monotone in the valuation") {
    CrwlSignature sig;
    sig.add_constructor("z", 0);
    sig.add_constructor("s", 1);
    sig.add_function("f", 1);
    auto algs = all_algebras(sig, 3);
    REQUIRE(!algs.empty());
    std::mt19937 g(23);
    const std::vector<std::pair<std::string, int>> ops = {{"z", 0}, {"s", 1}, {"f", 1}, {"bot", 0}};
    const std::vector<std::pair<std::string, int>> ctors = {{"z", 0}, {"s", 1}};
    for (const auto& a : algs)
      for (int i = 0; i < 20; ++i) {
        Term e = testutil::random_term(g, ops, {"x"}, 4);
        Elem lo = static_cast<Elem>(g() % a->size()), hi = static_cast<Elem>(g() % a->size());
        if (!a->leq(lo, hi)) std::swap(lo, hi);
        if (!a->leq(lo, hi)) continue;
        Cone c1 = eval_expr(*a, e, make_valuation(*a, {{"x", lo}}));
        Cone c2 = eval_expr(*a, e, make_valuation(*a, {{"x", hi}}));
        CHECK(a->is_cone(c1));
        CHECK(c1.subset_of(c2));

        Term t = testutil::random_term(g, ctors, {"x"}, 3);
        for (Elem v : a->defined().elements()) {
          Cone tc = eval_expr(*a, t, make_valuation(*a, {{"x", v}}));
          auto gen = a->generator(tc);
          REQUIRE(gen.has_value());
          CHECK(a->defined().contains(*gen));
        }
      }
  }

  TEST_CASE("reducts") {
    auto A = sec36().algebra("A");
    FiniteCrwlAlgebra same = reduct(identity_morphism(A->sig), *A);
    CHECK(same.tables == A->tables);
    CHECK(same.down == A->down);

    CrwlSignature src;
    src.add_function("f", 0);
    SignatureMorphism m{src, A->sig, {}, {{"f", "f1"}}};
    m.validate();
    FiniteCrwlAlgebra red = reduct(m, *A);
    CHECK(red.tables.at("f").values == A->tables.at("f1").values);
  }

  TEST_CASE("property: satisfaction is invariant under reducts") {
    CrwlSignature src, tgt;
    src.add_constructor("a", 0);
    src.add_constructor("b", 0);
    src.add_function("f", 1);
    tgt.add_constructor("c", 0);
    tgt.add_function("h", 1);
    SignatureMorphism m{src, tgt, {{"a", "c"}, {"b", "c"}}, {{"f", "h"}}};
    m.validate();
    std::mt19937 g(29);
    const std::vector<std::pair<std::string, int>> ops = {{"a", 0}, {"b", 0}, {"f", 1}, {"bot", 0}};
    std::vector<Statement> sentences;
    for (int i = 0; i < 25; ++i) {
      Term l = testutil::random_term(g, ops, {"x"}, 3), r = testutil::random_term(g, ops, {"x"}, 3);
      sentences.push_back(i % 2 ? Statement::reduction(l, r) : Statement::joinability(l, r));
    }
    for (const auto& a : all_algebras(tgt, 3)) {
      FiniteCrwlAlgebra red = reduct(m, *a);
      REQUIRE(validate_algebra(red).ok());
      for (const auto& s : sentences)
        CHECK(satisfies_everywhere(*a, translate_sentence(m, s), false) == satisfies_everywhere(red, s, false));
    }
  }

  TEST_CASE("enumeration") {
    auto sig = sec36().algebra("A")->sig;
    CrwlTheory T = sec36_theory();
    auto models = all_algebras(sig, 2, [&](const FiniteCrwlAlgebra& a) { return is_model(a, T); });
    auto B = sec36().algebra("B");
    CHECK(std::any_of(models.begin(), models.end(), [&](const AlgebraRef& m) {
      return m->size() == 2 && m->tables == B->tables && m->down == B->down;
    }));
    auto one = all_algebras(sig, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0]->size() == 1);
    // regression pin taken from the first enumeration run
    CHECK(all_algebras(sig, 2).size() == 5);
  }

  TEST_CASE("equalizers: none for F, G; identity for equal arrows") {
    auto mf = sec36();
    CrwlTheory T = sec36_theory();
    auto search = search_equalizer(*mf.hom("F"), *mf.hom("G"), 4, &T);
    CHECK_FALSE(search.found.has_value());
    CHECK(search.candidates > 0);

    auto A = mf.algebra("A");
    CrwlHom id = identity_hom(A);
    EqualizerCandidate c{A, id};
    CHECK(is_equalizer(id, id, c, 3, &T));

    auto cands = equalizing_candidates(*mf.hom("F"), *mf.hom("G"), 3, &T);
    int built = 0;
    for (const auto& cand : cands) {
      auto rp = replay_no_equalizer(*mf.hom("F"), *mf.hom("G"), *mf.hom("H"), cand);
      CHECK(rp.refuted);
      if (!rp.m1) continue;
      ++built;
      CHECK_FALSE(*rp.m1 == *rp.m2);
      CHECK(compose_homomorphisms(*rp.m1, cand.arrow) == compose_homomorphisms(*rp.m2, cand.arrow));
    }
    CHECK(built > 0);
  }

  TEST_CASE("automorphism family is valid and pairwise distinct") {
    CrwlSignature sig;
    sig.add_constructor("c", 0);
    sig.add_function("f", 0);
    auto a = automorphism_algebra(sig, 4);
    CHECK(validate_algebra(*a).ok());
    auto fam = automorphism_family(a, 4);
    REQUIRE(fam.size() == 4);
    for (std::size_t i = 0; i < fam.size(); ++i) {
      CHECK(check_homomorphism(fam[i]).ok());
      for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(fam[i] == fam[j]);
    }
  }

  TEST_CASE("model files round-trip through the printer") {
    auto mf = sec36();
    for (const char* n : {"A", "B"}) {
      auto a = mf.algebra(n);
      auto back = parse(print_algebra(*a)).algebra(n);
      REQUIRE(back);
      CHECK(back->tables == a->tables);
      CHECK(back->down == a->down);
      CHECK(back->elems == a->elems);
    }
    auto again = parse(print_algebra(*mf.algebra("A")) + print_algebra(*mf.algebra("B")) + print_hom(*mf.hom("G")));
    REQUIRE(again.hom("G"));
    CHECK(*again.hom("G") == *mf.hom("G"));
    RlTheory one = testutil::rl("rl theory t\n ops c/0 f/1\n vars x\n rule f(x) => c\n");
    for (const auto& m : all_preorder_models(one, 2)) {
      auto back = parse(print_preorder(*m)).preorder(m->name);
      REQUIRE(back);
      CHECK(back->down == m->down);
      CHECK(back->ops == m->ops);
    }
  }

  TEST_CASE("malformed model text reports a position") {
    CHECK_THROWS_AS(parse("algebra A\n carrier bot\n bottom nowhere\nend\n"), TheoryError);
    CHECK_THROWS_AS(parse("algebra A\n functions f/0\n carrier bot\n bottom bot\n"), TheoryError);
  }
}

TEST_SUITE("model_lab preorders") {
  TEST_CASE("rule satisfaction in small preorders") {
    RlTheory th = testutil::rl("rl theory t\n ops c/0\n vars x\n rule x => c\n rule x => c if x => c\n");
    auto one = parse("preorder P\n ops c/0\n carrier p\n op c = p\nend\n").preorder("P");
    REQUIRE(one);
    CHECK(preorder_satisfies(*one, th.rules[0]));
    auto two = parse("preorder Q\n ops c/0\n carrier p q\n op c = p\nend\n").preorder("Q");
    REQUIRE(two);
    CHECK_FALSE(preorder_satisfies(*two, th.rules[0]));
    RlTheory vac = testutil::rl("rl theory t\n ops c/0 d/0\n vars x\n rule x => c if d => x /\\ x => d /\\ c => d\n");
    auto dq = parse("preorder D\n ops c/0 d/0\n carrier p q\n op c = p\n op d = q\nend\n").preorder("D");
    REQUIRE(dq);
    CHECK(preorder_satisfies(*dq, vac.rules[0]));
  }

  TEST_CASE("the collapsing theory has only one-point models") {
    RlTheory th = std::get<RlTheory>(load_theory_file(testutil::corpus("sec3_6/one_point.rl")));
    std::size_t n = 0;
    enumerate_preorder_models(th, 4, [&](const PreorderRlModel& m) {
      ++n;
      CHECK(m.size() == 1);
      return true;
    });
    CHECK(n >= 1);
  }

  TEST_CASE("property: preorder equalizers") {
    RlTheory th = std::get<RlTheory>(load_theory_file(testutil::corpus("rl_suite/diamond.rl")));
    auto models = all_preorder_models(th, 3);
    REQUIRE(!models.empty());
    std::mt19937 g(31);
    int pairs = 0;
    for (int i = 0; i < 80 && pairs < 15; ++i) {
      const auto& a = models[g() % models.size()];
      const auto& b = models[g() % models.size()];
      auto homs = enumerate_preorder_homs(a, b);
      if (homs.empty()) continue;
      ++pairs;
      const auto& F = homs[g() % homs.size()];
      auto same = preorder_equalizer(F, F, th, 2);
      CHECK(same.ok());
      CHECK(same.object->size() == a->size());
      const auto& G = homs[g() % homs.size()];
      auto e = preorder_equalizer(F, G, th, 2);
      CHECK(e.ok());
      // the carrier is closed under every operation
      for (const auto& s : th.sig.operators.symbols())
        if (s.arity == 1)
          for (Elem x : e.inclusion.map) {
            Elem y = a->op(s.name, {x});
            CHECK(F.map[y] == G.map[y]);
          }
    }
    CHECK(pairs > 5);
  }
}
