#include <doctest.h>

#include "util.hpp"

using namespace rwl;
using testutil::crwl;
using testutil::random_term;

namespace {
Term T(const std::string& s, std::set<std::string> vars = {"x", "y", "z"}) { return parse_term(s, vars); }
}

TEST_SUITE("term_core") {
  TEST_CASE("crwl rule parses into head, args and no conditions") {
    auto th = crwl("crwl theory t\n constructors z/0 s/1\n functions plus/2\n vars Y\n rule plus(z,Y) -> Y\n");
    REQUIRE(th.rules.size() == 1);
    CHECK(th.rules[0].lhs_head() == "plus");
    CHECK(th.rules[0].conditions.empty());
    CHECK(th.rules[0].rhs == Term::var("Y"));
  }

  TEST_CASE("non-left-linear crwl lhs is rejected") {
    CHECK_THROWS_WITH_AS(crwl("crwl theory t\n functions f/2\n vars X\n rule f(X,X) -> X\n"),
                         doctest::Contains("non-left-linear"), TheoryError);
  }

  TEST_CASE("labeled rl rule keeps its label") {
    auto th = testutil::rl("rl theory t\n ops c/0 h/1\n rule [r1] c => h(c)\n");
    REQUIRE(th.rules.size() == 1);
    CHECK(th.rules[0].label == std::optional<std::string>("r1"));
    CHECK(th.rules[0].rhs == T("h(c)"));
  }

  TEST_CASE("parse errors carry a position") {
    try {
      crwl("crwl theory t\n functions f/1\n rule f(a -> a\n");
      FAIL("expected a parse error");
    } catch (const TheoryError& e) {
      CHECK(e.line() == 3);
    }
  }

  TEST_CASE("classification of expressions") {
    CrwlSignature sig;
    sig.add_constructor("z", 0);
    sig.add_constructor("s", 1);
    sig.add_function("plus", 2);
    CHECK(classify_expression(sig, Term::var("x")) == ExprClass::total_term);
    CHECK(classify_expression(sig, bottom()) == ExprClass::partial_term);
    CHECK(classify_expression(sig, T("plus(z,z)")) == ExprClass::total_expression);
    CHECK(classify_expression(sig, Term::app("plus", {bottom(), Term::app("z")})) == ExprClass::partial_expression);
    CHECK(classify_expression(sig, T("s(s(z))")) == ExprClass::total_term);
    CHECK(classify_expression(sig, T("s(z,z)")) == ExprClass::ill_formed);
    CHECK(classify_expression(sig, T("q")) == ExprClass::ill_formed);
  }

  TEST_CASE("substitution is simultaneous") {
    Substitution s;
    s.mapping = {{"x", T("h(d)")}};
    CHECK(apply_substitution(T("x"), s) == T("h(d)"));
    CHECK(apply_substitution(T("h(x)"), Substitution{}) == T("h(x)"));
    Substitution swap;
    swap.mapping = {{"x", T("y")}, {"y", T("x")}};
    CHECK(apply_substitution(T("f(x,y)"), swap) == T("f(y,x)"));
  }

  TEST_CASE("property: applying a composed substitution equals applying both in turn") {
    std::mt19937 g(7);
    const std::vector<std::pair<std::string, int>> ops = {{"a", 0}, {"b", 0}, {"f", 1}, {"p", 2}};
    for (int i = 0; i < 300; ++i) {
      Term t = random_term(g, ops, {"x", "y", "z"}, 4);
      Substitution s1, s2;
      s1.mapping = {{"x", random_term(g, ops, {"y", "z"}, 3)}};
      s2.mapping = {{"y", random_term(g, ops, {"z"}, 3)}, {"z", random_term(g, ops, {}, 2)}};
      CHECK(apply_substitution(apply_substitution(t, s1), s2) == apply_substitution(t, compose(s1, s2)));
    }
  }

  TEST_CASE("matching binds pattern variables only") {
    Substitution s;
    CHECK(match(T("f(x,b)"), T("f(g(a),b)"), s));
    CHECK(*s.find("x") == T("g(a)"));
    Substitution s2;
    CHECK_FALSE(match(T("f(x,x)"), T("f(a,b)"), s2));
    Substitution s3;
    CHECK_FALSE(match(T("f(a)"), T("f(x)"), s3));
  }

  TEST_CASE("positions and replacement") {
    Term t = T("p(f(a),b)");
    std::vector<Path> ps;
    collect_positions(t, ps);
    CHECK(ps.size() == 4);
    CHECK(subterm_at(t, {0, 0}) == T("a"));
    CHECK(replace_at(t, {1}, T("f(b)")) == T("p(f(a),f(b))"));
  }

  TEST_CASE("printing and parsing terms round-trip") {
    std::mt19937 g(11);
    const std::vector<std::pair<std::string, int>> ops = {{"a", 0}, {"f", 1}, {"p", 2}, {"q", 3}};
    for (int i = 0; i < 200; ++i) {
      Term t = random_term(g, ops, {"x", "y"}, 4);
      CHECK(T(print_term(t), {"x", "y"}) == t);
    }
  }

  TEST_CASE("linearisation of repeated and single variables") {
    CrwlRule r{T("R(x,x)"), Term::app("true"), {}};
    CrwlRule lin = linearise_rule(r);
    CHECK(is_left_linear(lin));
    REQUIRE(lin.lhs.args().size() == 2);
    CHECK(lin.lhs.args()[0] == T("x"));
    CHECK(lin.lhs.args()[1] != T("x"));
    CHECK(std::find(lin.conditions.begin(), lin.conditions.end(), Condition{T("x"), lin.lhs.args()[1]}) !=
          lin.conditions.end());

    CrwlRule once{T("R(x,z)"), Term::app("true"), {}};
    CrwlRule lo = linearise_rule(once);
    CHECK(lo.lhs == once.lhs);
    CHECK(lo.conditions == std::vector<Condition>{{T("x"), T("x")}, {T("z"), T("z")}});

    CrwlRule ground{T("c"), T("d"), {}};
    CHECK(linearise_rule(ground) == ground);
  }

  TEST_CASE("property: linearisation yields left-linear rules and is idempotent") {
    std::mt19937 g(3);
    const std::vector<std::pair<std::string, int>> ctors = {{"a", 0}, {"s", 1}, {"c", 2}};
    for (int i = 0; i < 200; ++i) {
      std::vector<Term> args;
      for (int k = 0; k < 3; ++k) args.push_back(random_term(g, ctors, {"x", "y"}, 3));
      CrwlRule r{Term::app("f", args), random_term(g, ctors, {"x", "y"}, 2), {}};
      CrwlRule once = linearise_rule(r);
      CHECK(is_left_linear(once));
      CHECK(linearise_rule(once) == once);
    }
  }

  TEST_CASE("property: classification is stable under signature extension") {
    CrwlSignature small, big;
    for (auto* s : {&small, &big}) {
      s->add_constructor("z", 0);
      s->add_constructor("s", 1);
      s->add_function("f", 1);
    }
    big.add_constructor("c", 2);
    big.add_function("g", 0);
    std::mt19937 g(5);
    const std::vector<std::pair<std::string, int>> ops = {{"z", 0}, {"s", 1}, {"f", 1}, {"bot", 0}, {"c", 2}};
    int compared = 0;
    for (int i = 0; i < 500; ++i) {
      Term t = random_term(g, ops, {"x"}, 4);
      ExprClass c = classify_expression(small, t);
      if (c == ExprClass::ill_formed) continue;
      ++compared;
      CHECK(classify_expression(big, t) == c);
    }
    CHECK(compared > 50);
  }

  TEST_CASE("signature morphisms translate sentences") {
    CrwlSignature src, tgt;
    src.add_constructor("c", 0);
    src.add_function("e", 0);
    tgt.add_constructor("c1", 0);
    tgt.add_function("e1", 0);
    SignatureMorphism m{src, tgt, {{"c", "c1"}}, {{"e", "e1"}}};
    m.validate();
    CHECK(translate_sentence(m, Statement::reduction(T("c"), T("c"))) == Statement::reduction(T("c1"), T("c1")));
    CHECK(translate_sentence(m, Statement::reduction(T("e"), bottom())) == Statement::reduction(T("e1"), bottom()));
    CrwlRule r{T("e"), T("c"), {{T("e"), T("c")}}};
    CHECK(translate_sentence(identity_morphism(src), r) == r);

    SignatureMorphism bad{src, tgt, {{"c", "e1"}}, {{"e", "e1"}}};
    CHECK_THROWS_AS(bad.validate(), TheoryError);
  }

  TEST_CASE("property: translation along a composite equals translating twice") {
    CrwlSignature a, b, c;
    a.add_constructor("z", 0);
    a.add_constructor("w", 0);
    a.add_constructor("s", 1);
    a.add_function("f", 1);
    a.add_function("g", 1);
    b.add_constructor("z1", 0);
    b.add_constructor("s1", 1);
    b.add_function("h", 1);
    c.add_constructor("z2", 0);
    c.add_constructor("s2", 1);
    c.add_function("k", 1);
    SignatureMorphism m1{a, b, {{"z", "z1"}, {"w", "z1"}, {"s", "s1"}}, {{"f", "h"}, {"g", "h"}}};
    SignatureMorphism m2{b, c, {{"z1", "z2"}, {"s1", "s2"}}, {{"h", "k"}}};
    m1.validate();
    m2.validate();
    auto both = compose(m1, m2);
    std::mt19937 g(9);
    const std::vector<std::pair<std::string, int>> ops = {{"z", 0}, {"w", 0}, {"s", 1}, {"f", 1}, {"g", 1}, {"bot", 0}};
    for (int i = 0; i < 200; ++i) {
      Statement s = Statement::joinability(random_term(g, ops, {"x"}, 4), random_term(g, ops, {"x"}, 4));
      CHECK(translate_sentence(both, s) == translate_sentence(m2, translate_sentence(m1, s)));
    }
  }

  TEST_CASE("theory printing re-parses to the same theory") {
    for (const char* f : {"sec2_5/base.crwl", "crwl_suite/guarded.crwl", "rl_suite/times_zero.rl", "rl_suite/implication.rl"}) {
      Theory th = load_theory_file(testutil::corpus(f));
      Theory again = parse_theory(print_theory(th));
      CHECK(print_theory(again) == print_theory(th));
    }
  }
}
