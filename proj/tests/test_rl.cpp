#include <doctest.h>

#include "rwl/rl.hpp"
#include "util.hpp"

using namespace rwl;
using testutil::budget;

namespace {

Term T(const std::string& s) { return parse_term(s, {"x", "y", "z"}); }

std::shared_ptr<rl::Derivation> node(rl::Rule r, Term l, Term rhs, std::vector<rl::DerivRef> ps = {}) {
  auto d = std::make_shared<rl::Derivation>();
  d->rule = r;
  d->lhs = std::move(l);
  d->rhs = std::move(rhs);
  d->premises = std::move(ps);
  return d;
}

}  // namespace

TEST_SUITE("rl_engine") {
  TEST_CASE("equality probes") {
    rl::Equations none;
    CHECK(rl::eq_equal(none, T("f(a)"), T("f(a)"), budget(4)).verdict == rl::Verdict::equal);

    rl::Equations unit = {{T("plus(x,zero)"), T("x")}};
    auto p = rl::eq_equal(unit, T("plus(zero,zero)"), T("zero"), budget(4));
    REQUIRE(p.verdict == rl::Verdict::equal);
    CHECK(rl::replay_trace(unit, p.lhs, p.trace, p.rhs));

    rl::Equations collapse = {{T("x"), T("c")}};
    CHECK(rl::eq_equal(collapse, T("h(c)"), T("c"), budget(4)).verdict == rl::Verdict::equal);
  }

  TEST_CASE("property: equality probes are reflexive and symmetric") {
    rl::Equations E = {{T("p(x,y)"), T("p(y,x)")}, {T("f(f(x))"), T("f(x)")}};
    std::mt19937 g(13);
    const std::vector<std::pair<std::string, int>> ops = {{"a", 0}, {"b", 0}, {"f", 1}, {"p", 2}};
    int equal = 0;
    for (int i = 0; i < 150; ++i) {
      Term t = testutil::random_term(g, ops, {}, 3), u = testutil::random_term(g, ops, {}, 3);
      CHECK(rl::eq_equal(E, t, t, budget(1, 8, 10)).verdict == rl::Verdict::equal);
      auto fwd = rl::eq_equal(E, t, u, budget(4, 8, 5000));
      auto bwd = rl::eq_equal(E, u, t, budget(4, 8, 5000));
      CHECK(fwd.verdict == bwd.verdict);
      equal += fwd.verdict == rl::Verdict::equal;
    }
    // samples from the class are all equal to the seed term
    for (int i = 0; i < 30; ++i) {
      Term t = testutil::random_term(g, ops, {}, 3);
      for (const auto& m : rl::eq_class_sample(E, t, {T("a"), T("b")}, 8, 4))
        CHECK(rl::eq_equal(E, t, m, budget(6, 8, 20000)).verdict == rl::Verdict::equal);
    }
    CHECK(equal > 0);
  }

  TEST_CASE("rewrite proofs: reflexivity, two steps, congruence") {
    RlTheory th = testutil::rl("rl theory t\n ops a/0 b/0 c/0 f/1\n rule a => b\n rule b => c\n");
    auto refl = rl::prove_rewrite(th, T("f(a)"), T("f(a)"), budget(1));
    REQUIRE(refl.proved());
    CHECK(refl.derivation->rule == rl::Rule::Reflexivity);

    auto two = rl::prove_rewrite(th, T("a"), T("c"), budget(4));
    REQUIRE(two.proved());
    CHECK(two.derivation->rule == rl::Rule::Transitivity);
    CHECK(rl::check_derivation(th, *two.derivation).ok);

    auto cong = rl::prove_rewrite(th, T("f(a)"), T("f(b)"), budget(4));
    REQUIRE(cong.proved());
    CHECK(cong.derivation->rule == rl::Rule::Congruence);
    REQUIRE(cong.derivation->premises.size() == 1);
    CHECK(cong.derivation->premises[0]->rule == rl::Rule::Replacement);
  }

  TEST_CASE("conditional sentences") {
    RlTheory th = testutil::rl("rl theory t\n ops c/0 a/1 h/1 k/1\n vars x\n rule h(x) => k(x)\n");
    auto refl = rl::prove(th, parse_statement(th, "a(x) => a(x) if h(x) => c"), budget(4));
    CHECK(refl.proved());
    auto hyp = rl::prove(th, parse_statement(th, "c => h(c) if c => h(c)"), budget(4));
    CHECK(hyp.proved());
    auto chain = rl::prove(th, parse_statement(th, "c => k(c) if c => h(c)"), budget(4));
    REQUIRE(chain.proved());
    CHECK(rl::check_derivation(th, *chain.derivation).ok);
    CHECK_FALSE(rl::prove(th, parse_statement(th, "c => h(c) if c => k(c)"), budget(6)).proved());
  }

  TEST_CASE("checker rejects conditions instantiated with the wrong substitution") {
    RlTheory th = testutil::rl("rl theory t\n ops a/0 b/0 h/1 k/1\n vars x\n rule h(x) => k(x) if x => b\n rule a => b\n");
    auto ab = [&] {
      auto d = node(rl::Rule::Replacement, T("a"), T("b"));
      d->rule_index = 1;
      d->w = Substitution{};
      d->w_prime = Substitution{};
      return d;
    };
    auto root = [&](rl::DerivRef cond) {
      auto d = node(rl::Rule::Replacement, T("h(a)"), T("k(b)"), {ab(), std::move(cond)});
      d->rule_index = 0;
      Substitution w, wp;
      w.mapping = {{"x", T("a")}};
      wp.mapping = {{"x", T("b")}};
      d->w = w;
      d->w_prime = wp;
      return d;
    };
    CHECK(rl::check_derivation(th, *root(ab())).ok);
    CHECK_FALSE(rl::check_derivation(th, *root(node(rl::Rule::Reflexivity, T("b"), T("b")))).ok);
  }

  TEST_CASE("checker replays equality traces") {
    RlTheory th = testutil::rl("rl theory t\n ops zero/0 s/1 plus/2\n vars x\n eq plus(x,zero) = x\n");
    auto make = [&](Term result) {
      auto d = node(rl::Rule::EqualityStep, T("plus(zero,zero)"), T("zero"));
      rl::EqStep st;
      st.equation = 0;
      st.left_to_right = true;
      st.subst.mapping = {{"x", T("zero")}};
      st.result = std::move(result);
      d->trace_lhs = {st};
      return d;
    };
    CHECK(rl::check_derivation(th, *make(T("zero"))).ok);
    CHECK_FALSE(rl::check_derivation(th, *make(T("s(zero)"))).ok);
  }

  TEST_CASE("property: suite derivations check and round-trip through json") {
    int n = 0;
    for (const char* f : {"rl_suite/chain.rl", "rl_suite/commutative.rl", "rl_suite/times_zero.rl", "rl_suite/implication.rl",
                          "rl_suite/guarded.rl", "rl_suite/swap.rl"}) {
      RlTheory th = std::get<RlTheory>(load_theory_file(testutil::corpus(f)));
      for (const auto& g : th.goals) {
        auto res = rl::prove(th, g, budget(8, 8, 300000));
        if (!res.proved()) continue;
        ++n;
        CHECK(rl::check_derivation(th, *res.derivation).ok);
        auto j = rl::to_json(*res.derivation);
        auto back = rl::derivation_from_json(nlohmann::json::parse(j.dump()), th);
        CHECK(rl::to_json(*back) == j);
      }
    }
    CHECK(n >= 15);
  }

  TEST_CASE("property: larger budgets keep proved goals proved") {
    for (const char* f : {"rl_suite/chain.rl", "rl_suite/diamond.rl", "rl_suite/times_zero.rl"}) {
      RlTheory th = std::get<RlTheory>(load_theory_file(testutil::corpus(f)));
      for (const auto& g : th.goals) {
        if (!rl::prove(th, g, budget(6, 8, 100000)).proved()) continue;
        CHECK(rl::prove(th, g, budget(9, 9, 400000)).proved());
      }
    }
  }

  TEST_CASE("property: an unused constant changes no verdict") {
    for (const char* f : {"rl_suite/chain.rl", "rl_suite/right_unit.rl", "rl_suite/pairs.rl", "rl_suite/implication.rl"}) {
      RlTheory th = std::get<RlTheory>(load_theory_file(testutil::corpus(f)));
      RlTheory wide = th;
      wide.sig.operators.add({"spare", 0});
      for (const auto& g : th.goals)
        CHECK(rl::prove(th, g, budget(7, 8, 200000)).proved() == rl::prove(wide, g, budget(7, 8, 200000)).proved());
    }
  }

  TEST_CASE("a cut lemma adds nothing the base theory cannot prove") {
    RlTheory th = testutil::rl("rl theory t\n ops a/0 b/0 c/0 f/1\n vars x\n rule a => b\n rule f(b) => c\n");
    Statement phi = parse_statement(th, "a => b");
    Statement psi = parse_statement(th, "f(a) => c");
    RlTheory with = th;
    with.rules.push_back(phi.as_rule());
    REQUIRE(rl::prove(th, phi, budget(4)).proved());
    REQUIRE(rl::prove(with, psi, budget(4)).proved());
    CHECK(rl::prove(th, psi, budget(8)).proved());
  }
}
