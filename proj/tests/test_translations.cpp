#include <doctest.h>

#include <algorithm>

#include "rwl/crwl.hpp"
#include "rwl/rl.hpp"
#include "rwl/translations.hpp"
#include "util.hpp"

using namespace rwl;
using testutil::budget;

namespace {

bool has_rule(const std::vector<std::string>& printed, const std::string& r) {
  return std::find(printed.begin(), printed.end(), r) != printed.end();
}

std::vector<std::string> printed(const RlTheory& t) {
  std::vector<std::string> out;
  for (const auto& r : t.rules) out.push_back(print_rule(r));
  return out;
}
std::vector<std::string> printed(const CrwlTheory& t) {
  std::vector<std::string> out;
  for (const auto& r : t.rules) out.push_back(print_rule(r));
  return out;
}

CrwlTheory load_crwl(const char* f) { return std::get<CrwlTheory>(load_theory_file(testutil::corpus(f))); }
RlTheory load_rl(const char* f) { return std::get<RlTheory>(load_theory_file(testutil::corpus(f))); }

// Partial constructor terms over `ctors` (bot included) with at most max_size nodes.
std::vector<Term> partial_terms(const std::vector<Symbol>& ctors, int max_size) {
  std::vector<std::vector<Term>> by(max_size + 1);
  by[1].push_back(bottom());
  for (int n = 1; n <= max_size; ++n)
    for (const auto& c : ctors) {
      if (c.arity == 0) {
        if (n == 1) by[1].push_back(Term::app(c.name));
        continue;
      }
      if (c.arity == 1 && n >= 2)
        for (const auto& a : by[n - 1]) by[n].push_back(Term::app(c.name, {a}));
      if (c.arity == 2 && n >= 3)
        for (int k = 1; k <= n - 2; ++k)
          for (const auto& a : by[k])
            for (const auto& b : by[n - 1 - k]) by[n].push_back(Term::app(c.name, {a, b}));
    }
  std::vector<Term> out;
  for (const auto& v : by) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace

TEST_SUITE("translations") {
  TEST_CASE("alpha always has pterm(bot) => true") {
    for (const char* f : {"naturals/naturals.crwl", "crwl_suite/coin.crwl", "sec2_5/base.crwl"})
      CHECK(has_rule(printed(translate::alpha(load_crwl(f)).theory), "pterm(bot) => true"));
  }

  TEST_CASE("alpha of the empty theory with one object variable") {
    CrwlTheory empty = testutil::crwl("crwl theory empty\n");
    auto a = translate::alpha(empty, {"v1"});
    auto rules = printed(a.theory);
    for (const char* r : {"pterm(v1) => true", "tterm(v1) => true", "pexpr(v1) => true"}) CHECK(has_rule(rules, r));
    CHECK(std::none_of(a.provenance.begin(), a.provenance.end(),
                       [](const std::string& p) { return p.rfind("axiom", 0) == 0; }));
    CHECK(a.provenance.size() == a.theory.rules.size());
  }

  TEST_CASE("naturals: pexpr(0+0) rewrites to true, pterm(0+0) does not") {
    auto a = translate::alpha(load_crwl("naturals/naturals.crwl"));
    Term sum = parse_term("plus(zero,zero)", {});
    CHECK(rl::prove(a.theory, Statement::rewrite(Term::app(kPexprName, {sum}), Term::app(kTrueName)), budget(6)).proved());
    CHECK_FALSE(rl::prove(a.theory, Statement::rewrite(Term::app(kPtermName, {sum}), Term::app(kTrueName)), budget(10)).proved());
  }

  TEST_CASE("beta: reflexivity rule, linearised equations, ground rules") {
    auto b1 = printed(translate::beta(load_rl("rl_suite/times_zero.rl")).theory);
    CHECK(has_rule(b1, "R(x1,x2) -> true <= x1 >< x2"));
    CHECK(has_rule(b1, "R(times(x,zero),zero) -> true <= x >< x"));
    auto b2 = printed(translate::beta(testutil::rl("rl theory t\n ops c/0 h/1\n rule c => h(c)\n")).theory);
    CHECK(has_rule(b2, "R(c,h(c)) -> true"));
  }

  TEST_CASE("goal encodings") {
    CrwlTheory th = load_crwl("sec2_5/base.crwl");
    Statement red = parse_statement(th, "c -> h(d)");
    CHECK(print_statement(translate::encode_goal_alpha(red)) == "R(c,h(d)) => true");
    Statement j = parse_statement(th, "c >< h(d)");
    CHECK(print_statement(translate::encode_goal_alpha(j)) == "join(c,h(d)) => true");
    auto a = translate::alpha(th);
    CHECK(translate::decode_goal_alpha(translate::encode_goal_alpha(red), a) == red);
    CHECK(translate::decode_goal_alpha(translate::encode_goal_alpha(j), a) == j);

    Statement rw = Statement::rewrite(Term::app("a"), Term::app("b"));
    CHECK(print_statement(translate::encode_goal_beta(rw)) == "R(a,b) -> true");
    CHECK(translate::decode_goal_beta(translate::encode_goal_beta(rw)) == rw);
  }

  TEST_CASE("property: goal encodings round-trip on every suite goal") {
    for (const auto& e : std::filesystem::directory_iterator(testutil::corpus("crwl_suite"))) {
      CrwlTheory th = std::get<CrwlTheory>(load_theory_file(e.path().string()));
      auto a = translate::alpha(th);
      for (const auto& g : th.goals) CHECK(translate::decode_goal_alpha(translate::encode_goal_alpha(g), a) == g);
    }
    for (const auto& e : std::filesystem::directory_iterator(testutil::corpus("rl_suite"))) {
      RlTheory th = std::get<RlTheory>(load_theory_file(e.path().string()));
      for (const auto& g : th.goals)
        if (g.kind == StatementKind::rl_rewrite) CHECK(translate::decode_goal_beta(translate::encode_goal_beta(g)) == g);
    }
  }

  TEST_CASE("property: translated theories re-parse to themselves") {
    for (const auto& e : std::filesystem::directory_iterator(testutil::corpus("crwl_suite"))) {
      Theory out = translate::alpha(std::get<CrwlTheory>(load_theory_file(e.path().string()))).theory;
      std::string text = print_theory(out);
      CHECK(print_theory(parse_theory(text)) == text);
    }
    for (const auto& e : std::filesystem::directory_iterator(testutil::corpus("rl_suite"))) {
      Theory out = translate::beta(std::get<RlTheory>(load_theory_file(e.path().string()))).theory;
      std::string text = print_theory(out);
      CHECK(print_theory(parse_theory(text)) == text);
    }
  }

  TEST_CASE("property: alpha proves no rewrite between distinct object expressions") {
    // rewrites of embedded partial expressions only ever go through R, never directly
    for (const char* f : {"naturals/naturals.crwl", "crwl_suite/coin.crwl"}) {
      CrwlTheory th = load_crwl(f);
      auto a = translate::alpha(th);
      std::vector<Symbol> syms = th.sig.symbols();
      for (const auto& v : a.var_pool) syms.push_back({v, 0, SymbolKind::constructor});
      std::vector<Term> exprs;
      for (const auto& t : partial_terms(syms, 3))
        if (classify_expression(th.sig, translate::alpha_unembed(t, a).value_or(Term::app("?"))) != ExprClass::ill_formed)
          exprs.push_back(t);
      REQUIRE(exprs.size() >= 4);
      int probes = 0;
      for (const auto& e : exprs)
        for (const auto& e2 : exprs) {
          if (++probes % 3) continue;  // a third of the pairs keeps this quick
          auto res = rl::prove(a.theory, Statement::rewrite(e, e2), budget(5, 6, 5000));
          if (res.proved()) CHECK_MESSAGE(e == e2, print_term(e), " => ", print_term(e2));
        }
    }
  }

  TEST_CASE("property: equal terms modulo E are related both ways by beta") {
    for (const char* f : {"rl_suite/times_zero.rl", "rl_suite/commutative.rl", "rl_suite/idempotent.rl"}) {
      RlTheory th = load_rl(f);
      auto b = translate::beta(th);
      std::vector<Term> consts;
      for (const auto& s : th.sig.operators.symbols())
        if (s.arity == 0) consts.push_back(Term::app(s.name));
      int pairs = 0;
      for (const auto& g : th.goals) {
        if (g.kind != StatementKind::rl_rewrite) continue;
        for (const auto& t2 : rl::eq_class_sample(th.sig.equations, g.lhs, consts, 6, 3)) {
          if (rl::eq_equal(th.sig.equations, g.lhs, t2, budget(6)).verdict != rl::Verdict::equal) continue;
          ++pairs;
          for (const auto& [x, y] : {std::pair{g.lhs, t2}, std::pair{t2, g.lhs}}) {
            auto res = crwl::prove(b.theory, translate::encode_goal_beta(Statement::rewrite(x, y)), budget(10, 8, 300000));
            CHECK_MESSAGE(res.proved(), print_term(x), " = ", print_term(y));
          }
        }
      }
      CHECK(pairs > 0);
    }
  }

  TEST_CASE("property: beta joins partial terms only when they are the same total term") {
    for (const char* f : {"rl_suite/chain.rl", "rl_suite/times_zero.rl", "rl_suite/swap.rl"}) {
      auto b = translate::beta(load_rl(f));
      auto terms = partial_terms(b.theory.sig.constructors(), 3);
      int joined = 0;
      for (const auto& t : terms)
        for (const auto& u : terms) {
          auto res = crwl::prove(b.theory, Statement::joinability(t, u), budget(4, 6, 5000));
          if (!res.proved()) continue;
          ++joined;
          CHECK(is_total_term(b.theory.sig, t));
          CHECK(t == u);
        }
      CHECK(joined > 0);
    }
  }
}
