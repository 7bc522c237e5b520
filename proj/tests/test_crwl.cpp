#include <doctest.h>

#include "rwl/crwl.hpp"
#include "util.hpp"

using namespace rwl;
using testutil::budget;

namespace {

const char* kNonTransitive =
    "crwl theory nt\n constructors d/0\n functions c/0 h/1\n vars x\n"
    " rule c -> h(c)\n rule h(x) -> h(d) <= x >< x\n";

Statement goal(const CrwlTheory& th, const std::string& s) { return parse_statement(th, s); }

crwl::DerivRef leaf(crwl::Rule r, Statement s) {
  auto d = std::make_shared<crwl::Derivation>();
  d->rule = r;
  d->conclusion = std::move(s);
  return d;
}

}  // namespace

TEST_SUITE("crwl_engine") {
  TEST_CASE("the two-rule theory gives proved, proved with the lemma, exhausted without") {
    CrwlTheory th = testutil::crwl(kNonTransitive);
    auto r1 = crwl::prove(th, goal(th, "h(x) -> h(d)"), budget(8));
    CHECK(r1.proved());

    CrwlTheory lemma = th;
    lemma.rules.push_back({parse_term("h(x)", {"x"}), parse_term("h(d)", {}), {}});
    auto r2 = crwl::prove(lemma, goal(th, "c -> h(d)"), budget(10));
    CHECK(r2.proved());

    auto r3 = crwl::prove(th, goal(th, "c -> h(d)"), budget(12, 8, 1000000));
    CHECK_FALSE(r3.proved());
    CHECK_FALSE(r3.stats.node_limit_hit);
  }

  TEST_CASE("reflexivity and bottom close goals at depth one") {
    CrwlTheory th = testutil::crwl(kNonTransitive);
    auto refl = crwl::prove(th, goal(th, "h(c) -> h(c)"), budget(1));
    REQUIRE(refl.proved());
    CHECK(refl.derivation->rule == crwl::Rule::Reflexivity);
    auto bot = crwl::prove(th, goal(th, "h(c) -> bot"), budget(1));
    REQUIRE(bot.proved());
    CHECK(bot.derivation->rule == crwl::Rule::Bottom);
  }

  TEST_CASE("checker rejects an instantiation outside the partial terms") {
    CrwlTheory th = testutil::crwl("crwl theory t\n constructors d/0\n functions c/0 h/1\n vars x\n rule h(x) -> h(d)\n");
    auto make = [&](const Term& img) {
      auto d = std::make_shared<crwl::Derivation>();
      d->rule = crwl::Rule::Reduction;
      d->rule_index = 0;
      Substitution s;
      s.mapping = {{"x", img}};
      d->instantiation = s;
      d->conclusion = Statement::reduction(Term::app("h", {img}), parse_term("h(d)", {}));
      return d;
    };
    CHECK(crwl::check_derivation(th, *make(bottom())).ok);
    auto bad = crwl::check_derivation(th, *make(Term::app("c")));
    CHECK_FALSE(bad.ok);
    CHECK(bad.message.find("theta range not a partial term") != std::string::npos);
  }

  TEST_CASE("checker rejects a join through bottom") {
    CrwlTheory th = testutil::crwl("crwl theory t\n constructors a/0\n");
    Term a = Term::app("a");
    auto d = std::make_shared<crwl::Derivation>();
    d->rule = crwl::Rule::Join;
    d->witness = bottom();
    d->conclusion = Statement::joinability(a, a);
    d->premises = {leaf(crwl::Rule::Bottom, Statement::reduction(a, bottom())),
                   leaf(crwl::Rule::Bottom, Statement::reduction(a, bottom()))};
    auto rep = crwl::check_derivation(th, *d);
    CHECK_FALSE(rep.ok);
    CHECK(rep.message == "witness not total");

    d->witness = a;
    d->premises = {leaf(crwl::Rule::Reflexivity, Statement::reduction(a, a)),
                   leaf(crwl::Rule::Reflexivity, Statement::reduction(a, a))};
    CHECK(crwl::check_derivation(th, *d).ok);
  }

  TEST_CASE("property: proved goals over the suite carry checkable derivations") {
    std::mt19937 g(21);
    int proved = 0;
    for (const char* f : {"crwl_suite/coin.crwl", "crwl_suite/guarded.crwl", "crwl_suite/sharing.crwl",
                          "crwl_suite/double.crwl", "crwl_suite/undefined.crwl", "sec3_6/theory.crwl"}) {
      CrwlTheory th = std::get<CrwlTheory>(load_theory_file(testutil::corpus(f)));
      std::vector<std::pair<std::string, int>> ops = {{"bot", 0}};
      for (const auto& s : th.sig.symbols()) ops.push_back({s.name, s.arity});
      for (int i = 0; i < 40; ++i) {
        Term l = testutil::random_term(g, ops, {}, 3), r = testutil::random_term(g, ops, {}, 3);
        Statement s = i % 3 ? Statement::reduction(l, r) : Statement::joinability(l, r);
        auto res = crwl::prove(th, s, budget(6, 6, 20000));
        if (!res.proved()) continue;
        ++proved;
        auto rep = crwl::check_derivation(th, *res.derivation);
        CHECK_MESSAGE(rep.ok, print_statement(s), ": ", rep.message);
        CHECK(res.derivation->conclusion == s);
      }
    }
    CHECK(proved > 20);
  }

  TEST_CASE("property: larger budgets and more axioms keep proved goals proved") {
    for (const char* f : {"crwl_suite/coin.crwl", "crwl_suite/guarded.crwl", "crwl_suite/addition.crwl", "crwl_suite/sharing.crwl"}) {
      CrwlTheory th = std::get<CrwlTheory>(load_theory_file(testutil::corpus(f)));
      CrwlTheory more = th;
      more.rules.push_back(th.rules.front());
      more.sig.add_function("spare", 0);
      more.rules.push_back({Term::app("spare"), th.rules.front().lhs, {}});
      for (const auto& g : th.goals) {
        auto base = crwl::prove(th, g, budget(8, 8, 200000));
        if (!base.proved()) continue;
        CHECK(crwl::prove(th, g, budget(10, 8, 400000)).proved());
        CHECK(crwl::prove(more, g, budget(8, 8, 1000000)).proved());
      }
    }
  }

  TEST_CASE("derivations survive a json round trip") {
    CrwlTheory th = std::get<CrwlTheory>(load_theory_file(testutil::corpus("crwl_suite/guarded.crwl")));
    int n = 0;
    for (const auto& g : th.goals) {
      auto res = crwl::prove(th, g, budget(8));
      if (!res.proved()) continue;
      ++n;
      auto j = crwl::to_json(*res.derivation, th);
      auto back = crwl::derivation_from_json(nlohmann::json::parse(j.dump()), th);
      CHECK(crwl::to_json(*back, th) == j);
      CHECK(crwl::check_derivation(th, *back).ok);
    }
    CHECK(n > 0);
  }
}
