#include <algorithm>
#include <filesystem>

#include "common.hpp"
#include "rwl/syntax.hpp"

namespace rwl::wb {

using detail::make_budget;
using detail::make_record;

namespace {

std::string stem(const std::string& p) { return std::filesystem::path(p).stem().string(); }

bool all_pass(const std::vector<Record>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const Record& r) { return r.pass; });
}

std::size_t count_pass(const std::vector<Record>& rs) {
  return static_cast<std::size_t>(std::count_if(rs.begin(), rs.end(), [](const Record& r) { return r.pass; }));
}

std::string both(const SearchBudget& a, const SearchBudget& b) {
  return "source " + a.describe() + "; target " + b.describe();
}

}  // namespace

CriterionResult AcceptanceSuite::non_transitivity() {
  CriterionResult r;
  auto base = std::make_shared<const CrwlTheory>(detail::load_crwl(path("sec2_5/base.crwl")));
  auto lemma = std::make_shared<const CrwlTheory>(detail::load_crwl(path("sec2_5/with_lemma.crwl")));
  struct Case {
    std::shared_ptr<const CrwlTheory> th;
    const char* goal;
    int depth;
    bool expect_proved;
  };
  const Case cases[] = {
      {base, "h(x) -> h(d)", 8, true},
      {lemma, "c -> h(d)", 10, true},
      {base, "c -> h(d)", 12, false},
  };
  for (const auto& c : cases) {
    SearchBudget b = make_budget(c.depth, 8, 1000000);
    Statement g = parse_statement(*c.th, c.goal);
    auto res = crwl::prove(*c.th, g, b);
    bool pass = res.proved() == c.expect_proved;
    std::string det = "nodes=" + std::to_string(res.stats.nodes);
    if (res.proved()) {
      auto chk = crwl::check_derivation(*c.th, *res.derivation);
      pass = pass && chk.ok;
      det += " height=" + std::to_string(res.derivation->height()) + (chk.ok ? " checked" : " check failed: " + chk.message);
      log_.crwl.push_back({c.th, res.derivation, "non-transitivity"});
    }
    r.records.push_back(make_record(c.th->name + ": " + print_statement(g), pass, detail::verdict(res), b.describe(), det));
  }
  r.checks_pass = all_pass(r.records);
  r.summary = std::to_string(count_pass(r.records)) + "/3 as expected";
  return r;
}

CriterionResult AcceptanceSuite::alpha_oracle() {
  CriterionResult r;
  const SearchBudget bc = make_budget(10, 8, 1000000);
  const SearchBudget br = make_budget(12, 8, 400000);
  auto files = listing("crwl_suite", ".crwl");
  bool shape_ok = files.size() >= 10;
  std::size_t goals = 0, discrepancies = 0;
  for (const auto& f : files) {
    auto T = std::make_shared<const CrwlTheory>(detail::load_crwl(f));
    bool small = T->rules.size() <= 5 && T->sig.symbols().size() <= 4 && T->goals.size() >= 5;
    if (!small) {
      shape_ok = false;
      r.records.push_back(make_record(stem(f), false, "oversized", "",
                                      "needs <= 5 rules, <= 4 symbols, >= 5 goals"));
    }
    auto a = translate::alpha(*T);
    auto A = std::make_shared<const RlTheory>(a.theory);
    for (const auto& g : T->goals) {
      ++goals;
      auto p = detail::alpha_probe(*T, a, g, bc, br);
      bool pass = p.agree();
      std::string det;
      Statement enc = translate::encode_goal_alpha(g);
      if (!(translate::decode_goal_alpha(enc, a) == g)) {
        pass = false;
        det += "goal encoding does not round-trip; ";
      }
      if (p.source.proved()) {
        auto chk = crwl::check_derivation(*T, *p.source.derivation);
        if (!chk.ok) pass = false, det += "crwl check: " + chk.message + "; ";
        log_.crwl.push_back({T, p.source.derivation, "alpha oracle"});
      }
      if (p.target.proved()) {
        auto chk = rl::check_derivation(*A, *p.target.derivation);
        if (!chk.ok) pass = false, det += "rl check: " + chk.message + "; ";
        log_.rl.push_back({A, p.target.derivation, "alpha oracle"});
      }
      if (!p.agree()) ++discrepancies;
      if (p.reseeded) det += "source reseeded; ";
      det += "nodes " + std::to_string(p.source.stats.nodes) + "/" + std::to_string(p.target.stats.nodes);
      r.records.push_back(make_record(T->name + ": " + print_statement(g), pass,
                                      "crwl " + detail::verdict(p.source) + ", alpha " + detail::verdict(p.target),
                                      both(bc, br), det));
    }
  }
  r.checks_pass = shape_ok && all_pass(r.records);
  r.summary = std::to_string(files.size()) + " theories, " + std::to_string(goals) + " goals, " +
              std::to_string(discrepancies) + " discrepancies";
  return r;
}

CriterionResult AcceptanceSuite::classification() {
  CriterionResult r;
  const SearchBudget b = make_budget(8, 8, 100000);
  const char* files[] = {"naturals/naturals.crwl", "crwl_suite/ident.crwl", "crwl_suite/loop.crwl"};
  std::size_t probes = 0, mismatches = 0;
  for (const char* f : files) {
    CrwlTheory T = detail::load_crwl(path(f));
    auto a = translate::alpha(T);
    auto terms = detail::ground_terms(a.theory.sig.operators.symbols(), 4);
    std::size_t local = 0;
    for (const auto& e : terms) {
      auto obj = translate::alpha_unembed(e, a);
      ExprClass cls = obj ? classify_expression(T.sig, *obj) : ExprClass::ill_formed;
      const std::pair<const char*, bool> preds[] = {
          {kTtermName, cls == ExprClass::total_term},
          {kPtermName, cls == ExprClass::total_term || cls == ExprClass::partial_term},
          {kPexprName, cls != ExprClass::ill_formed},
      };
      for (const auto& [pred, expected] : preds) {
        ++probes;
        Statement g = Statement::rewrite(Term::app(pred, {e}), Term::app(kTrueName));
        auto res = rl::prove(a.theory, g, b);
        if (res.proved() == expected) continue;
        ++mismatches;
        ++local;
        r.records.push_back(make_record(T.name + ": " + print_statement(g), false, detail::verdict(res),
                                        b.describe(), std::string("class ") + to_string(cls)));
      }
    }
    r.records.push_back(make_record(T.name + ": " + std::to_string(terms.size()) + " terms of size <= 4", local == 0,
                                    local == 0 ? "agree" : "disagree", b.describe()));
  }
  r.checks_pass = mismatches == 0;
  r.summary = std::to_string(probes) + " probes, " + std::to_string(mismatches) + " mismatches";
  return r;
}

CriterionResult AcceptanceSuite::naturals() {
  CriterionResult r;
  CrwlTheory T = detail::load_crwl(path("naturals/naturals.crwl"));
  auto a = translate::alpha(T);
  auto A = std::make_shared<const RlTheory>(a.theory);
  Term sum = Term::app("plus", {Term::app("zero"), Term::app("zero")});
  struct Case {
    const char* pred;
    int depth;
    bool expect_proved;
  };
  for (const auto& c : {Case{kPexprName, 6, true}, Case{kPtermName, 10, false}}) {
    SearchBudget b = make_budget(c.depth, 8, 1000000);
    Statement g = Statement::rewrite(Term::app(c.pred, {sum}), Term::app(kTrueName));
    auto res = rl::prove(*A, g, b);
    bool pass = res.proved() == c.expect_proved;
    if (res.proved()) {
      auto chk = rl::check_derivation(*A, *res.derivation);
      pass = pass && chk.ok;
      log_.rl.push_back({A, res.derivation, "naturals"});
    }
    r.records.push_back(make_record(print_statement(g), pass, detail::verdict(res), b.describe(),
                                    "nodes=" + std::to_string(res.stats.nodes)));
  }
  r.checks_pass = all_pass(r.records);
  r.summary = r.checks_pass ? "pexpr proved, pterm exhausted" : "unexpected verdict";
  return r;
}

CriterionResult AcceptanceSuite::beta_oracle() {
  CriterionResult r;
  const SearchBudget br = make_budget(8, 8, 300000);
  const SearchBudget bc = make_budget(12, 8, 300000);
  auto files = listing("rl_suite", ".rl");
  std::size_t with_eqs = 0, goals = 0, reps = 0, discrepancies = 0;
  for (const auto& f : files) {
    auto T = std::make_shared<const RlTheory>(detail::load_rl(f));
    if (!T->sig.equations.empty()) ++with_eqs;
    auto b = translate::beta(*T);
    auto B = std::make_shared<const CrwlTheory>(b.theory);
    std::vector<Term> pool;
    for (const auto& s : T->sig.operators.symbols())
      if (s.arity == 0) pool.push_back(Term::app(s.name));
    for (const auto& g : T->goals) {
      if (g.kind != StatementKind::rl_rewrite) continue;
      ++goals;
      auto p = detail::beta_probe(*T, b, g, br, bc);
      bool pass = p.agree();
      std::string det;
      if (!(translate::decode_goal_beta(translate::encode_goal_beta(g)) == g)) {
        pass = false;
        det += "goal encoding does not round-trip; ";
      }
      if (p.source.proved()) {
        auto chk = rl::check_derivation(*T, *p.source.derivation);
        if (!chk.ok) pass = false, det += "rl check: " + chk.message + "; ";
        log_.rl.push_back({T, p.source.derivation, "beta oracle"});
      }
      if (p.target.proved()) {
        auto chk = crwl::check_derivation(*B, *p.target.derivation);
        if (!chk.ok) pass = false, det += "crwl check: " + chk.message + "; ";
        log_.crwl.push_back({B, p.target.derivation, "beta oracle"});
      }
      if (!p.agree()) ++discrepancies;
      if (p.reseeded) det += "source reseeded; ";
      det += "nodes " + std::to_string(p.source.stats.nodes) + "/" + std::to_string(p.target.stats.nodes);
      r.records.push_back(make_record(T->name + ": " + print_statement(g), pass,
                                      "rl " + detail::verdict(p.source) + ", beta " + detail::verdict(p.target),
                                      both(br, bc), det));

      if (T->sig.equations.empty()) continue;
      // Other representatives of both classes must give the same verdict.
      auto ls = rl::eq_class_sample(T->sig.equations, g.lhs, pool, br.max_term_size, 3);
      auto rs = rl::eq_class_sample(T->sig.equations, g.rhs, pool, br.max_term_size, 3);
      for (const auto& l2 : ls)
        for (const auto& r2 : rs) {
          if (l2 == g.lhs && r2 == g.rhs) continue;
          ++reps;
          auto q = detail::beta_probe(*T, b, g, br, bc, l2, r2);
          auto direct = rl::prove(*T, Statement::rewrite(l2, r2), br);
          bool ok = q.target.proved() == p.source.proved() && direct.proved() == p.source.proved();
          if (q.target.proved()) {
            auto chk = crwl::check_derivation(*B, *q.target.derivation);
            ok = ok && chk.ok;
            log_.crwl.push_back({B, q.target.derivation, "beta representatives"});
          }
          if (!ok) ++discrepancies;
          r.records.push_back(make_record(T->name + ": representatives " + print_term(l2) + " / " + print_term(r2), ok,
                                          "beta " + detail::verdict(q.target) + ", rl " + detail::verdict(direct),
                                          both(br, bc), "class verdict " + detail::verdict(p.source)));
        }
    }
  }
  r.checks_pass = files.size() >= 10 && with_eqs >= 3 && all_pass(r.records);
  r.summary = std::to_string(files.size()) + " theories (" + std::to_string(with_eqs) + " with equations), " +
              std::to_string(goals) + " goals, " + std::to_string(reps) + " representative probes, " +
              std::to_string(discrepancies) + " discrepancies";
  return r;
}

}  // namespace rwl::wb
