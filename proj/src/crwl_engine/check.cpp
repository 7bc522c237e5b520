#include "rwl/crwl.hpp"
#include "rwl/syntax.hpp"

namespace rwl::crwl {

namespace {

struct Fail {
  std::string msg;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Fail{msg};
}

bool is_red(const Statement& s) { return s.kind == StatementKind::reduction; }

void check_node(const CrwlTheory& th, const Derivation& d, std::string& where) {
  const Statement& c = d.conclusion;
  require(c.kind == StatementKind::reduction || c.kind == StatementKind::joinability,
          "conclusion is not a CRWL statement");
  require(c.lhs.valid() && c.rhs.valid(), "incomplete conclusion");
  require(well_formed(th.sig, c.lhs, true) && well_formed(th.sig, c.rhs, true),
          "conclusion ill-formed over the signature");
  const auto& ps = d.premises;
  for (const auto& p : ps) require(p != nullptr, "null premise");

  switch (d.rule) {
    case Rule::Bottom:
      require(is_red(c) && is_bottom(c.rhs), "Bottom conclusion must be e -> bot");
      require(ps.empty(), "Bottom takes no premises");
      break;
    case Rule::Reflexivity:
      require(is_red(c) && c.lhs == c.rhs, "Reflexivity conclusion must be e -> e");
      require(ps.empty(), "Reflexivity takes no premises");
      break;
    case Rule::Monotonicity: {
      require(is_red(c), "Monotonicity concludes a reduction");
      require(!c.lhs.is_var() && !c.rhs.is_var() && c.lhs.name() == c.rhs.name() &&
                  c.lhs.arity() == c.rhs.arity(),
              "Monotonicity sides must share the head symbol");
      require(ps.size() == c.lhs.arity(), "Monotonicity needs one premise per argument");
      for (std::size_t i = 0; i < ps.size(); ++i)
        require(is_red(ps[i]->conclusion) && ps[i]->conclusion.lhs == c.lhs.args()[i] &&
                    ps[i]->conclusion.rhs == c.rhs.args()[i],
                "Monotonicity premise " + std::to_string(i) + " does not match argument");
      break;
    }
    case Rule::Reduction: {
      require(is_red(c), "Reduction concludes a reduction");
      require(d.rule_index && *d.rule_index < th.rules.size(), "Reduction names no theory rule");
      require(d.instantiation.has_value(), "Reduction without instantiation");
      const CrwlRule& r = th.rules[*d.rule_index];
      const Substitution& s = *d.instantiation;
      for (const auto& [v, img] : s.mapping)
        require(is_partial_term(th.sig, img), "theta range not a partial term (" + v + " -> " + print_term(img) + ")");
      for (const auto& v : r.vars()) require(s.find(v) != nullptr, "theta undefined on rule variable " + v);
      require(apply_substitution(r.lhs, s) == c.lhs && apply_substitution(r.rhs, s) == c.rhs,
              "conclusion is not theta(l) -> theta(r)");
      require(ps.size() == r.conditions.size(), "Reduction needs one premise per condition");
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const Statement& pc = ps[i]->conclusion;
        require(pc.kind == StatementKind::joinability && pc.lhs == apply_substitution(r.conditions[i].first, s) &&
                    pc.rhs == apply_substitution(r.conditions[i].second, s),
                "Reduction premise " + std::to_string(i) + " is not the instantiated condition");
      }
      break;
    }
    case Rule::Transitivity: {
      require(is_red(c), "Transitivity concludes a reduction");
      require(ps.size() == 2, "Transitivity takes two premises");
      const Statement& p0 = ps[0]->conclusion;
      const Statement& p1 = ps[1]->conclusion;
      require(is_red(p0) && is_red(p1), "Transitivity premises must be reductions");
      require(p0.lhs == c.lhs && p1.rhs == c.rhs && p0.rhs == p1.lhs, "Transitivity premises do not chain");
      if (d.witness) require(*d.witness == p0.rhs, "Transitivity cut term mismatch");
      break;
    }
    case Rule::Join: {
      require(c.kind == StatementKind::joinability, "Join concludes a joinability statement");
      require(d.witness.has_value(), "Join without witness");
      require(is_total_term(th.sig, *d.witness), "witness not total");
      require(ps.size() == 2, "Join takes two premises");
      require(is_red(ps[0]->conclusion) && ps[0]->conclusion.lhs == c.lhs && ps[0]->conclusion.rhs == *d.witness,
              "Join left premise must be a -> t");
      require(is_red(ps[1]->conclusion) && ps[1]->conclusion.lhs == c.rhs && ps[1]->conclusion.rhs == *d.witness,
              "Join right premise must be b -> t");
      break;
    }
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::size_t len = where.size();
    where += (where.empty() ? "" : ".") + std::to_string(i);
    check_node(th, *ps[i], where);
    where.resize(len);
  }
}

}  // namespace

CheckReport check_derivation(const CrwlTheory& th, const Derivation& d) {
  std::string where;
  try {
    check_node(th, d, where);
  } catch (const Fail& f) {
    return CheckReport{false, f.msg, where.empty() ? "root" : where};
  }
  return CheckReport{};
}

nlohmann::json to_json(const Derivation& d, const CrwlTheory& th) {
  nlohmann::json j;
  j["rule"] = to_string(d.rule);
  j["conclusion"] = print_statement(d.conclusion);
  if (d.rule_index) {
    j["rule_index"] = *d.rule_index;
    if (*d.rule_index < th.rules.size()) j["applied_rule"] = print_rule(th.rules[*d.rule_index]);
  }
  if (d.instantiation) {
    nlohmann::json s = nlohmann::json::object();
    for (const auto& [v, img] : d.instantiation->mapping) s[v] = print_term(img);
    j["subst"] = s;
  }
  if (d.witness) j["witness"] = print_term(*d.witness);
  j["premises"] = nlohmann::json::array();
  for (const auto& p : d.premises) j["premises"].push_back(to_json(*p, th));
  return j;
}

namespace {

Rule rule_from(const std::string& s) {
  for (Rule r : {Rule::Bottom, Rule::Reflexivity, Rule::Monotonicity, Rule::Reduction, Rule::Transitivity, Rule::Join})
    if (s == to_string(r)) return r;
  throw TheoryError("unknown CRWL rule name " + s);
}

Statement statement_from(const std::string& text, const std::set<std::string>& vars) {
  TokenStream ts(text, 1);
  Term a = parse_term(ts, vars);
  bool join = false;
  if (ts.accept("><")) join = true;
  else ts.expect("->");
  Term b = parse_term(ts, vars);
  if (!ts.at_end()) ts.fail("trailing input in conclusion");
  return join ? Statement::joinability(a, b) : Statement::reduction(a, b);
}

}  // namespace

DerivRef derivation_from_json(const nlohmann::json& j, const CrwlTheory& th) {
  if (!j.is_object()) throw TheoryError("derivation node must be an object");
  std::set<std::string> vars(th.vars.begin(), th.vars.end());
  for (const auto& r : th.rules)
    for (const auto& v : r.vars()) vars.insert(v);
  auto d = std::make_shared<Derivation>();
  d->rule = rule_from(j.at("rule").get<std::string>());
  d->conclusion = statement_from(j.at("conclusion").get<std::string>(), vars);
  if (j.contains("rule_index")) d->rule_index = j["rule_index"].get<std::size_t>();
  if (j.contains("subst")) {
    Substitution s;
    s.range_class = RangeClass::partial_term;
    for (const auto& [v, img] : j["subst"].items()) s.mapping[v] = parse_term(img.get<std::string>(), vars);
    d->instantiation = s;
  }
  if (j.contains("witness")) d->witness = parse_term(j["witness"].get<std::string>(), vars);
  if (j.contains("premises"))
    for (const auto& p : j["premises"]) d->premises.push_back(derivation_from_json(p, th));
  return d;
}

}  // namespace rwl::crwl
