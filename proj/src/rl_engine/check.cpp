#include "rwl/rl.hpp"
#include "rwl/syntax.hpp"

namespace rwl::rl {

namespace {

struct Fail {
  std::string msg;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Fail{msg};
}

bool concludes(const DerivRef& p, const Term& a, const Term& b) {
  return p->rule != Rule::ImplicationIntro && p->lhs == a && p->rhs == b;
}

void check_node(const RlTheory& th, const Derivation& d, std::string& where);

void check_premises(const RlTheory& th, const Derivation& d, std::string& where) {
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    std::size_t len = where.size();
    where += (where.empty() ? "" : ".") + std::to_string(i);
    check_node(th, *d.premises[i], where);
    where.resize(len);
  }
}

void check_node(const RlTheory& th, const Derivation& d, std::string& where) {
  require(d.lhs.valid() && d.rhs.valid(), "incomplete conclusion");
  const auto& ps = d.premises;
  for (const auto& p : ps) require(p != nullptr, "null premise");

  if (d.rule == Rule::ImplicationIntro) {
    require(d.conditional.has_value(), "ImplicationIntro without its sentence");
    const RlRule& s = *d.conditional;
    require(s.lhs == d.lhs && s.rhs == d.rhs, "ImplicationIntro sentence does not match conclusion");
    validate_rl_rule(th.sig, s);
    require(ps.size() == 1, "ImplicationIntro takes one premise");
    Substitution c;
    RlTheory ext = implication_theory(th, s, &c);
    require(concludes(ps[0], apply_substitution(s.lhs, c), apply_substitution(s.rhs, c)),
            "ImplicationIntro premise is not the sentence over fresh constants");
    // The premise lives in the extended theory.
    std::size_t len = where.size();
    where += (where.empty() ? "" : ".") + std::string("0");
    check_node(ext, *ps[0], where);
    where.resize(len);
    return;
  }

  require(well_formed(th.sig, d.lhs) && well_formed(th.sig, d.rhs), "conclusion ill-formed over the signature");
  switch (d.rule) {
    case Rule::Reflexivity:
      require(d.lhs == d.rhs, "Reflexivity conclusion must be t => t");
      require(ps.empty(), "Reflexivity takes no premises");
      break;
    case Rule::Transitivity:
      require(ps.size() == 2, "Transitivity takes two premises");
      require(ps[0]->rule != Rule::ImplicationIntro && ps[1]->rule != Rule::ImplicationIntro,
              "Transitivity premises must be rewrites");
      require(ps[0]->lhs == d.lhs && ps[1]->rhs == d.rhs && ps[0]->rhs == ps[1]->lhs,
              "Transitivity premises do not chain");
      break;
    case Rule::Congruence:
      require(!d.lhs.is_var() && !d.rhs.is_var() && d.lhs.name() == d.rhs.name() && d.lhs.arity() == d.rhs.arity(),
              "Congruence sides must share the head symbol");
      require(ps.size() == d.lhs.arity(), "Congruence needs one premise per argument");
      for (std::size_t i = 0; i < ps.size(); ++i)
        require(concludes(ps[i], d.lhs.args()[i], d.rhs.args()[i]),
                "Congruence premise " + std::to_string(i) + " does not match argument");
      break;
    case Rule::Replacement: {
      require(d.rule_index && *d.rule_index < th.rules.size(), "Replacement names no theory rule");
      const RlRule& r = th.rules[*d.rule_index];
      if (d.applied_rule) require(*d.applied_rule == r, "applied rule differs from the indexed theory rule");
      require(d.w && d.w_prime, "Replacement without both substitutions");
      const Substitution& w = *d.w;
      const Substitution& wp = *d.w_prime;
      VarSet vars = r.vars();
      for (const auto& v : vars) {
        require(w.find(v) != nullptr, "w undefined on rule variable " + v);
        require(wp.find(v) != nullptr, "w' undefined on rule variable " + v);
        require(well_formed(th.sig, *w.find(v)) && well_formed(th.sig, *wp.find(v)),
                "substitution image ill-formed for " + v);
      }
      require(apply_substitution(r.lhs, w) == d.lhs, "conclusion lhs is not l(w)");
      require(apply_substitution(r.rhs, wp) == d.rhs, "conclusion rhs is not r(w')");
      require(ps.size() == vars.size() + r.conditions.size(),
              "Replacement needs one premise per variable and per condition");
      std::size_t k = 0;
      for (const auto& v : vars) {
        require(concludes(ps[k], *w.find(v), *wp.find(v)), "Replacement premise for " + v + " is not w(x) => w'(x)");
        ++k;
      }
      for (std::size_t i = 0; i < r.conditions.size(); ++i, ++k)
        require(concludes(ps[k], apply_substitution(r.conditions[i].first, w),
                          apply_substitution(r.conditions[i].second, w)),
                "Replacement premise for condition " + std::to_string(i) + " is not its w-instance");
      break;
    }
    case Rule::EqualityStep: {
      std::string why;
      const Equations& E = th.sig.equations;
      if (ps.empty()) {
        require(d.trace_rhs.empty(), "premise-free EqualityStep has a single trace");
        require(replay_trace(E, d.lhs, d.trace_lhs, d.rhs, &why), "EqualityStep: " + why);
      } else {
        require(ps.size() == 1, "EqualityStep takes at most one premise");
        require(ps[0]->rule != Rule::ImplicationIntro, "EqualityStep premise must be a rewrite");
        require(replay_trace(E, d.lhs, d.trace_lhs, ps[0]->lhs, &why), "EqualityStep lhs: " + why);
        require(replay_trace(E, ps[0]->rhs, d.trace_rhs, d.rhs, &why), "EqualityStep rhs: " + why);
      }
      break;
    }
    case Rule::ImplicationIntro:
      break;
  }
  check_premises(th, d, where);
}

}  // namespace

CheckReport check_derivation(const RlTheory& th, const Derivation& d) {
  std::string where;
  try {
    check_node(th, d, where);
  } catch (const Fail& f) {
    return CheckReport{false, f.msg, where.empty() ? "root" : where};
  } catch (const TheoryError& e) {
    return CheckReport{false, e.what(), where.empty() ? "root" : where};
  }
  return CheckReport{};
}

namespace {

nlohmann::json subst_json(const Substitution& s) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [v, img] : s.mapping) j[v] = print_term(img);
  return j;
}

nlohmann::json trace_json(const std::vector<EqStep>& tr) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& s : tr)
    a.push_back({{"equation", s.equation},
                 {"direction", s.left_to_right ? "l2r" : "r2l"},
                 {"position", s.position},
                 {"subst", subst_json(s.subst)},
                 {"result", print_term(s.result)}});
  return a;
}

nlohmann::json rule_json(const RlRule& r) {
  nlohmann::json j{{"lhs", print_term(r.lhs)}, {"rhs", print_term(r.rhs)}};
  if (r.label) j["label"] = *r.label;
  j["conditions"] = nlohmann::json::array();
  for (const auto& [a, b] : r.conditions) j["conditions"].push_back({print_term(a), print_term(b)});
  return j;
}

}  // namespace

nlohmann::json to_json(const Derivation& d) {
  nlohmann::json j;
  j["rule"] = to_string(d.rule);
  j["conclusion"] = print_statement(d.conclusion());
  j["lhs"] = print_term(d.lhs);
  j["rhs"] = print_term(d.rhs);
  if (d.conditional) j["sentence"] = rule_json(*d.conditional);
  if (d.rule_index) j["rule_index"] = *d.rule_index;
  if (d.applied_rule) j["applied_rule"] = print_rule(*d.applied_rule);
  if (d.w) j["w"] = subst_json(*d.w);
  if (d.w_prime) j["w_prime"] = subst_json(*d.w_prime);
  if (d.rule == Rule::EqualityStep) {
    j["trace_lhs"] = trace_json(d.trace_lhs);
    j["trace_rhs"] = trace_json(d.trace_rhs);
  }
  j["premises"] = nlohmann::json::array();
  for (const auto& p : d.premises) j["premises"].push_back(to_json(*p));
  return j;
}

namespace {

Rule rule_from(const std::string& s) {
  for (Rule r : {Rule::Reflexivity, Rule::Transitivity, Rule::Congruence, Rule::Replacement, Rule::ImplicationIntro,
                 Rule::EqualityStep})
    if (s == to_string(r)) return r;
  throw TheoryError("unknown RL rule name " + s);
}

Substitution subst_from(const nlohmann::json& j, const std::set<std::string>& vars) {
  Substitution s;
  s.range_class = RangeClass::unrestricted;
  for (const auto& [v, img] : j.items()) s.mapping[v] = parse_term(img.get<std::string>(), vars);
  return s;
}

std::vector<EqStep> trace_from(const nlohmann::json& j, const std::set<std::string>& vars) {
  std::vector<EqStep> out;
  for (const auto& s : j) {
    EqStep st;
    st.equation = s.at("equation").get<std::size_t>();
    st.left_to_right = s.at("direction").get<std::string>() != "r2l";
    st.position = s.at("position").get<Path>();
    st.subst = subst_from(s.at("subst"), vars);
    if (s.contains("result")) st.result = parse_term(s["result"].get<std::string>(), vars);
    out.push_back(std::move(st));
  }
  return out;
}

DerivRef node_from_json(const nlohmann::json& j, const std::set<std::string>& vars, const RlTheory& th) {
  if (!j.is_object()) throw TheoryError("derivation node must be an object");
  auto d = std::make_shared<Derivation>();
  d->rule = rule_from(j.at("rule").get<std::string>());
  d->lhs = parse_term(j.at("lhs").get<std::string>(), vars);
  d->rhs = parse_term(j.at("rhs").get<std::string>(), vars);
  if (j.contains("sentence")) {
    const auto& s = j["sentence"];
    RlRule r;
    r.lhs = parse_term(s.at("lhs").get<std::string>(), vars);
    r.rhs = parse_term(s.at("rhs").get<std::string>(), vars);
    if (s.contains("label")) r.label = s["label"].get<std::string>();
    for (const auto& c : s.at("conditions"))
      r.conditions.emplace_back(parse_term(c.at(0).get<std::string>(), vars),
                                parse_term(c.at(1).get<std::string>(), vars));
    d->conditional = r;
  }
  if (j.contains("rule_index")) d->rule_index = j["rule_index"].get<std::size_t>();
  // stored as text; resolved against the theory so the checker can compare it
  if (j.contains("applied_rule")) {
    const auto text = j["applied_rule"].get<std::string>();
    if (!d->rule_index || *d->rule_index >= th.rules.size() || print_rule(th.rules[*d->rule_index]) != text)
      throw TheoryError("applied rule " + text + " is not the indexed theory rule");
    d->applied_rule = th.rules[*d->rule_index];
  }
  if (j.contains("w")) d->w = subst_from(j["w"], vars);
  if (j.contains("w_prime")) d->w_prime = subst_from(j["w_prime"], vars);
  if (j.contains("trace_lhs")) d->trace_lhs = trace_from(j["trace_lhs"], vars);
  if (j.contains("trace_rhs")) d->trace_rhs = trace_from(j["trace_rhs"], vars);
  if (j.contains("premises"))
    // premises of an implication step live in the theory extended by its hypotheses
    for (const auto& p : j["premises"])
      d->premises.push_back(d->conditional ? node_from_json(p, vars, implication_theory(th, *d->conditional))
                                           : node_from_json(p, vars, th));
  return d;
}

}  // namespace

DerivRef derivation_from_json(const nlohmann::json& j, const RlTheory& th) {
  std::set<std::string> vars(th.vars.begin(), th.vars.end());
  for (const auto& r : th.rules)
    for (const auto& v : r.vars()) vars.insert(v);
  for (const auto& [a, b] : th.sig.equations) {
    for (const auto& v : vars_of(a)) vars.insert(v);
    for (const auto& v : vars_of(b)) vars.insert(v);
  }
  try {
    return node_from_json(j, vars, th);
  } catch (const nlohmann::json::exception& e) {
    throw TheoryError(std::string("malformed derivation: ") + e.what());
  }
}

}  // namespace rwl::rl
