#include <algorithm>
#include <deque>
#include <functional>

#include "eqclass.hpp"

namespace rwl::rl {

namespace detail {

std::vector<EqStep> eq_neighbors(const Equations& E, const Term& u, const std::vector<Term>& pool, int max_size) {
  std::vector<EqStep> out;
  std::vector<Path> positions;
  collect_positions(u, positions);
  for (const auto& p : positions) {
    const Term& sub = subterm_at(u, p);
    for (std::size_t i = 0; i < E.size(); ++i) {
      for (bool l2r : {true, false}) {
        const Term& from = l2r ? E[i].first : E[i].second;
        const Term& to = l2r ? E[i].second : E[i].first;
        Substitution s;
        if (!match(from, sub, s)) continue;
        std::vector<std::string> open;
        for (const auto& v : vars_in_order(to))
          if (!s.find(v)) open.push_back(v);
        int base = u.size() - sub.size();
        std::function<void(std::size_t)> rec = [&](std::size_t k) {
          if (k == open.size()) {
            Term img = apply_substitution(to, s);
            if (base + img.size() > max_size) return;
            Term next = replace_at(u, p, img);
            if (next == u) return;
            out.push_back(EqStep{i, l2r, p, s, next});
            return;
          }
          for (const auto& t : pool) {
            if (base + t.size() > max_size) continue;
            s.mapping[open[k]] = t;
            rec(k + 1);
          }
          s.mapping.erase(open[k]);
        };
        rec(0);
      }
    }
  }
  return out;
}

EClass::EClass(const Equations& E, const Term& root, const std::vector<Term>& pool, int max_size, std::size_t cap) {
  members_.push_back(root);
  parent_.emplace(root, Link{root, {}, true});
  if (E.empty()) return;
  std::size_t head = 0;
  while (head < members_.size() && members_.size() < cap) {
    Term cur = members_[head++];
    ++nodes_;
    for (auto& st : eq_neighbors(E, cur, pool, max_size)) {
      if (parent_.count(st.result)) continue;
      Term next = st.result;
      parent_.emplace(next, Link{cur, std::move(st), false});
      members_.push_back(next);
      if (members_.size() >= cap) break;
    }
  }
}

std::vector<EqStep> EClass::trace_to(const Term& t) const {
  std::vector<EqStep> out;
  Term cur = t;
  while (true) {
    const Link& l = parent_.at(cur);
    if (l.is_root) break;
    out.push_back(l.step);
    cur = l.prev;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

EqStep reverse_step(const EqStep& s, const Term& before) {
  EqStep r = s;
  r.left_to_right = !s.left_to_right;
  r.result = before;
  return r;
}

std::vector<EqStep> EClass::trace_from(const Term& t) const {
  std::vector<EqStep> out;
  Term cur = t;
  while (true) {
    const Link& l = parent_.at(cur);
    if (l.is_root) break;
    out.push_back(reverse_step(l.step, l.prev));
    cur = l.prev;
  }
  return out;
}

}  // namespace detail

EClassProbe eq_equal(const Equations& E, const Term& t, const Term& u, const SearchBudget& budget) {
  EClassProbe probe{t, u, Verdict::exhausted, {}, 0};
  if (t == u) {
    probe.verdict = Verdict::equal;
    return probe;
  }
  if (E.empty()) return probe;
  UniverseSpec spec;
  spec.roots = {t, u};
  for (const auto& [a, b] : E) {
    spec.roots.push_back(a);
    spec.roots.push_back(b);
  }
  spec.allowed_vars = vars_of(t);
  collect_vars(u, spec.allowed_vars);
  spec.max_term_size = budget.max_term_size;
  Universe pool = build_universe(spec);

  struct Link {
    Term prev;
    EqStep step;
  };
  std::unordered_map<Term, Link, TermHash> parent;
  std::deque<Term> queue{t};
  parent.emplace(t, Link{t, {}});
  while (!queue.empty() && probe.nodes < budget.max_nodes) {
    Term cur = queue.front();
    queue.pop_front();
    ++probe.nodes;
    for (auto& st : detail::eq_neighbors(E, cur, pool.terms, budget.max_term_size)) {
      if (parent.count(st.result)) continue;
      Term next = st.result;
      parent.emplace(next, Link{cur, st});
      if (next == u) {
        std::vector<EqStep> tr;
        Term c = u;
        while (!(c == t)) {
          const Link& l = parent.at(c);
          tr.push_back(l.step);
          c = l.prev;
        }
        std::reverse(tr.begin(), tr.end());
        probe.trace = std::move(tr);
        probe.verdict = Verdict::equal;
        return probe;
      }
      queue.push_back(next);
    }
  }
  return probe;
}

bool replay_trace(const Equations& E, const Term& from, const std::vector<EqStep>& trace, const Term& to,
                  std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  Term cur = from;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const EqStep& s = trace[k];
    if (s.equation >= E.size()) return fail("trace step " + std::to_string(k) + " names no equation");
    const Term& lhs = s.left_to_right ? E[s.equation].first : E[s.equation].second;
    const Term& rhs = s.left_to_right ? E[s.equation].second : E[s.equation].first;
    Term sub;
    try {
      sub = subterm_at(cur, s.position);
    } catch (const std::exception&) {
      return fail("trace step " + std::to_string(k) + " has a bad position");
    }
    if (!(apply_substitution(lhs, s.subst) == sub))
      return fail("trace step " + std::to_string(k) + " does not match its redex");
    Term next = replace_at(cur, s.position, apply_substitution(rhs, s.subst));
    if (s.result.valid() && !(next == s.result))
      return fail("trace step " + std::to_string(k) + " result differs");
    cur = next;
  }
  if (!(cur == to)) return fail("trace does not end at the expected term");
  return true;
}

std::vector<Term> eq_class_sample(const Equations& E, const Term& t, const std::vector<Term>& pool, int max_size,
                                  std::size_t cap) {
  return detail::EClass(E, t, pool, max_size, cap).members();
}

}  // namespace rwl::rl
