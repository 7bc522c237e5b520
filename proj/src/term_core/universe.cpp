#include "rwl/universe.hpp"

#include <algorithm>
#include <unordered_set>

namespace rwl {

namespace {

struct Builder {
  const UniverseSpec& spec;
  std::unordered_set<Term, TermHash> seen;
  std::vector<Term> order;
  bool truncated = false;

  bool admissible(const Term& t) const {
    if (t.size() > spec.max_term_size) return false;
    if (t.is_ground()) return true;
    VarSet vs = vars_of(t);
    return std::includes(spec.allowed_vars.begin(), spec.allowed_vars.end(), vs.begin(), vs.end());
  }

  bool full() {
    if (order.size() >= spec.max_terms) {
      truncated = true;
      return true;
    }
    return false;
  }

  // Adds t and its admissible subterms; returns true when something new appeared.
  bool add(const Term& t) {
    bool grew = false;
    std::vector<Term> subs;
    collect_subterms(t, subs);
    for (const auto& s : subs) {
      if (!admissible(s) || seen.count(s)) continue;
      if (full()) return grew;
      seen.insert(s);
      order.push_back(s);
      grew = true;
    }
    return grew;
  }

  bool instantiate(const Term& tmpl) {
    std::vector<std::string> vs = vars_in_order(tmpl);
    if (vs.empty()) return add(tmpl);
    std::vector<int> occ;
    for (const auto& v : vs) occ.push_back(count_occurrences(tmpl, v));
    std::vector<Term> images;
    for (const auto& t : order)
      if (!spec.image_ok || spec.image_ok(t)) images.push_back(t);
    std::sort(images.begin(), images.end(), [](const Term& a, const Term& b) { return a.size() < b.size(); });
    bool grew = false;
    Substitution s;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int size) {
      if (truncated) return;
      if (i == vs.size()) {
        grew |= add(apply_substitution(tmpl, s));
        return;
      }
      for (const auto& img : images) {
        int next = size + (img.size() - 1) * occ[i];
        if (next > spec.max_term_size) break;  // images are size-sorted
        s.mapping[vs[i]] = img;
        rec(i + 1, next);
      }
      s.mapping.erase(vs[i]);
    };
    rec(0, tmpl.size());
    return grew;
  }

  bool bottoms(std::size_t from) {
    bool grew = false;
    for (std::size_t i = from; i < order.size() && !truncated; ++i) {
      Term t = order[i];
      if (is_bottom(t)) continue;
      std::vector<Path> ps;
      collect_positions(t, ps);
      for (const auto& p : ps) grew |= add(replace_at(t, p, bottom()));
    }
    return grew;
  }
};

}  // namespace

Universe build_universe(const UniverseSpec& spec) {
  Builder b{spec, {}, {}, false};
  for (const auto& r : spec.roots) b.add(r);
  std::size_t bottom_from = 0;
  for (int round = 0; round < 16 && !b.truncated; ++round) {
    bool grew = false;
    for (const auto& t : spec.templates) grew |= b.instantiate(t);
    if (spec.bottom_replacement) {
      grew |= b.bottoms(bottom_from);
      bottom_from = b.order.size();
    }
    if (!grew) break;
  }
  Universe u;
  u.terms = std::move(b.order);
  u.truncated = b.truncated;
  std::sort(u.terms.begin(), u.terms.end());
  return u;
}

}  // namespace rwl
