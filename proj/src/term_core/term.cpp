#include "rwl/term.hpp"

#include <stdexcept>

namespace rwl {

struct Term::Node {
  std::string name;
  bool is_var = false;
  std::vector<Term> args;
  std::size_t hash = 0;
  int size = 1;
  int height = 1;
  bool ground = true;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const std::vector<Term> kNoArgs;

}  // namespace

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->hash = mix(std::hash<std::string>{}(name), 0x51ed27);
  n->name = std::move(name);
  n->is_var = true;
  n->ground = false;
  Term t;
  t.node_ = std::move(n);
  return t;
}

Term Term::app(std::string name, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  std::size_t h = std::hash<std::string>{}(name);
  for (const auto& a : args) {
    if (!a.valid()) throw std::invalid_argument("null argument term");
    h = mix(h, a.hash());
    n->size += a.size();
    n->height = std::max(n->height, a.height() + 1);
    n->ground = n->ground && a.is_ground();
  }
  n->hash = mix(h, args.size());
  n->name = std::move(name);
  n->args = std::move(args);
  Term t;
  t.node_ = std::move(n);
  return t;
}

bool Term::is_var() const { return node_->is_var; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::args() const { return node_ ? node_->args : kNoArgs; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }
int Term::size() const { return node_->size; }
int Term::height() const { return node_->height; }
bool Term::is_ground() const { return node_->ground; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
  if (a.node_->is_var != b.node_->is_var || a.node_->name != b.node_->name) return false;
  const auto& x = a.node_->args;
  const auto& y = b.node_->args;
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] == y[i])) return false;
  return true;
}

bool operator<(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return false;
  if (!a.node_ || !b.node_) return !a.node_;
  if (a.size() != b.size()) return a.size() < b.size();
  if (a.name() != b.name()) return a.name() < b.name();
  if (a.is_var() != b.is_var()) return a.is_var();
  const auto& x = a.args();
  const auto& y = b.args();
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < y[i]) return true;
    if (y[i] < x[i]) return false;
  }
  return false;
}

Term bottom() {
  static const Term b = Term::app(kBottomName);
  return b;
}

bool is_bottom(const Term& t) { return !t.is_var() && t.arity() == 0 && t.name() == kBottomName; }

void collect_vars(const Term& t, VarSet& out) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

VarSet vars_of(const Term& t) {
  VarSet s;
  collect_vars(t, s);
  return s;
}

namespace {
void vars_order_rec(const Term& t, std::vector<std::string>& out, VarSet& seen) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    if (seen.insert(t.name()).second) out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) vars_order_rec(a, out, seen);
}
}  // namespace

std::vector<std::string> vars_in_order(const Term& t) {
  std::vector<std::string> out;
  VarSet seen;
  vars_order_rec(t, out, seen);
  return out;
}

int count_occurrences(const Term& t, const std::string& var) {
  if (t.is_var()) return t.name() == var ? 1 : 0;
  int n = 0;
  for (const auto& a : t.args()) n += count_occurrences(a, var);
  return n;
}

bool occurs_symbol(const Term& t, const std::string& name) {
  if (t.is_var()) return false;
  if (t.name() == name) return true;
  for (const auto& a : t.args())
    if (occurs_symbol(a, name)) return true;
  return false;
}

void collect_subterms(const Term& t, std::vector<Term>& out) {
  out.push_back(t);
  for (const auto& a : t.args()) collect_subterms(a, out);
}

namespace {
void positions_rec(const Term& t, Path& cur, std::vector<Path>& out) {
  out.push_back(cur);
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    cur.push_back(static_cast<int>(i));
    positions_rec(t.args()[i], cur, out);
    cur.pop_back();
  }
}
}  // namespace

void collect_positions(const Term& t, std::vector<Path>& out) {
  Path cur;
  positions_rec(t, cur, out);
}

const Term& subterm_at(const Term& t, const Path& p) {
  const Term* cur = &t;
  for (int i : p) {
    if (i < 0 || static_cast<std::size_t>(i) >= cur->args().size())
      throw std::out_of_range("bad term position");
    cur = &cur->args()[i];
  }
  return *cur;
}

namespace {
Term replace_rec(const Term& t, const Path& p, std::size_t k, const Term& r) {
  if (k == p.size()) return r;
  int i = p[k];
  if (i < 0 || static_cast<std::size_t>(i) >= t.args().size())
    throw std::out_of_range("bad term position");
  std::vector<Term> args = t.args();
  args[i] = replace_rec(args[i], p, k + 1, r);
  return Term::app(t.name(), std::move(args));
}
}  // namespace

Term replace_at(const Term& t, const Path& p, const Term& replacement) {
  return replace_rec(t, p, 0, replacement);
}

const Term* Substitution::find(const std::string& v) const {
  auto it = mapping.find(v);
  return it == mapping.end() ? nullptr : &it->second;
}

Term apply_substitution(const Term& t, const Substitution& s) {
  if (t.is_ground() || s.mapping.empty()) return t;
  if (t.is_var()) {
    const Term* img = s.find(t.name());
    return img ? *img : t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(apply_substitution(a, s));
  return Term::app(t.name(), std::move(args));
}

Substitution compose(const Substitution& s1, const Substitution& s2) {
  Substitution out;
  for (const auto& [v, img] : s1.mapping) out.mapping[v] = apply_substitution(img, s2);
  for (const auto& [v, img] : s2.mapping)
    if (!out.mapping.count(v)) out.mapping[v] = img;
  out.range_class = RangeClass::unrestricted;
  return out;
}

bool match(const Term& pattern, const Term& t, Substitution& s) {
  if (pattern.is_var()) {
    auto it = s.mapping.find(pattern.name());
    if (it != s.mapping.end()) return it->second == t;
    s.mapping.emplace(pattern.name(), t);
    return true;
  }
  if (pattern.is_ground()) return pattern == t;
  if (t.is_var() || t.name() != pattern.name() || t.arity() != pattern.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match(pattern.args()[i], t.args()[i], s)) return false;
  return true;
}

}  // namespace rwl
