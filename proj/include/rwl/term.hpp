#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace rwl {

// Immutable first-order term. Variables and symbol applications share one
// node type; the symbol's kind lives in the signature, not in the term.
class Term {
 public:
  Term() = default;

  static Term var(std::string name);
  static Term app(std::string name, std::vector<Term> args = {});

  bool valid() const { return node_ != nullptr; }
  bool is_var() const;
  const std::string& name() const;
  const std::vector<Term>& args() const;
  std::size_t arity() const { return args().size(); }

  std::size_t hash() const;
  int size() const;    // node count
  int height() const;  // 1 for leaves
  bool is_ground() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  // Total order: size, then name, then variables before applications, then args.
  friend bool operator<(const Term& a, const Term& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

inline constexpr const char* kBottomName = "bot";
Term bottom();
bool is_bottom(const Term& t);

using VarSet = std::set<std::string>;

void collect_vars(const Term& t, VarSet& out);
VarSet vars_of(const Term& t);
// Variables in order of first occurrence, left to right.
std::vector<std::string> vars_in_order(const Term& t);
int count_occurrences(const Term& t, const std::string& var);
bool occurs_symbol(const Term& t, const std::string& name);

// All subterms (including t), pre-order, duplicates kept.
void collect_subterms(const Term& t, std::vector<Term>& out);

using Path = std::vector<int>;
void collect_positions(const Term& t, std::vector<Path>& out);
const Term& subterm_at(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, const Term& replacement);

enum class RangeClass { partial_term, partial_expression, unrestricted };

struct Substitution {
  std::map<std::string, Term> mapping;
  RangeClass range_class = RangeClass::unrestricted;

  const Term* find(const std::string& v) const;
  bool empty() const { return mapping.empty(); }
  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.mapping == b.mapping;
  }
};

// Simultaneous replacement; variables outside the domain are left alone.
Term apply_substitution(const Term& t, const Substitution& s);
// (compose(s1, s2))(t) == apply(apply(t, s1), s2)
Substitution compose(const Substitution& s1, const Substitution& s2);

// One-way matching: binds variables of `pattern` only; variables of `t` are
// rigid. On failure `s` may hold partial bindings, so callers copy first.
bool match(const Term& pattern, const Term& t, Substitution& s);

}  // namespace rwl

template <>
struct std::hash<rwl::Term> {
  std::size_t operator()(const rwl::Term& t) const { return t.hash(); }
};
