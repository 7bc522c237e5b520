#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "rwl/term.hpp"

namespace rwl {

enum class SymbolKind { constructor, function, rl_operator };

struct Symbol {
  std::string name;
  int arity = 0;
  SymbolKind kind = SymbolKind::rl_operator;
  // Object-level variable embedded as a constant by the CRWL->RL encoding.
  bool is_var_constant = false;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

// Names only the translations may introduce.
bool is_reserved_name(const std::string& name);
inline constexpr const char* kTrueName = "true";
inline constexpr const char* kRelName = "R";
inline constexpr const char* kJoinName = "join";
inline constexpr const char* kPtermName = "pterm";
inline constexpr const char* kTtermName = "tterm";
inline constexpr const char* kPexprName = "pexpr";

class TheoryError : public std::runtime_error {
 public:
  explicit TheoryError(const std::string& msg, int line = 0, int col = 0);
  int line() const { return line_; }
  int column() const { return col_; }

 private:
  int line_, col_;
};

// Declaration-ordered symbol set with name lookup.
class SymbolTable {
 public:
  void add(const Symbol& s);  // throws TheoryError on duplicate name
  const Symbol* find(const std::string& name) const;
  const std::vector<Symbol>& symbols() const { return list_; }
  std::size_t size() const { return list_.size(); }

 private:
  std::vector<Symbol> list_;
  std::unordered_map<std::string, std::size_t> index_;
};

class CrwlSignature {
 public:
  CrwlSignature() = default;

  void add_constructor(const std::string& name, int arity, bool var_constant = false);
  void add_function(const std::string& name, int arity);

  const Symbol* find(const std::string& name) const { return table_.find(name); }
  bool is_constructor(const std::string& name) const;
  bool is_function(const std::string& name) const;
  std::vector<Symbol> constructors() const;
  std::vector<Symbol> functions() const;
  const std::vector<Symbol>& symbols() const { return table_.symbols(); }

  bool includes_bottom = true;

 private:
  SymbolTable table_;
};

using Condition = std::pair<Term, Term>;

struct RlSignature {
  SymbolTable operators;
  std::vector<std::pair<Term, Term>> equations;
};

struct CrwlRule {
  Term lhs;  // f(t1,...,tn)
  Term rhs;
  std::vector<Condition> conditions;  // joinability pairs

  const std::string& lhs_head() const { return lhs.name(); }
  const std::vector<Term>& lhs_args() const { return lhs.args(); }
  VarSet vars() const;
  friend bool operator==(const CrwlRule&, const CrwlRule&) = default;
};

struct RlRule {
  std::optional<std::string> label;
  Term lhs;
  Term rhs;
  std::vector<Condition> conditions;  // rewrite pairs

  VarSet vars() const;
  friend bool operator==(const RlRule&, const RlRule&) = default;
};

enum class StatementKind { reduction, joinability, rl_rewrite, rl_conditional };

struct Statement {
  StatementKind kind = StatementKind::reduction;
  Term lhs;
  Term rhs;
  std::vector<Condition> conditions;  // rl_conditional only
  std::optional<std::string> label;   // rl_conditional only

  static Statement reduction(Term a, Term b);
  static Statement joinability(Term a, Term b);
  static Statement rewrite(Term t, Term u);
  static Statement conditional(const RlRule& r);
  RlRule as_rule() const;
  VarSet vars() const;
  friend bool operator==(const Statement&, const Statement&) = default;
};

struct CrwlTheory {
  std::string name;
  CrwlSignature sig;
  std::vector<std::string> vars;  // declared meta-level variables
  std::vector<CrwlRule> rules;
  std::vector<Statement> goals;
  bool translated = false;  // produced by a translation: reserved names allowed
};

struct RlTheory {
  std::string name;
  RlSignature sig;
  std::vector<std::string> vars;
  std::vector<RlRule> rules;
  std::vector<Statement> goals;
  bool translated = false;
};

using Theory = std::variant<CrwlTheory, RlTheory>;

enum class ExprClass { total_term, partial_term, total_expression, partial_expression, ill_formed };
const char* to_string(ExprClass c);

ExprClass classify_expression(const CrwlSignature& sig, const Term& t);
bool is_partial_term(const CrwlSignature& sig, const Term& t);
bool is_total_term(const CrwlSignature& sig, const Term& t);
bool is_partial_expression(const CrwlSignature& sig, const Term& t);
bool is_total_expression(const CrwlSignature& sig, const Term& t);

// Arity and membership check; bot is accepted when `allow_bottom`.
bool well_formed(const CrwlSignature& sig, const Term& t, bool allow_bottom);
bool well_formed(const RlSignature& sig, const Term& t);

// Throws TheoryError describing the first violated rule invariant.
void validate_crwl_rule(const CrwlSignature& sig, const CrwlRule& r);
void validate_rl_rule(const RlSignature& sig, const RlRule& r);
void validate_statement(const CrwlSignature& sig, const Statement& s);
void validate_statement(const RlSignature& sig, const Statement& s);

bool is_left_linear(const CrwlRule& r);
// Repeated lhs variables get fresh names x#2, x#3, ... with x >< x#j added;
// variables occurring once get x >< x unless some condition already has x
// bare on one side. Conditions already present are not added twice, so the
// operation is idempotent.
CrwlRule linearise_rule(const CrwlRule& r);

struct SignatureMorphism {
  CrwlSignature source;
  CrwlSignature target;
  std::map<std::string, std::string> constructor_map;
  std::map<std::string, std::string> function_map;

  // Throws TheoryError when not total, not arity/kind preserving.
  void validate() const;
  std::string map_symbol(const std::string& name) const;  // bot -> bot
};

SignatureMorphism identity_morphism(const CrwlSignature& sig);
// First m1, then m2.
SignatureMorphism compose(const SignatureMorphism& m1, const SignatureMorphism& m2);

Term translate_term(const SignatureMorphism& m, const Term& t);
Statement translate_sentence(const SignatureMorphism& m, const Statement& s);
CrwlRule translate_sentence(const SignatureMorphism& m, const CrwlRule& r);

// Fresh identifier derived from `base` not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

}  // namespace rwl
