#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rwl/theory.hpp"

namespace rwl {

// Line-oriented tokenizer shared by the theory and model-file readers.
struct Token {
  enum Kind { ident, punct, end } kind = end;
  std::string text;
  int line = 0;
  int col = 0;
};

class TokenStream {
 public:
  TokenStream(std::string_view line_text, int line_no);

  const Token& peek(std::size_t k = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Token::end; }
  bool accept(std::string_view punct_or_word);
  void expect(std::string_view punct_or_word);
  std::string expect_ident();
  [[noreturn]] void fail(const std::string& msg) const;

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int line_;
};

// Splits `text` into lines and strips comments; returns (line number, text).
std::vector<std::pair<int, std::string>> logical_lines(std::string_view text);

Term parse_term(TokenStream& ts, const std::set<std::string>& vars);
Term parse_term(std::string_view text, const std::set<std::string>& vars);

Theory parse_theory(std::string_view text);
Theory load_theory_file(const std::string& path);

// Goal text in the syntax of the theory kind: `a -> b`, `a >< b`, `t => u [if ...]`.
Statement parse_statement(const Theory& th, std::string_view text);

std::string print_term(const Term& t);
std::string print_statement(const Statement& s);
std::string print_rule(const CrwlRule& r);
std::string print_rule(const RlRule& r);
std::string print_theory(const Theory& th);

const std::string& theory_name(const Theory& th);
std::set<std::string> declared_vars(const Theory& th);

}  // namespace rwl
