#pragma once

// Text form of sum-of-products expressions over named atoms.
//
//   expr   := term ('+' term)*
//   term   := factor ('.' factor)*
//   factor := atom | '(' expr ')'
//   atom   := [A-Za-z0-9_']+
//
// Parsing distributes products, so "(a + b).c" reads as "a.c + b.c".

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "atgen/error.hpp"
#include "atgen/factor.hpp"

namespace atgen {

using Expr = SopExpression<std::string>;
using ExprFactorisation = Factorisation<std::string>;

namespace detail {

class ExprParser {
public:
  ExprParser(std::string_view text, ProductMode mode) : text_(text), mode_(mode) {}

  Expr parse() {
    auto e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

private:
  Expr expr() {
    auto e = term();
    while (accept('+')) e = add(e, term());
    return e;
  }

  Expr term() {
    auto e = factor();
    while (accept('.')) e = multiply(e, factor());
    return e;
  }

  Expr factor() {
    if (accept('(')) {
      auto e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    skip_space();
    const auto start = pos_;
    while (pos_ < text_.size() && is_atom_char(text_[pos_])) ++pos_;
    if (start == pos_) fail(pos_ == text_.size() ? "unexpected end of expression" : "expected an atom");
    return Expr(mode_, std::vector<Cube<std::string>>{{std::string(text_.substr(start, pos_ - start))}});
  }

  static bool is_atom_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw parse_error(what, line, column);
  }

  std::string_view text_;
  ProductMode mode_;
  std::size_t pos_ = 0;
};

inline std::string format_cube(const Cube<std::string>& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "." : "") + c[i];
  return out;
}

}  // namespace detail

inline Expr parse_expression(std::string_view text, ProductMode mode) {
  return detail::ExprParser(text, mode).parse();
}

/// Cubes in canonical order joined by " + ".
inline std::string format_expression(const Expr& e) {
  std::string out;
  for (const auto& c : e.cubes()) out += (out.empty() ? "" : " + ") + detail::format_cube(c);
  return out;
}

/// "g1.g2...gn + r", parenthesising factors with more than one cube.
inline std::string format_factorisation(const ExprFactorisation& fac) {
  std::string out;
  for (const auto& f : fac.factors) {
    if (!out.empty()) out += ".";
    out += f.size() > 1 && fac.factors.size() > 1 ? "(" + format_expression(f) + ")" : format_expression(f);
  }
  if (fac.remainder) out += (out.empty() ? "" : " + ") + format_expression(*fac.remainder);
  return out;
}

}  // namespace atgen
