#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flatlimit/errors.hpp"
#include "flatlimit/polynomial.hpp"

namespace flatlimit {

namespace detail {

// Recursive-descent parser for
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := int ['/' uint] | var ['^' uint] | '(' expr ')' ['^' uint]
class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, const Ring& ring) : text_(text), ring_(ring) {}

  Polynomial parse() {
    skip_space();
    if (pos_ == text_.size()) fail("empty polynomial");
    Polynomial p = expr();
    skip_space();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  Polynomial expr() {
    skip_space();
    bool negate = false;
    if (peek('-')) {
      ++pos_;
      negate = true;
    } else if (peek('+')) {
      ++pos_;
    }
    Polynomial acc = term();
    if (negate) acc = -acc;
    for (;;) {
      skip_space();
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      skip_space();
      if (!peek('*')) return acc;
      ++pos_;
      acc = acc * factor();
    }
  }

  Polynomial factor() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      std::string den = "1";
      skip_space();
      if (peek('/')) {
        ++pos_;
        skip_space();
        den = digits();
      }
      if (den.find_first_not_of('0') == std::string::npos) fail("zero denominator");
      return Polynomial::constant(ring_, Rational(mpz_class(num), mpz_class(den)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      const auto index = ring_.find(name);
      if (!index)
        throw Error(ErrorCode::UnknownVariable,
                    "unknown variable '" + name + "' at position " + std::to_string(start), start);
      return Polynomial::monomial(ring_, Monomial::variable(ring_.size(), *index, exponent()));
    }
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      skip_space();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return inner.pow(static_cast<long>(exponent()));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Exponent exponent() {
    skip_space();
    if (!peek('^')) return 1;
    ++pos_;
    skip_space();
    const std::string d = digits();
    if (d.size() > 9) fail("exponent too large");
    return static_cast<Exponent>(std::stoul(d));
  }

  std::string digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::SyntaxError, what + " at position " + std::to_string(pos_), pos_);
  }

  std::string_view text_;
  const Ring& ring_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text, const Ring& ring) {
  return detail::PolynomialParser(text, ring).parse();
}

/// Splits a comma-separated generator list at top-level commas.
inline std::vector<Polynomial> parse_polynomial_list(std::string_view text, const Ring& ring) {
  std::vector<Polynomial> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '(') ++depth;
    if (i < text.size() && text[i] == ')') --depth;
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      try {
        out.push_back(parse_polynomial(text.substr(start, i - start), ring));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SyntaxError && e.code() != ErrorCode::UnknownVariable) throw;
        const std::size_t at = start + e.index().value_or(0);
        throw Error(e.code(), e.detail() + " (generator starting at column " + std::to_string(start) + ")", at);
      }
      start = i + 1;
    }
  }
  return out;
}

/// Terms in decreasing grevlex order (first declared variable largest),
/// joined by " + " / " - ". Round-trips through parse_polynomial.
inline std::string format_canonical(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Monomial, Rational>> terms(p.terms().begin(), p.terms().end());
  const auto order = MonomialOrder::grevlex();
  std::sort(terms.begin(), terms.end(),
            [&](const auto& a, const auto& b) { return order.greater(a.first, b.first); });
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms) {
    const bool negative = c.sign() < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const Rational magnitude = c.abs();
    std::string monomial_text;
    for (std::size_t i = 0; i < m.arity(); ++i) {
      if (m[i] == 0) continue;
      if (!monomial_text.empty()) monomial_text += "*";
      monomial_text += p.ring().name(i);
      if (m[i] > 1) monomial_text += "^" + std::to_string(m[i]);
    }
    if (monomial_text.empty()) {
      out += magnitude.to_string();
    } else if (magnitude.is_one()) {
      out += monomial_text;
    } else {
      out += magnitude.to_string() + "*" + monomial_text;
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << format_canonical(p); }

}  // namespace flatlimit
