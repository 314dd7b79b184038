#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "flatlimit/errors.hpp"

namespace flatlimit {

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(int value) : q_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
  Rational(const mpz_class& num, const mpz_class& den) : q_(num, den) {
    if (den == 0) throw Error(ErrorCode::ZeroDivisorArgument, "rational with zero denominator");
    q_.canonicalize();
  }
  explicit Rational(const mpz_class& value) : q_(value) {}
  explicit Rational(mpq_class value) : q_(std::move(value)) { q_.canonicalize(); }

  /// Accepts "p" or "p/q" with optional leading sign.
  static Rational parse(std::string_view text) {
    const auto slash = text.find('/');
    mpz_class num;
    mpz_class den = 1;
    auto read = [&](std::string_view part, mpz_class& out) {
      if (part.empty() || out.set_str(std::string(part), 10) != 0)
        throw Error(ErrorCode::SyntaxError, "malformed rational '" + std::string(text) + "'");
    };
    if (slash == std::string_view::npos) {
      read(text, num);
    } else {
      read(text.substr(0, slash), num);
      read(text.substr(slash + 1), den);
    }
    return Rational(num, den);
  }

  const mpq_class& value() const noexcept { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  bool is_zero() const noexcept { return sgn(q_) == 0; }
  bool is_one() const noexcept { return q_ == 1; }
  bool is_integer() const noexcept { return q_.get_den() == 1; }
  int sign() const noexcept { return sgn(q_); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational inverse() const {
    if (is_zero()) throw Error(ErrorCode::ZeroDivisorArgument, "inverse of zero");
    return Rational(mpq_class(1 / q_));
  }
  Rational abs() const { return Rational(mpq_class(::abs(q_))); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorCode::ZeroDivisorArgument, "division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// "p" for integers, "p/q" otherwise.
  std::string to_string() const { return q_.get_str(10); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  mpq_class q_;
};

inline Rational power(const Rational& base, unsigned exponent) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), exponent);
  return Rational(num, den);
}

}  // namespace flatlimit
