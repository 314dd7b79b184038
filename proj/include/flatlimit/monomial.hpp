#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "flatlimit/errors.hpp"
#include "flatlimit/rational.hpp"

namespace flatlimit {

using Exponent = std::uint32_t;

/// Exponent vector aligned to a ring's variable list.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t arity) : e_(arity, 0) {}
  explicit Monomial(std::vector<Exponent> exponents) : e_(std::move(exponents)) {}

  static Monomial variable(std::size_t arity, std::size_t index, Exponent power = 1) {
    Monomial m(arity);
    m.e_.at(index) = power;
    return m;
  }

  std::size_t arity() const noexcept { return e_.size(); }
  Exponent operator[](std::size_t i) const { return e_[i]; }
  Exponent& operator[](std::size_t i) { return e_[i]; }
  std::span<const Exponent> exponents() const noexcept { return e_; }

  std::uint64_t degree() const {
    return std::accumulate(e_.begin(), e_.end(), std::uint64_t{0});
  }
  bool is_one() const {
    return std::all_of(e_.begin(), e_.end(), [](Exponent x) { return x == 0; });
  }

  bool divides(const Monomial& other) const {
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i] > other.e_[i]) return false;
    return true;
  }

  /// other / *this; caller guarantees divisibility.
  Monomial quotient_of(const Monomial& other) const {
    Monomial q(e_.size());
    for (std::size_t i = 0; i < e_.size(); ++i) q.e_[i] = other.e_[i] - e_[i];
    return q;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m(a.e_.size());
    for (std::size_t i = 0; i < a.e_.size(); ++i) m.e_[i] = a.e_[i] + b.e_[i];
    return m;
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial m(a.e_.size());
    for (std::size_t i = 0; i < a.e_.size(); ++i) m.e_[i] = std::max(a.e_[i], b.e_[i]);
    return m;
  }

  friend bool coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.e_.size(); ++i)
      if (a.e_[i] != 0 && b.e_[i] != 0) return false;
    return true;
  }

  // Storage order only (plain lexicographic on the exponent vector); use a
  // MonomialOrder for anything algebraic.
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Exponent> e_;
};

/// Total monomial order. Weighted orders rank *smaller* weight higher (the
/// lowest t-power dominates, as for t-adic leading coefficients) and break
/// ties by grevlex; they are global only when no weight is positive.
class MonomialOrder {
 public:
  enum class Kind { Lex, Grevlex, Weighted };

  static MonomialOrder lex() { return MonomialOrder(Kind::Lex); }
  static MonomialOrder grevlex() { return MonomialOrder(Kind::Grevlex); }
  static MonomialOrder weighted(std::vector<Rational> weights) {
    MonomialOrder o(Kind::Weighted);
    mpz_class common = 1;
    for (const auto& w : weights) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), w.denominator().get_mpz_t());
    for (const auto& w : weights) {
      mpz_class scaled = w.numerator() * (common / w.denominator());
      o.scaled_.push_back(scaled);
    }
    o.weights_ = std::move(weights);
    return o;
  }

  /// Block order: monomials are first compared by grevlex on the variables
  /// flagged in `eliminate`, then by `rest` on the full exponent vector.
  static MonomialOrder block(std::vector<bool> eliminate, MonomialOrder rest) {
    rest.eliminate_ = std::move(eliminate);
    return rest;
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  const std::vector<bool>& eliminated() const noexcept { return eliminate_; }
  bool has_block() const {
    return std::any_of(eliminate_.begin(), eliminate_.end(), [](bool b) { return b; });
  }

  bool is_global() const {
    return std::all_of(scaled_.begin(), scaled_.end(), [](const mpz_class& w) { return w <= 0; });
  }

  /// Returns >0 if a > b, <0 if a < b, 0 if equal.
  int compare(const Monomial& a, const Monomial& b) const {
    if (!eliminate_.empty()) {
      if (int c = grevlex_compare(a, b, &eliminate_); c != 0) return c;
    }
    switch (kind_) {
      case Kind::Lex:
        for (std::size_t i = 0; i < a.arity(); ++i)
          if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
        return 0;
      case Kind::Grevlex:
        return grevlex_compare(a, b, nullptr);
      case Kind::Weighted: {
        mpz_class wa = 0;
        mpz_class wb = 0;
        for (std::size_t i = 0; i < a.arity() && i < scaled_.size(); ++i) {
          wa += scaled_[i] * a[i];
          wb += scaled_[i] * b[i];
        }
        if (wa != wb) return wa < wb ? 1 : -1;
        return grevlex_compare(a, b, nullptr);
      }
    }
    return 0;
  }

  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

  /// Stable textual key, used for basis caching and in diagnostics.
  std::string describe() const {
    std::string s;
    switch (kind_) {
      case Kind::Lex: s = "lex"; break;
      case Kind::Grevlex: s = "grevlex"; break;
      case Kind::Weighted:
        s = "weighted(";
        for (std::size_t i = 0; i < weights_.size(); ++i) s += (i ? "," : "") + weights_[i].to_string();
        s += ")";
        break;
    }
    if (has_block()) {
      s += "|block(";
      for (bool b : eliminate_) s += b ? '1' : '0';
      s += ")";
    }
    return s;
  }

  friend bool operator==(const MonomialOrder& a, const MonomialOrder& b) {
    return a.describe() == b.describe();
  }

 private:
  explicit MonomialOrder(Kind kind) : kind_(kind) {}

  static int grevlex_compare(const Monomial& a, const Monomial& b, const std::vector<bool>* mask) {
    std::uint64_t da = 0;
    std::uint64_t db = 0;
    for (std::size_t i = 0; i < a.arity(); ++i) {
      if (mask && !(i < mask->size() && (*mask)[i])) continue;
      da += a[i];
      db += b[i];
    }
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = a.arity(); i-- > 0;) {
      if (mask && !(i < mask->size() && (*mask)[i])) continue;
      if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    }
    return 0;
  }

  Kind kind_;
  std::vector<Rational> weights_;
  std::vector<mpz_class> scaled_;
  std::vector<bool> eliminate_;
};

}  // namespace flatlimit
