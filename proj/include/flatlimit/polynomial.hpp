#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatlimit/errors.hpp"
#include "flatlimit/monomial.hpp"
#include "flatlimit/rational.hpp"
#include "flatlimit/ring.hpp"

namespace flatlimit {

/// Sparse multivariate polynomial with exact rational coefficients. The term
/// map never stores a zero coefficient, so structural equality is value
/// equality.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  Polynomial() = default;
  explicit Polynomial(Ring ring) : ring_(std::move(ring)) {}
  Polynomial(Ring ring, Terms terms) : ring_(std::move(ring)), terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->first.arity() != ring_.size())
        throw Error(ErrorCode::RingMismatch, "monomial arity does not match ring");
      it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
  }

  static Polynomial constant(const Ring& ring, const Rational& c) {
    Polynomial p(ring);
    if (!c.is_zero()) p.terms_.emplace(Monomial(ring.size()), c);
    return p;
  }
  static Polynomial variable(const Ring& ring, std::string_view name, Exponent power = 1) {
    Polynomial p(ring);
    p.terms_.emplace(Monomial::variable(ring.size(), ring.index(name), power), Rational(1));
    return p;
  }
  static Polynomial monomial(const Ring& ring, Monomial m, const Rational& c = Rational(1)) {
    Polynomial p(ring);
    if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
    return p;
  }

  const Ring& ring() const noexcept { return ring_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
  }
  Rational constant_term() const {
    const auto it = terms_.find(Monomial(ring_.size()));
    return it == terms_.end() ? Rational(0) : it->second;
  }

  std::uint64_t total_degree() const {
    std::uint64_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }
  Exponent degree_in(std::size_t var) const {
    Exponent d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
    return d;
  }
  Exponent degree_in(std::string_view name) const { return degree_in(ring_.index(name)); }
  bool involves(std::size_t var) const { return degree_in(var) > 0; }
  bool involves(std::string_view name) const {
    const auto i = ring_.find(name);
    return i && involves(*i);
  }

  /// The order-maximal term.
  std::pair<Monomial, Rational> leading_term(const MonomialOrder& order) const {
    if (is_zero()) throw Error(ErrorCode::ZeroPolynomial, "leading term of the zero polynomial");
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
      if (order.greater(it->first, best->first)) best = it;
    return *best;
  }

  /// Divides by the leading coefficient under `order`.
  Polynomial monic(const MonomialOrder& order) const {
    if (is_zero()) return *this;
    return scaled(leading_term(order).second.inverse());
  }

  Polynomial scaled(const Rational& c) const {
    if (c.is_zero()) return Polynomial(ring_);
    Polynomial r(ring_);
    for (const auto& [m, a] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, a * c);
    return r;
  }

  Polynomial times_monomial(const Monomial& m, const Rational& c = Rational(1)) const {
    Polynomial r(ring_);
    if (c.is_zero()) return r;
    for (const auto& [n, a] : terms_) r.terms_.emplace(n * m, a * c);
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) { return accumulate(o, Rational(1)); }
  Polynomial& operator-=(const Polynomial& o) { return accumulate(o, Rational(-1)); }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  Polynomial operator-() const { return scaled(Rational(-1)); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    require_same_ring(a.ring_, b.ring_);
    Polynomial r(a.ring_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        auto [it, inserted] = r.terms_.try_emplace(ma * mb, ca * cb);
        if (!inserted) {
          it->second += ca * cb;
          if (it->second.is_zero()) r.terms_.erase(it);
        }
      }
    }
    return r;
  }

  Polynomial pow(long exponent) const {
    if (exponent < 0) throw Error(ErrorCode::NegativePower, "negative exponent " + std::to_string(exponent));
    Polynomial result = constant(ring_, Rational(1));
    Polynomial base = *this;
    auto e = static_cast<unsigned long>(exponent);
    while (e) {
      if (e & 1U) result = result * base;
      e >>= 1U;
      if (e) base = base * base;
    }
    return result;
  }

  /// Ring homomorphism sending variable i to images[i] (all in `target`).
  Polynomial map_variables(const Ring& target, const std::vector<Polynomial>& images) const {
    if (images.size() != ring_.size()) throw Error(ErrorCode::RingMismatch, "image list has wrong length");
    for (const auto& im : images) require_same_ring(im.ring(), target);
    std::vector<std::map<Exponent, Polynomial>> powers(images.size());
    auto power_of = [&](std::size_t var, Exponent e) -> const Polynomial& {
      auto& cache = powers[var];
      if (auto it = cache.find(e); it != cache.end()) return it->second;
      return cache.emplace(e, images[var].pow(e)).first->second;
    };
    Polynomial result(target);
    for (const auto& [m, c] : terms_) {
      Polynomial term = constant(target, c);
      for (std::size_t i = 0; i < m.arity() && !term.is_zero(); ++i)
        if (m[i] != 0) term = term * power_of(i, m[i]);
      result += term;
    }
    return result;
  }

  /// Re-expresses the polynomial over `target`, matching variables by name.
  /// Variables of the source ring that are absent from `target` must not
  /// occur in the polynomial.
  Polynomial in_ring(const Ring& target) const {
    if (target == ring_) return *this;
    std::vector<std::optional<std::size_t>> slot(ring_.size());
    for (std::size_t i = 0; i < ring_.size(); ++i) slot[i] = target.find(ring_.name(i));
    Polynomial r(target);
    for (const auto& [m, c] : terms_) {
      Monomial n(target.size());
      for (std::size_t i = 0; i < m.arity(); ++i) {
        if (m[i] == 0) continue;
        if (!slot[i])
          throw Error(ErrorCode::UnknownVariable,
                      "variable '" + ring_.name(i) + "' does not exist in the target ring");
        n[*slot[i]] = m[i];
      }
      r.terms_.emplace(std::move(n), c);
    }
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

 private:
  Polynomial& accumulate(const Polynomial& o, const Rational& factor) {
    require_same_ring(ring_, o.ring_);
    for (const auto& [m, c] : o.terms_) {
      auto [it, inserted] = terms_.try_emplace(m, c * factor);
      if (!inserted) {
        it->second += c * factor;
        if (it->second.is_zero()) terms_.erase(it);
      }
    }
    return *this;
  }

  Ring ring_;
  Terms terms_;
};

/// Image of `p` under var ↦ expr, all other variables fixed. `expr` may live
/// in an extension ring containing every other variable of p's ring by name.
inline Polynomial substitute(const Polynomial& p, std::string_view var, const Polynomial& expr) {
  const Ring& source = p.ring();
  const std::size_t v = source.index(var);
  const Ring& target = expr.ring();
  std::vector<Polynomial> images;
  images.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (i == v) {
      images.push_back(expr);
    } else if (target.contains(source.name(i))) {
      images.push_back(Polynomial::variable(target, source.name(i)));
    } else if (!p.involves(i)) {
      images.push_back(Polynomial(target));
    } else {
      throw Error(ErrorCode::UnknownVariable,
                  "variable '" + source.name(i) + "' has no image in the substitution target ring");
    }
  }
  return p.map_variables(target, images);
}

/// Substitutes a constant for `var` and drops it from the ring.
inline Polynomial specialize(const Polynomial& p, std::string_view var, const Rational& value) {
  const Ring target = p.ring().without(std::string(var));
  return substitute(p, var, Polynomial::constant(target, value));
}

}  // namespace flatlimit
