#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatlimit/errors.hpp"
#include "flatlimit/groebner.hpp"
#include "flatlimit/polynomial.hpp"
#include "flatlimit/text.hpp"

namespace flatlimit {

/// Vector-space dimension of a quotient ring; nullopt means infinite.
using Colength = std::optional<std::size_t>;

inline std::string to_string(const Colength& c) { return c ? std::to_string(*c) : std::string("infinite"); }

/// Finitely generated ideal. Values are immutable; copies share a
/// write-once cache of reduced bases keyed by monomial order.
class Ideal {
 public:
  explicit Ideal(Ring ring) : ring_(std::move(ring)), cache_(std::make_shared<Cache>()) {}
  Ideal(Ring ring, std::vector<Polynomial> generators) : Ideal(std::move(ring)) {
    for (auto& g : generators) {
      require_same_ring(g.ring(), ring_);
      if (!g.is_zero()) generators_.push_back(std::move(g));
    }
  }
  Ideal(const Ring& ring, std::initializer_list<std::string_view> generators) : Ideal(ring) {
    for (auto text : generators) {
      auto g = parse_polynomial(text, ring_);
      if (!g.is_zero()) generators_.push_back(std::move(g));
    }
  }

  static Ideal unit(const Ring& ring) { return Ideal(ring, {Polynomial::constant(ring, Rational(1))}); }
  static Ideal zero(const Ring& ring) { return Ideal(ring); }
  static Ideal parse(const Ring& ring, std::string_view text) {
    return Ideal(ring, parse_polynomial_list(text, ring));
  }

  const Ring& ring() const noexcept { return ring_; }
  /// Nonzero generators as given (the zero ideal has none).
  const std::vector<Polynomial>& generators() const noexcept { return generators_; }

  const GroebnerBasis& basis(const MonomialOrder& order = MonomialOrder::grevlex()) const {
    const std::string key = order.describe();
    {
      std::lock_guard lock(cache_->mutex);
      if (auto it = cache_->bases.find(key); it != cache_->bases.end()) return *it->second;
    }
    auto computed = std::make_shared<const GroebnerBasis>(groebner_basis(generators_, ring_, order));
    std::lock_guard lock(cache_->mutex);
    auto [it, inserted] = cache_->bases.emplace(key, std::move(computed));
    return *it->second;
  }

  bool is_unit() const { return basis().is_unit(); }
  bool is_zero() const { return generators_.empty(); }

  /// Reduced grevlex basis; the canonical presentation used for printing and
  /// comparisons. The unit ideal prints as (1).
  std::vector<Polynomial> canonical_generators() const { return basis().elements(); }

  Ideal operator+(const Ideal& other) const {
    require_same_ring(ring_, other.ring_);
    std::vector<Polynomial> gens = generators_;
    gens.insert(gens.end(), other.generators_.begin(), other.generators_.end());
    return Ideal(ring_, std::move(gens));
  }
  Ideal plus(const Polynomial& p) const { return *this + Ideal(ring_, {p}); }

  /// Image of every generator under `f`, possibly into another ring.
  template <typename F>
  Ideal transform(const Ring& target, F&& f) const {
    std::vector<Polynomial> gens;
    gens.reserve(generators_.size());
    for (const auto& g : generators_) gens.push_back(f(g));
    return Ideal(target, std::move(gens));
  }

  /// Same generators viewed in `target` (variables matched by name).
  Ideal in_ring(const Ring& target) const {
    return transform(target, [&](const Polynomial& g) { return g.in_ring(target); });
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::string, std::shared_ptr<const GroebnerBasis>> bases;
  };

  Ring ring_;
  std::vector<Polynomial> generators_;
  std::shared_ptr<Cache> cache_;
};

inline GroebnerBasis groebner_basis(const Ideal& ideal, const MonomialOrder& order) { return ideal.basis(order); }

inline bool contains(const Ideal& ideal, const Polynomial& p) {
  require_same_ring(ideal.ring(), p.ring());
  if (p.is_zero()) return true;
  return ideal.basis().normal_form(p).is_zero();
}

/// I ⊆ J.
inline bool is_subset(const Ideal& inner, const Ideal& outer) {
  require_same_ring(inner.ring(), outer.ring());
  for (const auto& g : inner.generators())
    if (!contains(outer, g)) return false;
  return true;
}

inline bool ideals_equal(const Ideal& a, const Ideal& b) {
  require_same_ring(a.ring(), b.ring());
  return a.basis() == b.basis();
}

/// I ∩ k[remaining variables], presented over the subring without `drop`.
inline Ideal eliminate(const Ideal& ideal, const std::vector<std::string>& drop) {
  const Ring& ring = ideal.ring();
  std::vector<bool> mask(ring.size(), false);
  for (const auto& name : drop) mask[ring.index(name)] = true;
  const Ring sub = ring.without(drop);
  const auto& basis = ideal.basis(MonomialOrder::block(mask, MonomialOrder::grevlex()));
  std::vector<Polynomial> kept;
  for (const auto& g : basis.elements()) {
    bool free = true;
    for (std::size_t i = 0; i < ring.size() && free; ++i)
      if (mask[i] && g.involves(i)) free = false;
    if (free) kept.push_back(g.in_ring(sub));
  }
  return Ideal(sub, std::move(kept));
}

inline Ideal intersect(const Ideal& a, const Ideal& b) {
  require_same_ring(a.ring(), b.ring());
  const Ring& ring = a.ring();
  if (a.is_zero() || b.is_zero()) return Ideal::zero(ring);
  const std::string tag = ring.fresh_name("tag");
  const Ring extended = ring.with_front(tag);
  const Polynomial z = Polynomial::variable(extended, tag);
  const Polynomial one_minus_z = Polynomial::constant(extended, Rational(1)) - z;
  std::vector<Polynomial> gens;
  for (const auto& g : a.generators()) gens.push_back(z * g.in_ring(extended));
  for (const auto& g : b.generators()) gens.push_back(one_minus_z * g.in_ring(extended));
  return eliminate(Ideal(extended, std::move(gens)), {tag});
}

/// g / f for f dividing g exactly.
inline Polynomial divide_exact(const Polynomial& g, const Polynomial& f) {
  const auto order = MonomialOrder::grevlex();
  const auto [lm_f, lc_f] = f.leading_term(order);
  Polynomial rest = g;
  Polynomial q(g.ring());
  while (!rest.is_zero()) {
    const auto [lm, lc] = rest.leading_term(order);
    if (!lm_f.divides(lm)) throw Error(ErrorCode::VerificationFailure, "inexact polynomial division");
    const Monomial shift = lm_f.quotient_of(lm);
    const Rational c = lc / lc_f;
    q += Polynomial::monomial(g.ring(), shift, c);
    rest -= f.times_monomial(shift, c);
  }
  return q;
}

/// (I : f) = {u : f·u ∈ I}, via I ∩ (f) divided by f.
inline Ideal ideal_quotient(const Ideal& ideal, const Polynomial& f) {
  require_same_ring(ideal.ring(), f.ring());
  if (f.is_zero()) throw Error(ErrorCode::ZeroDivisorArgument, "quotient by the zero polynomial");
  const Ideal meet = intersect(ideal, Ideal(ideal.ring(), {f}));
  return meet.transform(ideal.ring(), [&](const Polynomial& g) { return divide_exact(g, f); });
}

/// (I : f^∞), computed as (I + (1 - z·f)) ∩ k[ring].
inline Ideal saturate(const Ideal& ideal, const Polynomial& f) {
  require_same_ring(ideal.ring(), f.ring());
  if (f.is_zero()) throw Error(ErrorCode::ZeroDivisorArgument, "saturation by the zero polynomial");
  const Ring& ring = ideal.ring();
  if (f.is_constant() || ideal.is_zero()) return ideal;
  const std::string aux = ring.fresh_name("sat");
  const Ring extended = ring.with_front(aux);
  std::vector<Polynomial> gens;
  for (const auto& g : ideal.generators()) gens.push_back(g.in_ring(extended));
  gens.push_back(Polynomial::constant(extended, Rational(1)) -
                 Polynomial::variable(extended, aux) * f.in_ring(extended));
  return eliminate(Ideal(extended, std::move(gens)), {aux});
}

inline Ideal saturate(const Ideal& ideal, std::string_view var) {
  return saturate(ideal, Polynomial::variable(ideal.ring(), var));
}
inline Ideal ideal_quotient(const Ideal& ideal, std::string_view var) {
  return ideal_quotient(ideal, Polynomial::variable(ideal.ring(), var));
}

/// Number of standard monomials of the grevlex basis.
inline Colength colength(const Ideal& ideal) {
  const auto& basis = ideal.basis();
  if (basis.is_unit()) return 0;
  const std::size_t n = ideal.ring().size();
  if (n == 0) return basis.empty() ? Colength(1) : Colength(0);
  const auto leads = basis.leading_monomials();
  std::vector<Exponent> bound(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& m : leads) {
      bool pure = m[v] > 0;
      for (std::size_t k = 0; k < n && pure; ++k)
        if (k != v && m[k] != 0) pure = false;
      if (pure && (bound[v] == 0 || m[v] < bound[v])) bound[v] = m[v];
    }
    if (bound[v] == 0) return std::nullopt;
  }
  std::size_t count = 0;
  Monomial m(n);
  // Odometer over the box, skipping monomials in the leading ideal.
  for (;;) {
    bool standard = true;
    for (const auto& l : leads)
      if (l.divides(m)) {
        standard = false;
        break;
      }
    if (standard) ++count;
    std::size_t v = 0;
    while (v < n) {
      if (m[v] + 1 < bound[v]) {
        ++m[v];
        break;
      }
      m[v] = 0;
      ++v;
    }
    if (v == n) break;
  }
  return count;
}

inline std::vector<std::string> format_ideal(const Ideal& ideal) {
  std::vector<std::string> out;
  for (const auto& g : ideal.canonical_generators()) out.push_back(format_canonical(g));
  return out;
}

inline std::string to_string(const Ideal& ideal) {
  std::string s = "(";
  const auto gens = format_ideal(ideal);
  if (gens.empty()) s += "0";
  for (std::size_t i = 0; i < gens.size(); ++i) s += (i ? ", " : "") + gens[i];
  return s + ")";
}

}  // namespace flatlimit
