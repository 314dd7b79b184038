#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatlimit/degeneration.hpp"
#include "flatlimit/errors.hpp"
#include "flatlimit/ideal.hpp"

namespace flatlimit {

/// One component of a chain: Y with its divisor coordinate y, or Δ_k with
/// its fibre coordinate w_k. Coordinate 0 faces the next component (or the
/// open end); Δ_k meets the previous component at w_k = ∞.
struct ChainComponent {
  Ideal ideal;
  std::string coord;
};

/// Restriction to {coord = 0}.
inline Ideal near_image(const ChainComponent& c) {
  return detail::specialize_ideal(c.ideal, c.coord, Rational(0));
}

/// The component in the chart u = 1/coord, in the same ring with the
/// coordinate renamed.
inline Ideal far_chart(const ChainComponent& c, std::string& u_name) {
  return detail::chart_at_infinity(c.ideal, "", c.coord, u_name);
}

/// Restriction to {coord = ∞}.
inline Ideal far_image(const ChainComponent& c) {
  std::string u;
  const Ideal far = far_chart(c, u);
  return detail::specialize_ideal(far, u, Rational(0));
}

class ChainIdeal {
 public:
  ChainIdeal(std::vector<ChainComponent> components, std::optional<Ideal> end_data)
      : components_(std::move(components)), end_data_(std::move(end_data)) {}

  const std::vector<ChainComponent>& components() const noexcept { return components_; }
  const ChainComponent& component(std::size_t k) const { return components_.at(k); }
  const std::optional<Ideal>& end_data() const noexcept { return end_data_; }
  /// Number of inserted Δ components.
  std::size_t length() const noexcept { return components_.empty() ? 0 : components_.size() - 1; }

 private:
  std::vector<ChainComponent> components_;
  std::optional<Ideal> end_data_;
};

/// Validates per-component relativeness and matching restrictions across
/// every shared divisor.
inline ChainIdeal build_chain(std::vector<ChainComponent> components, std::optional<Ideal> end_data = std::nullopt) {
  if (components.empty()) throw Error(ErrorCode::RoleError, "a chain needs at least the Y component");
  for (std::size_t k = 0; k < components.size(); ++k) {
    const auto& c = components[k];
    bool relative = is_relative(c.ideal, c.coord);
    if (relative && k > 0) {
      std::string u;
      relative = is_relative(far_chart(c, u), u);
    }
    if (!relative)
      throw Error(ErrorCode::NotRelative, "component " + std::to_string(k) + " is not relative at its divisors", k);
  }
  for (std::size_t k = 0; k + 1 < components.size(); ++k) {
    const Ideal here = near_image(components[k]);
    const Ideal there = far_image(components[k + 1]);
    require_same_ring(here.ring(), there.ring());
    if (!ideals_equal(here, there))
      throw Error(ErrorCode::DivisorMismatch,
                  "components " + std::to_string(k) + " and " + std::to_string(k + 1) + " restrict to " +
                      to_string(here) + " and " + to_string(there),
                  k);
  }
  if (end_data) {
    const std::size_t last = components.size() - 1;
    const Ideal here = near_image(components[last]);
    require_same_ring(here.ring(), end_data->ring());
    if (!ideals_equal(here, *end_data))
      throw Error(ErrorCode::DivisorMismatch,
                  "last component restricts to " + to_string(here) + ", end data is " + to_string(*end_data), last);
  }
  return ChainIdeal(std::move(components), std::move(end_data));
}

inline bool is_trivial_component(const ChainComponent& c) {
  return ideals_equal(c.ideal, pullback_from_divisor(near_image(c), c.ideal.ring()));
}

/// No Δ component is the pullback of its divisor restriction.
inline bool is_stable(const ChainIdeal& chain) {
  for (std::size_t k = 1; k < chain.components().size(); ++k)
    if (is_trivial_component(chain.component(k))) return false;
  return true;
}

/// Element (σ1..σn) of the torus G[n] acting on the chain and on the base
/// coordinates (t1..t_{n+1}).
class GroupElement {
 public:
  explicit GroupElement(std::vector<Rational> sigma) : sigma_(std::move(sigma)) {
    for (const auto& s : sigma_)
      if (s.is_zero()) throw Error(ErrorCode::ZeroDivisorArgument, "group element entries must be nonzero");
  }

  const std::vector<Rational>& sigma() const noexcept { return sigma_; }
  std::size_t size() const noexcept { return sigma_.size(); }

  /// (σ1·t1, σ1⁻¹σ2·t2, ..., σn⁻¹·t_{n+1}).
  std::vector<Rational> act_on_base(const std::vector<Rational>& t) const {
    if (t.size() != sigma_.size() + 1)
      throw Error(ErrorCode::LengthMismatch, "base point needs " + std::to_string(sigma_.size() + 1) + " coordinates");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < t.size(); ++i) {
      Rational f(1);
      if (i < sigma_.size()) f = f * sigma_[i];
      if (i > 0) f = f / sigma_[i - 1];
      out.push_back(f * t[i]);
    }
    return out;
  }

 private:
  std::vector<Rational> sigma_;
};

inline Rational base_product(const std::vector<Rational>& t) {
  Rational p(1);
  for (const auto& v : t) p = p * v;
  return p;
}

/// Pulls every Δ_k back along the dilation w_k ↦ σ_k⁻¹·w_k.
inline ChainIdeal apply_group_element(const ChainIdeal& chain, const GroupElement& g) {
  if (g.size() != chain.length())
    throw Error(ErrorCode::LengthMismatch, "group element has " + std::to_string(g.size()) + " entries for " +
                                               std::to_string(chain.length()) + " components");
  std::vector<Rational> base;
  for (std::size_t i = 0; i <= g.size(); ++i) base.emplace_back(static_cast<long>(i) + 2);
  if (base_product(g.act_on_base(base)) != base_product(base))
    throw Error(ErrorCode::VerificationFailure, "group action does not preserve t1···t_{n+1}");

  std::vector<ChainComponent> out{chain.component(0)};
  for (std::size_t k = 1; k < chain.components().size(); ++k) {
    const auto& c = chain.component(k);
    const Polynomial image = Polynomial::variable(c.ideal.ring(), c.coord).scaled(g.sigma()[k - 1].inverse());
    out.push_back({c.ideal.transform(c.ideal.ring(), [&](const Polynomial& p) { return substitute(p, c.coord, image); }),
                   c.coord});
  }
  return ChainIdeal(std::move(out), chain.end_data());
}

struct ReductionStep {
  std::size_t component;     // index of the inserted Δ
  WeightExponent exponent;   // escape rate in the previous component's chart
  unsigned long q;           // base-change degree of this step
  Rational cumulative;       // exponent over the original parameter
  LimitRecord record;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  unsigned long total_base_change = 1;
};

struct Reduction {
  ChainIdeal chain;
  ReductionTrace trace;
};

/// Semistable reduction of a flat zero-dimensional family whose generic
/// fibre misses D: one Δ per escape rate, outermost first.
inline Reduction semistable_reduce(const FamilyIdeal& family, ScanOptions options = {}) {
  const Colength generic = colength(fiber_at(family, Rational(1)));
  if (!generic || !colength(fiber_at_zero(family)))
    throw Error(ErrorCode::NonZeroDimensional, "semistable reduction is implemented for zero-dimensional families");
  const auto cert = family_flatness(family);
  if (cert.checked && !cert.passed)
    throw Error(ErrorCode::FlatnessViolation, "special and generic fibre colengths disagree");
  if (!is_relative(fiber_at(family, Rational(1)), family.divisor()) &&
      !is_relative(fiber_at(family, Rational(2)), family.divisor()))
    throw Error(ErrorCode::NotRelativeInput, "generic fibre meets the divisor");

  const Ideal special = fiber_at_zero(family);
  ReductionTrace trace;
  if (is_relative(special, family.divisor()))
    return {build_chain({{special, family.divisor()}}), std::move(trace)};

  std::vector<ChainComponent> components{{saturate(special, family.divisor()), family.divisor()}};
  FamilyIdeal current = family;
  Rational cumulative(0);
  for (std::size_t k = 1;; ++k) {
    if (k > *generic)
      throw Error(ErrorCode::VerificationFailure, "chain longer than the generic colength");
    const ChartNames names{"s" + std::to_string(k), "w" + std::to_string(k)};
    EscapeStep step = first_escape_exponent(current, options, names);
    const unsigned long q = step.exponent.denominator();
    cumulative = cumulative + step.exponent.value() / Rational(static_cast<long>(trace.total_base_change));
    trace.total_base_change *= q;
    const LimitRecord& rec = step.record;
    components.push_back({saturate(rec.limit, rec.coord), rec.coord});
    const bool done = is_relative(rec.limit, rec.coord);
    FamilyIdeal next(rec.saturated, rec.param, rec.coord);
    trace.steps.push_back({k, step.exponent, q, cumulative, std::move(step.record)});
    if (done) break;
    current = std::move(next);
  }
  ChainIdeal chain = build_chain(std::move(components));
  if (!is_stable(chain)) throw Error(ErrorCode::VerificationFailure, "reduction produced a trivial component");
  return {std::move(chain), std::move(trace)};
}

/// Re-derives each recorded limit directly from the original family at the
/// cumulative exponent; true iff every limit prints identically.
inline bool replay_trace(const FamilyIdeal& family, const ReductionTrace& trace) {
  for (const auto& step : trace.steps) {
    const auto rec = flat_limit(family, WeightExponent(step.cumulative), {step.record.param, step.record.coord});
    if (!(rec.limit.ring() == step.record.limit.ring())) return false;
    if (to_string(rec.limit) != to_string(step.record.limit)) return false;
  }
  return true;
}

}  // namespace flatlimit
