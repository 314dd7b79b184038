#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <future>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flatlimit/errors.hpp"
#include "flatlimit/ideal.hpp"

namespace flatlimit {

/// Positive rational exponent p/q of the substitution y = t^(p/q)·w.
class WeightExponent {
 public:
  explicit WeightExponent(Rational a) : a_(std::move(a)) {
    if (a_.sign() <= 0) throw Error(ErrorCode::RoleError, "weight exponent must be positive, got " + a_.to_string());
  }
  WeightExponent(long p, long q) : WeightExponent(Rational(mpz_class(p), mpz_class(q))) {}

  const Rational& value() const noexcept { return a_; }
  unsigned long numerator() const { return a_.numerator().get_ui(); }
  unsigned long denominator() const { return a_.denominator().get_ui(); }
  std::string to_string() const { return a_.to_string(); }

  friend bool operator==(const WeightExponent&, const WeightExponent&) = default;
  friend auto operator<=>(const WeightExponent& a, const WeightExponent& b) { return a.a_ <=> b.a_; }

 private:
  Rational a_;
};

/// Ideal of a family over k[t] inside k[t, y, x1..xd], with D = {y = 0}.
class FamilyIdeal {
 public:
  FamilyIdeal(Ideal ideal, std::string param, std::string divisor)
      : ideal_(std::move(ideal)), param_(std::move(param)), divisor_(std::move(divisor)) {
    const Ring& r = ideal_.ring();
    if (!r.contains(param_)) throw Error(ErrorCode::RoleError, "parameter variable '" + param_ + "' not in ring");
    if (!r.contains(divisor_)) throw Error(ErrorCode::RoleError, "divisor variable '" + divisor_ + "' not in ring");
    if (param_ == divisor_) throw Error(ErrorCode::RoleError, "parameter and divisor roles must differ");
  }

  const Ideal& ideal() const noexcept { return ideal_; }
  const Ring& ring() const noexcept { return ideal_.ring(); }
  const std::string& param() const noexcept { return param_; }
  const std::string& divisor() const noexcept { return divisor_; }
  std::vector<std::string> transverse() const {
    std::vector<std::string> out;
    for (const auto& n : ring().names())
      if (n != param_ && n != divisor_) out.push_back(n);
    return out;
  }

 private:
  Ideal ideal_;
  std::string param_;
  std::string divisor_;
};

/// Observable flatness data for a zero-dimensional family: the special
/// fibre in the affine chart plus the part escaping to the divisor
/// coordinate's infinity must carry the generic colength.
struct FlatnessCertificate {
  bool checked = false;  // false when the generic fibre is not zero-dimensional
  bool passed = true;
  Colength special;      // colength of the fibre at 0 in the affine chart
  Colength at_infinity;  // colength supported at coordinate = ∞
  Colength generic;      // colength at the sample parameter value
  Rational sample = Rational(1);
};

struct LimitRecord {
  WeightExponent exponent;
  std::string param;  // base-change parameter s, t = s^q
  std::string coord;  // chart coordinate w, y = s^p·w
  Ideal substituted;  // I(a) in (s, w, x..)
  Ideal saturated;    // Ĩ(a)
  Ideal limit;        // Ĩ(a)₀ in (w, x..)
  Ideal divisor_image_of_limit;  // Ĩ(a)₀ restricted to w = 0, in (x..)
  FlatnessCertificate certificate;
};

namespace detail {

inline Ideal specialize_ideal(const Ideal& ideal, const std::string& var, const Rational& value) {
  const Ring target = ideal.ring().without(var);
  return ideal.transform(target, [&](const Polynomial& g) { return specialize(g, var, value); });
}

// Chart at coord = ∞: coord ↦ 1/u, cleared of denominators, then closed up
// by saturating with param·u (just u when param is empty).
inline Ideal chart_at_infinity(const Ideal& ideal, const std::string& param, const std::string& coord,
                               std::string& u_name) {
  const Ring& ring = ideal.ring();
  std::vector<std::string> others;
  for (const auto& n : ring.names())
    if (n != coord) others.push_back(n);
  u_name = Ring(others).fresh_name("u");
  const Ring target = ring.renamed(coord, u_name);
  const std::size_t c = ring.index(coord);
  std::vector<Polynomial> gens;
  for (const auto& g : ideal.generators()) {
    const Exponent d = g.degree_in(c);
    Polynomial::Terms terms;
    for (const auto& [m, coeff] : g.terms()) {
      Monomial n = m;
      n[c] = d - m[c];
      terms.emplace(std::move(n), coeff);
    }
    gens.emplace_back(target, std::move(terms));
  }
  Polynomial su = Polynomial::variable(target, u_name);
  if (!param.empty()) su = su * Polynomial::variable(target, param);
  return saturate(Ideal(target, std::move(gens)), su);
}

inline Colength subtract(const Colength& a, const Colength& b) {
  if (!a || !b) return std::nullopt;
  return *a - *b;
}

}  // namespace detail

/// I₀ = I ⊗ k: generators under t ↦ 0, in (y, x..).
inline Ideal fiber_at_zero(const FamilyIdeal& family) {
  return detail::specialize_ideal(family.ideal(), family.param(), Rational(0));
}

inline Ideal fiber_at(const FamilyIdeal& family, const Rational& value) {
  return detail::specialize_ideal(family.ideal(), family.param(), value);
}

/// I^D: generators under y ↦ 0, in (t, x..).
inline Ideal divisor_image(const FamilyIdeal& family) {
  return detail::specialize_ideal(family.ideal(), family.divisor(), Rational(0));
}

/// t-adic valuation n of b and its leading coefficient b₀ (free of t).
inline std::pair<Exponent, Polynomial> t_leading_coefficient(const Polynomial& b, std::string_view param) {
  if (b.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "leading coefficient of the zero polynomial");
  const std::size_t t = b.ring().index(param);
  Exponent n = std::numeric_limits<Exponent>::max();
  for (const auto& [m, c] : b.terms()) n = std::min(n, m[t]);
  const Ring target = b.ring().without(std::string(param));
  Polynomial::Terms lead;
  for (const auto& [m, c] : b.terms()) {
    if (m[t] != n) continue;
    Monomial k = m;
    k[t] = 0;
    lead.emplace(std::move(k), c);
  }
  return {n, Polynomial(b.ring(), std::move(lead)).in_ring(target)};
}

/// L(J): the ideal of t-leading coefficients, i.e. (J : t^∞) at t = 0.
inline Ideal initial_ideal_t(const Ideal& ideal, const std::string& param) {
  return detail::specialize_ideal(saturate(ideal, param), param, Rational(0));
}

/// (I₀ : y) = I₀.
inline bool is_relative(const Ideal& ideal, const std::string& divisor) {
  return ideals_equal(ideal_quotient(ideal, divisor), ideal);
}

/// Multiplicity of the special fibre along {y = 0} and at y = ∞, compared
/// with the colength of the generic fibre (t = 1, re-checked at t = 2).
inline FlatnessCertificate flatness_certificate(const Ideal& ideal, const std::string& param,
                                                const std::string& coord, const Ideal& special_fibre) {
  FlatnessCertificate cert;
  for (long sample : {1L, 2L}) {
    const Colength generic = colength(detail::specialize_ideal(ideal, param, Rational(sample)));
    if (!generic) return cert;  // positive-dimensional: accepted on the caller's assertion
    if (!cert.checked) {
      cert.checked = true;
      cert.special = colength(special_fibre);
      std::string u;
      const Ideal far = detail::specialize_ideal(detail::chart_at_infinity(ideal, param, coord, u), param, Rational(0));
      cert.at_infinity = detail::subtract(colength(far), colength(saturate(far, u)));
    }
    cert.generic = generic;
    cert.sample = Rational(sample);
    cert.passed = cert.special && cert.at_infinity && *cert.special + *cert.at_infinity == *generic;
    if (cert.passed) return cert;
  }
  return cert;
}

inline FlatnessCertificate family_flatness(const FamilyIdeal& family) {
  return flatness_certificate(family.ideal(), family.param(), family.divisor(), fiber_at_zero(family));
}

/// Relativeness of the family: I^D₀ == L(I^D). Requires a flat family; for
/// zero-dimensional families the colength certificate is enforced.
inline bool is_relative_family(const FamilyIdeal& family) {
  const auto cert = family_flatness(family);
  if (cert.checked && !cert.passed)
    throw Error(ErrorCode::FlatnessViolation,
                "fibre colengths disagree: special " + to_string(cert.special) + " + at infinity " +
                    to_string(cert.at_infinity) + " vs generic " + to_string(cert.generic));
  const Ideal image = divisor_image(family);
  const Ideal image_at_zero = detail::specialize_ideal(image, family.param(), Rational(0));
  return ideals_equal(image_at_zero, initial_ideal_t(image, family.param()));
}

/// Variable names used for the chart of a weighted substitution.
struct ChartNames {
  std::string param = "s";
  std::string coord = "w";
};

namespace detail {

inline ChartNames resolve_names(const FamilyIdeal& family, ChartNames names) {
  const Ring transverse(family.transverse());
  names.param = transverse.fresh_name(names.param);
  names.coord = Ring(family.transverse()).with_front(names.param).fresh_name(names.coord);
  return names;
}

}  // namespace detail

/// I(a): generators under t ↦ s^q, y ↦ s^p·w, in the ring with t, y renamed
/// to s, w.
inline Ideal weight_substitute(const FamilyIdeal& family, const WeightExponent& a, ChartNames names = {}) {
  names = detail::resolve_names(family, names);
  const Ring& ring = family.ring();
  const Ring target = ring.renamed(family.param(), names.param).renamed(family.divisor(), names.coord);
  std::vector<Polynomial> images;
  const Polynomial s = Polynomial::variable(target, names.param);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (ring.name(i) == family.param()) {
      images.push_back(s.pow(static_cast<long>(a.denominator())));
    } else if (ring.name(i) == family.divisor()) {
      images.push_back(s.pow(static_cast<long>(a.numerator())) * Polynomial::variable(target, names.coord));
    } else {
      images.push_back(Polynomial::variable(target, ring.name(i)));
    }
  }
  return family.ideal().transform(target, [&](const Polynomial& g) { return g.map_variables(target, images); });
}

/// Ĩ(a) = (I(a) : s^∞) and its special fibre Ĩ(a)₀.
inline LimitRecord flat_limit(const FamilyIdeal& family, const WeightExponent& a, ChartNames names = {}) {
  names = detail::resolve_names(family, names);
  Ideal substituted = weight_substitute(family, a, names);
  Ideal saturated = saturate(substituted, names.param);
  Ideal limit = detail::specialize_ideal(saturated, names.param, Rational(0));
  Ideal image = detail::specialize_ideal(limit, names.coord, Rational(0));
  FlatnessCertificate cert = flatness_certificate(saturated, names.param, names.coord, limit);
  if (cert.checked && !cert.passed)
    throw Error(ErrorCode::FlatnessCertificateFailure,
                "limit at a=" + a.to_string() + ": colength " + to_string(cert.special) + " + " +
                    to_string(cert.at_infinity) + " at infinity, generic " + to_string(cert.generic));
  return LimitRecord{a,
                     names.param,
                     names.coord,
                     std::move(substituted),
                     std::move(saturated),
                     std::move(limit),
                     std::move(image),
                     std::move(cert)};
}

/// q*K: the ideal K ⊂ k[x..] extended to k[w, x..] (the ring of `target`).
inline Ideal pullback_from_divisor(const Ideal& ideal, const Ring& target) { return ideal.in_ring(target); }

/// I^D_{t→0}.
inline Ideal divisor_initial_ideal(const FamilyIdeal& family) {
  return initial_ideal_t(divisor_image(family), family.param());
}

inline bool is_pullback_limit(const LimitRecord& record, const Ideal& divisor_initial) {
  return ideals_equal(record.limit, pullback_from_divisor(divisor_initial, record.limit.ring()));
}

inline bool is_trivial_limit(const FamilyIdeal& family, const WeightExponent& a) {
  return is_pullback_limit(flat_limit(family, a), divisor_initial_ideal(family));
}

/// Classification of the flat limit at one scanned exponent.
struct ScanPoint {
  Rational a;
  bool wall = false;      // drawn from the candidate wall set (vs. a midpoint)
  bool relative = false;  // relative to {w = 0}
  bool trivial = false;   // equal to q*(I^D_{t→0})
  bool interior = false;  // some support off {w = 0}
  Colength at_infinity;
};

struct ScanOptions {
  unsigned jobs = 1;
  bool use_walls = true;  // false forces the Farey fallback (testing)
};

struct CriticalExponent {
  WeightExponent a_star;
  LimitRecord record;
  bool trivial_above = false;  // is_trivial_limit at a* + 1
  bool used_fallback = false;
  std::vector<ScanPoint> scan;
};

namespace detail {

inline void add_walls_from(const std::vector<Polynomial>& polys, std::size_t t, std::size_t y,
                           std::set<Rational>& walls) {
  for (const auto& g : polys) {
    std::vector<const Monomial*> terms;
    for (const auto& [m, c] : g.terms()) terms.push_back(&m);
    for (const Monomial* u : terms)
      for (const Monomial* v : terms) {
        if ((*v)[y] <= (*u)[y]) continue;
        const long num = static_cast<long>((*u)[t]) - static_cast<long>((*v)[t]);
        if (num <= 0) continue;
        walls.insert(Rational(mpz_class(num), mpz_class(static_cast<long>((*v)[y] - (*u)[y]))));
      }
  }
}

inline Exponent max_divisor_degree(const FamilyIdeal& family) {
  Exponent d = 1;
  const std::size_t y = family.ring().index(family.divisor());
  for (const auto& g : family.ideal().generators()) d = std::max(d, g.degree_in(y));
  for (const auto& g : family.ideal().canonical_generators()) d = std::max(d, g.degree_in(y));
  return d;
}

// Rationals in the open interval (lo, hi) with denominator ≤ qmax, ascending.
inline std::vector<Rational> farey_between(const Rational& lo, const Rational& hi, Exponent qmax) {
  std::set<Rational> out;
  for (long q = 1; q <= static_cast<long>(qmax); ++q) {
    const mpz_class qz(q);
    mpz_class p = (lo.numerator() * qz) / lo.denominator();  // floor for positive lo
    for (;; ++p) {
      Rational r(p, qz);
      if (r <= lo) continue;
      if (r >= hi) break;
      out.insert(r);
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace detail

/// Exponent differences (α_t(u) − α_t(v)) / (α_y(v) − α_y(u)) over term pairs
/// of the generators and of reduced bases under a t-first block order,
/// grevlex and lex.
inline std::vector<Rational> candidate_walls(const FamilyIdeal& family) {
  const Ring& ring = family.ring();
  const std::size_t t = ring.index(family.param());
  const std::size_t y = ring.index(family.divisor());
  std::set<Rational> walls;
  detail::add_walls_from(family.ideal().generators(), t, y, walls);
  std::vector<bool> t_first(ring.size(), false);
  t_first[t] = true;
  for (const auto& order : {MonomialOrder::block(t_first, MonomialOrder::grevlex()), MonomialOrder::grevlex(),
                             MonomialOrder::lex()})
    detail::add_walls_from(family.ideal().basis(order).elements(), t, y, walls);
  return {walls.begin(), walls.end()};
}

namespace detail {

inline std::vector<LimitRecord> evaluate_limits(const FamilyIdeal& family, const std::vector<Rational>& exponents,
                                                const ChartNames& names, unsigned jobs) {
  std::vector<std::optional<LimitRecord>> slots(exponents.size());
  if (jobs <= 1 || exponents.size() <= 1) {
    for (std::size_t i = 0; i < exponents.size(); ++i) slots[i] = flat_limit(family, WeightExponent(exponents[i]), names);
  } else {
    const EngineLimits limits = current_engine_limits();
    for (std::size_t start = 0; start < exponents.size(); start += jobs) {
      std::vector<std::future<LimitRecord>> batch;
      for (std::size_t i = start; i < std::min(exponents.size(), start + jobs); ++i)
        batch.push_back(std::async(std::launch::async, [&, i, limits] {
          ScopedEngineLimits guard(limits);
          return flat_limit(family, WeightExponent(exponents[i]), names);
        }));
      for (std::size_t k = 0; k < batch.size(); ++k) slots[start + k] = batch[k].get();
    }
  }
  std::vector<LimitRecord> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline ScanPoint classify(const LimitRecord& record, const Ideal& divisor_initial, bool wall) {
  ScanPoint p;
  p.a = record.exponent.value();
  p.wall = wall;
  p.relative = is_relative(record.limit, record.coord);
  p.trivial = is_pullback_limit(record, divisor_initial);
  p.interior = !saturate(record.limit, record.coord).is_unit();
  p.at_infinity = record.certificate.at_infinity;
  return p;
}

// Walls, a point below the first, midpoints, and a point past the last.
inline std::vector<std::pair<Rational, bool>> scan_grid(const std::vector<Rational>& walls) {
  std::vector<std::pair<Rational, bool>> grid;
  if (walls.empty()) return grid;
  grid.emplace_back(walls.front() / Rational(2), false);
  for (std::size_t i = 0; i < walls.size(); ++i) {
    if (i > 0) grid.emplace_back((walls[i - 1] + walls[i]) / Rational(2), false);
    grid.emplace_back(walls[i], true);
  }
  grid.emplace_back(walls.back() + Rational(1), false);
  return grid;
}

inline void require_escape(const FamilyIdeal& family) {
  if (is_relative_family(family))
    throw Error(ErrorCode::NoEscape, "the family is already relative at t = 0; no component needs inserting");
}

}  // namespace detail

/// The unique a* whose flat limit is relative to {w = 0} and not the
/// pullback of I^D_{t→0}. Scans the candidate walls and the midpoints
/// between them; falls back to a Farey search if the wall set misses a*.
inline CriticalExponent critical_exponent(const FamilyIdeal& family, ScanOptions options = {},
                                          ChartNames names = {}) {
  detail::require_escape(family);
  names = detail::resolve_names(family, names);
  const Ideal divisor_initial = divisor_initial_ideal(family);
  const auto walls = options.use_walls ? candidate_walls(family) : std::vector<Rational>{};
  const auto grid = detail::scan_grid(walls);

  std::vector<Rational> exponents;
  for (const auto& [a, wall] : grid) exponents.push_back(a);
  auto records = detail::evaluate_limits(family, exponents, names, options.jobs);

  std::vector<ScanPoint> scan;
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < records.size(); ++i) {
    scan.push_back(detail::classify(records[i], divisor_initial, grid[i].second));
    if (scan.back().relative && !scan.back().trivial) hits.push_back(i);
  }
  if (hits.size() > 1)
    throw Error(ErrorCode::VerificationFailure,
                "more than one scanned exponent has a relative non-pullback limit");

  std::optional<std::size_t> chosen;
  bool fallback = false;
  if (hits.size() == 1) {
    chosen = hits.front();
  } else {
    // Bracket a* between the last non-relative and first trivial sample.
    Rational lo(0);
    std::optional<Rational> hi;
    for (const auto& p : scan) {
      if (!p.relative) lo = std::max(lo, p.a);
      if (p.trivial && (!hi || p.a < *hi)) hi = p.a;
    }
    if (!hi) {
      Rational probe = std::max(lo, Rational(1));
      for (int k = 0; k < 64 && !hi; ++k) {
        probe = probe * Rational(2);
        auto rec = flat_limit(family, WeightExponent(probe), names);
        auto p = detail::classify(rec, divisor_initial, false);
        scan.push_back(p);
        if (p.trivial) hi = probe;
        else if (!p.relative) lo = probe;
      }
      if (!hi) throw Error(ErrorCode::CandidateExhaustion, "no trivial limit found for large exponents");
    }
    auto fractions = detail::farey_between(lo, *hi, detail::max_divisor_degree(family) * 2);
    // Relativeness is monotone in a: binary search for the first relative point.
    std::size_t left = 0;
    std::size_t right = fractions.size();
    std::vector<std::optional<LimitRecord>> cache(fractions.size());
    auto relative_at = [&](std::size_t k) {
      if (!cache[k]) cache[k] = flat_limit(family, WeightExponent(fractions[k]), names);
      return is_relative(cache[k]->limit, names.coord);
    };
    while (left < right) {
      const std::size_t mid = (left + right) / 2;
      if (relative_at(mid)) right = mid;
      else left = mid + 1;
    }
    if (left < fractions.size()) {
      relative_at(left);
      auto p = detail::classify(*cache[left], divisor_initial, false);
      if (p.relative && !p.trivial) {
        scan.push_back(p);
        records.push_back(std::move(*cache[left]));
        chosen = records.size() - 1;
        fallback = true;
      }
    }
    if (!chosen)
      throw Error(ErrorCode::CandidateExhaustion,
                  "no scanned exponent yields a relative non-pullback limit in (" + lo.to_string() + ", " +
                      hi->to_string() + ")");
  }

  const Rational a_star = records[*chosen].exponent.value();
  const auto above = flat_limit(family, WeightExponent(a_star + Rational(1)), names);
  std::sort(scan.begin(), scan.end(), [](const ScanPoint& x, const ScanPoint& y) { return x.a < y.a; });
  return CriticalExponent{WeightExponent(a_star), std::move(records[*chosen]),
                          is_pullback_limit(above, divisor_initial), fallback, std::move(scan)};
}

/// Smallest escape rate: the least exponent at which part of the special
/// fibre along D lands off {w = 0}. Equals a* when every escaping point
/// moves at one rate.
struct EscapeStep {
  WeightExponent exponent;
  LimitRecord record;
  bool used_fallback = false;
};

inline EscapeStep first_escape_exponent(const FamilyIdeal& family, ScanOptions options = {}, ChartNames names = {}) {
  detail::require_escape(family);
  names = detail::resolve_names(family, names);
  const Ideal special = fiber_at_zero(family);
  const Colength on_divisor = detail::subtract(colength(special), colength(saturate(special, family.divisor())));
  const auto generic = family_flatness(family).generic;
  if (!on_divisor || !generic)
    throw Error(ErrorCode::NonZeroDimensional, "escape rates are only tracked for zero-dimensional families");
  const std::size_t staying = *generic - *on_divisor;

  const auto walls = options.use_walls ? candidate_walls(family) : std::vector<Rational>{};
  const auto grid = detail::scan_grid(walls);
  std::vector<Rational> exponents;
  for (const auto& [a, wall] : grid) exponents.push_back(a);
  auto records = detail::evaluate_limits(family, exponents, names, options.jobs);
  // Before the first escape rate only non-escaping points leave the chart.
  auto intact = [&](const LimitRecord& r) { return r.certificate.at_infinity == Colength(staying); };
  auto has_interior = [&](const LimitRecord& r) { return !saturate(r.limit, r.coord).is_unit(); };

  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!has_interior(records[i])) continue;
    if (intact(records[i])) return EscapeStep{records[i].exponent, std::move(records[i]), false};
    break;
  }
  // Missed wall: the exponent is the last point where nothing has escaped
  // past the chart, searched among small-denominator rationals.
  Rational lo(0);
  Rational hi = exponents.empty() ? Rational(static_cast<long>(detail::max_divisor_degree(family)) * 4) : exponents.back();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (intact(records[i]) && !has_interior(records[i])) lo = std::max(lo, exponents[i]);
    if (!intact(records[i])) hi = std::min(hi, exponents[i]);
  }
  for (const auto& a : detail::farey_between(lo, hi, detail::max_divisor_degree(family) * 2)) {
    auto rec = flat_limit(family, WeightExponent(a), names);
    if (has_interior(rec) && intact(rec)) return EscapeStep{rec.exponent, std::move(rec), true};
  }
  throw Error(ErrorCode::CandidateExhaustion, "no escape exponent found in (" + lo.to_string() + ", " +
                                                   hi.to_string() + ")");
}

}  // namespace flatlimit
