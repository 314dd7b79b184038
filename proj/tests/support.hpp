#pragma once

// Shared test fixtures: a seeded family corpus whose escape behaviour is
// known from its construction, and engine-independent oracles.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "flatlimit.hpp"

namespace testing_support {

using namespace flatlimit;

/// y-factor of a corpus family: y^e − c·t^k·m(x), with e ∈ {1, 2} and m = 1
/// whenever e = 2. The branch escapes at rate k/e (k = 0: stays put).
struct Factor {
  unsigned e = 1;
  long c = 1;
  unsigned k = 0;
  std::vector<unsigned> m;  // exponent of each transverse variable
};

/// Transverse constraint g(x_i) = Π (x_i − b) over the listed roots.
struct Constraint {
  std::size_t var;
  std::vector<long> roots;
};

struct CorpusFamily {
  Ring ring;
  std::vector<Factor> factors;
  std::vector<Constraint> constraints;

  std::vector<std::string> transverse() const {
    return std::vector<std::string>(ring.names().begin() + 2, ring.names().end());
  }

  Polynomial factor_poly(const Factor& f, const Ring& r, const std::string& y, const std::string& t) const {
    Polynomial p = Polynomial::variable(r, y, f.e);
    Polynomial rhs = Polynomial::constant(r, Rational(f.c));
    if (f.k) rhs = rhs * Polynomial::variable(r, t, f.k);
    const auto xs = transverse();
    for (std::size_t i = 0; i < f.m.size(); ++i)
      if (f.m[i]) rhs = rhs * Polynomial::variable(r, xs[i], f.m[i]);
    return p - rhs;
  }

  std::vector<Polynomial> constraint_polys(const Ring& r) const {
    std::vector<Polynomial> out;
    const auto xs = transverse();
    for (const auto& c : constraints) {
      Polynomial g = Polynomial::constant(r, Rational(1));
      for (long b : c.roots) g = g * (Polynomial::variable(r, xs[c.var]) - Polynomial::constant(r, Rational(b)));
      out.push_back(g);
    }
    return out;
  }

  Ideal ideal() const {
    Polynomial f = Polynomial::constant(ring, Rational(1));
    for (const auto& fac : factors) f = f * factor_poly(fac, ring, "y", "t");
    std::vector<Polynomial> gens{f};
    for (auto& g : constraint_polys(ring)) gens.push_back(g);
    return Ideal(ring, gens);
  }

  FamilyIdeal family() const { return FamilyIdeal(ideal(), "t", "y"); }

  std::size_t transverse_colength() const {
    std::size_t n = 1;
    for (const auto& c : constraints) n *= c.roots.size();
    return n;
  }
  std::size_t generic_colength() const {
    std::size_t d = 0;
    for (const auto& f : factors) d += f.e;
    return d * transverse_colength();
  }

  static Rational rate(const Factor& f) {
    return Rational(mpz_class(static_cast<long>(f.k)), mpz_class(static_cast<long>(f.e)));
  }
  bool escapes() const {
    return std::any_of(factors.begin(), factors.end(), [](const Factor& f) { return f.k > 0; });
  }
  /// Distinct positive escape rates, ascending.
  std::vector<Rational> rates() const {
    std::set<Rational> r;
    for (const auto& f : factors)
      if (f.k) r.insert(rate(f));
    return {r.begin(), r.end()};
  }
  std::optional<Rational> max_rate() const {
    auto r = rates();
    if (r.empty()) return std::nullopt;
    return r.back();
  }

  /// Expected flat limit at exponent a, in the chart ring (coord, x..):
  /// branches escaping at rate a land at coord^e = c·m(x); faster branches
  /// land on {coord = 0}; slower ones leave the chart.
  Ideal expected_limit(const Rational& a, const std::string& coord) const {
    const Ring chart = ring.without("t").renamed("y", coord);
    Polynomial f = Polynomial::constant(chart, Rational(1));
    for (const auto& fac : factors) {
      const Rational r = rate(fac);
      if (r == a) {
        Factor stripped = fac;
        stripped.k = 0;
        f = f * factor_poly(stripped, chart, coord, "");
      } else if (r > a) {
        f = f * Polynomial::variable(chart, coord, fac.e);
      }
    }
    std::vector<Polynomial> gens{f};
    for (auto& g : constraint_polys(chart)) gens.push_back(g);
    return Ideal(chart, gens);
  }

  /// Special fibre with the escaping branches removed: the Y part.
  Ideal expected_residual() const {
    const Ring fibre = ring.without("t");
    Polynomial f = Polynomial::constant(fibre, Rational(1));
    for (const auto& fac : factors)
      if (!fac.k) f = f * factor_poly(fac, fibre, "y", "t");
    std::vector<Polynomial> gens{f};
    for (auto& g : constraint_polys(fibre)) gens.push_back(g);
    return Ideal(fibre, gens);
  }

  std::string describe() const { return to_string(ideal()); }
};

/// Seeded generator of flat zero-dimensional families in (t, y, x1[, x2])
/// with total degree ≤ 6.
inline std::vector<CorpusFamily> make_corpus(std::size_t count, std::uint32_t seed = 20240611U) {
  std::mt19937 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto nonzero = [&](int bound) {
    int v = 0;
    while (v == 0) v = pick(-bound, bound);
    return static_cast<long>(v);
  };
  std::vector<CorpusFamily> out;
  while (out.size() < count) {
    const std::size_t d = pick(1, 4) == 1 ? 2 : 1;
    std::vector<std::string> names{"t", "y"};
    for (std::size_t i = 0; i < d; ++i) names.push_back("x" + std::to_string(i + 1));
    CorpusFamily fam{Ring(names), {}, {}};

    const int nf = pick(1, 3);
    for (int i = 0; i < nf; ++i) {
      Factor f;
      if (pick(1, 6) == 1) {
        f.e = 2;
        f.c = nonzero(3);
        if (f.c < 0) f.c = -f.c;  // keeps the special fibre free of complex points
        f.k = static_cast<unsigned>(pick(1, 3));
        f.m.assign(d, 0);
      } else {
        f.e = 1;
        f.c = nonzero(3);
        f.k = static_cast<unsigned>(pick(0, 6) == 0 ? 0 : pick(1, 3));
        f.m.assign(d, 0);
        for (auto& m : f.m) m = static_cast<unsigned>(pick(0, 3) == 0 ? 1 : 0);
      }
      fam.factors.push_back(f);
    }
    for (std::size_t i = 0; i < d; ++i) {
      Constraint c{i, {nonzero(3)}};
      if (d == 1 && pick(1, 3) == 1) {
        long b = nonzero(3);
        while (b == c.roots.front()) b = nonzero(3);
        c.roots.push_back(b);
      }
      fam.constraints.push_back(c);
    }
    std::uint64_t degree = 0;
    const Ideal whole = fam.ideal();
    for (const auto& g : whole.generators()) degree = std::max(degree, g.total_degree());
    if (degree > 6) continue;
    out.push_back(std::move(fam));
  }
  return out;
}

/// Degree-bounded membership: p ∈ I iff p = Σ c_i·g_i with every product of
/// degree ≤ bound. Dense Gaussian elimination over ℚ, independent of the
/// Buchberger engine.
inline bool linear_algebra_member(const Polynomial& p, const std::vector<Polynomial>& gens, unsigned bound) {
  const Ring& ring = p.ring();
  const std::size_t n = ring.size();
  // Every monomial of degree ≤ bound.
  std::vector<Monomial> monos;
  Monomial m(n);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t v, unsigned left) {
    if (v == n) {
      monos.push_back(m);
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      m[v] = e;
      rec(v + 1, left - e);
    }
    m[v] = 0;
  };
  rec(0, bound);
  std::map<Monomial, std::size_t> row;
  for (std::size_t i = 0; i < monos.size(); ++i) row.emplace(monos[i], i);

  std::vector<std::vector<Rational>> cols;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    const auto dg = g.total_degree();
    if (dg > bound) continue;
    for (const auto& shift : monos) {
      if (shift.degree() + dg > bound) continue;
      std::vector<Rational> col(monos.size(), Rational(0));
      for (const auto& [mono, c] : g.terms()) col[row.at(mono * shift)] = c;
      cols.push_back(std::move(col));
    }
  }
  if (p.total_degree() > bound) return false;
  std::vector<Rational> target(monos.size(), Rational(0));
  for (const auto& [mono, c] : p.terms()) target[row.at(mono)] = c;

  // Augmented matrix [cols | target], rows = monomials.
  const std::size_t rows = monos.size();
  const std::size_t ncol = cols.size();
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(ncol + 1, Rational(0)));
  for (std::size_t j = 0; j < ncol; ++j)
    for (std::size_t i = 0; i < rows; ++i) a[i][j] = cols[j][i];
  for (std::size_t i = 0; i < rows; ++i) a[i][ncol] = target[i];

  std::size_t r = 0;
  for (std::size_t c = 0; c < ncol && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    const Rational inv = a[r][c].inverse();
    for (std::size_t k = c; k <= ncol; ++k) a[r][k] = a[r][k] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      const Rational f = a[i][c];
      for (std::size_t k = c; k <= ncol; ++k) a[i][k] = a[i][k] - f * a[r][k];
    }
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (!a[i][ncol].is_zero()) return false;
  return true;
}

/// Random polynomial with coefficients in [-9, 9] and total degree ≤ deg.
inline Polynomial random_polynomial(std::mt19937& rng, const Ring& ring, unsigned deg, int terms) {
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<unsigned> expo(0, deg);
  std::uniform_int_distribution<std::size_t> var(0, ring.size() - 1);
  Polynomial p(ring);
  for (int i = 0; i < terms; ++i) {
    Monomial m(ring.size());
    const unsigned d = expo(rng);
    for (unsigned k = 0; k < d; ++k) ++m[var(rng)];
    p += Polynomial::monomial(ring, m, Rational(coeff(rng)));
  }
  return p;
}


/// Membership instance for the linear-algebra oracle: ≤ 3 variables,
/// generators of degree ≤ 3, and a candidate that is a combination of the
/// generators on even i and a random polynomial on odd i.
struct MembershipInstance {
  std::vector<Polynomial> gens;
  Polynomial candidate;
};

inline MembershipInstance membership_instance(std::mt19937& rng, int i) {
  static const Ring xy{"x", "y"};
  static const Ring xyz{"x", "y", "z"};
  const Ring& r = i % 2 ? xyz : xy;
  std::vector<Polynomial> gens{random_polynomial(rng, r, 3, 3), random_polynomial(rng, r, 2, 3)};
  if (i % 3 == 0) gens.push_back(random_polynomial(rng, r, 3, 2));
  Polynomial p(r);
  if (i % 2 == 0) {
    for (const auto& g : gens) p += random_polynomial(rng, r, 2, 2) * g;
  } else {
    p = random_polynomial(rng, r, 3, 3);
  }
  return {std::move(gens), std::move(p)};
}

/// Random node ideal in (y1, y2, x): an intersection of points on either
/// branch, points or fat points at the node, and curves through the node,
/// with y1·y2 adjoined.
inline NodeIdeal random_node_ideal(std::mt19937& rng) {
  const Ring ring{"y1", "y2", "x"};
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto v = [&](const char* n) { return Polynomial::variable(ring, n); };
  auto k = [&](long c) { return Polynomial::constant(ring, Rational(c)); };
  const Polynomial y1 = v("y1"), y2 = v("y2"), x = v("x");
  const Polynomial node = y1 * y2;
  std::optional<Ideal> acc;
  const int pieces = pick(1, 3);
  for (int i = 0; i < pieces; ++i) {
    const long b = pick(-2, 2);
    long a = pick(-2, 2);
    Ideal piece(ring);
    switch (pick(0, 5)) {
      case 0:  // point on Y1, possibly on the divisor
        piece = Ideal(ring, {y1 - k(a), y2, x - k(b)});
        break;
      case 1:
        piece = Ideal(ring, {y2 - k(a), y1, x - k(b)});
        break;
      case 2:  // fat point at the node
        piece = Ideal(ring, {y1.pow(pick(1, 2)), y2.pow(pick(1, 2)), (x - k(b)).pow(pick(1, 2)), node});
        break;
      case 3:  // curve through the node on both branches
        piece = Ideal(ring, {x - k(b), node});
        break;
      case 4:  // curve on one branch only
        if (a == 0) a = 1;
        piece = Ideal(ring, {x - k(b) - k(a) * y1, y2});
        break;
      default:  // curve crossing the divisor from each side
        if (a == 0) a = 1;
        piece = Ideal(ring, {(x - k(b) - k(a) * y1) * (x - k(b) - k(pick(1, 2)) * y2), node});
        break;
    }
    acc = acc ? intersect(*acc, piece) : piece;
  }
  return NodeIdeal(acc->plus(node), "y1", "y2");
}

/// Relative branch ideal in (y, x): curves through the divisor points
/// x = b, b ∈ divisor, plus points off the divisor.
inline Ideal random_branch(std::mt19937& rng, const std::string& y, const std::vector<long>& divisor) {
  const Ring ring{y, "x"};
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto k = [&](long c) { return Polynomial::constant(ring, Rational(c)); };
  const Polynomial yv = Polynomial::variable(ring, y), x = Polynomial::variable(ring, "x");
  std::optional<Ideal> acc;
  auto add = [&](const Ideal& piece) { acc = acc ? intersect(*acc, piece) : piece; };
  for (long b : divisor) {
    long c = pick(-2, 2);
    add(Ideal(ring, {x - k(b) - k(c) * yv}));
  }
  const int off = pick(0, 2);
  for (int i = 0; i < off; ++i) {
    long a = 0;
    while (a == 0) a = pick(-3, 3);
    add(Ideal(ring, {yv - k(a), x - k(pick(-3, 3))}));
  }
  return acc ? *acc : Ideal::unit(ring);
}

inline std::vector<long> random_divisor_points(std::mt19937& rng) {
  std::set<long> pts;
  const int n = std::uniform_int_distribution<int>(0, 2)(rng);
  while (static_cast<int>(pts.size()) < n) pts.insert(std::uniform_int_distribution<int>(-3, 3)(rng));
  return {pts.begin(), pts.end()};
}

}  // namespace testing_support
