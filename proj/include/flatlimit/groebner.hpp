#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "flatlimit/errors.hpp"
#include "flatlimit/polynomial.hpp"

namespace flatlimit {

/// Per-thread resource guard for the Buchberger loop. A basis element whose
/// total degree exceeds `max_degree` aborts the computation.
struct EngineLimits {
  std::uint64_t max_degree = std::numeric_limits<std::uint64_t>::max();
};

/// Counts of post-hoc S-polynomial certificates, collected while an
/// AuditScope is alive on the current thread.
struct BasisAudit {
  std::size_t bases_checked = 0;
  std::size_t failures = 0;
};

namespace detail {

inline EngineLimits& thread_limits() {
  thread_local EngineLimits limits;
  return limits;
}

inline BasisAudit*& thread_audit() {
  thread_local BasisAudit* audit = nullptr;
  return audit;
}

struct Term {
  Monomial m;
  Rational c;
};

// Terms sorted strictly decreasing under the basis order.
using SortedPoly = std::vector<Term>;

inline SortedPoly to_sorted(const Polynomial& p, const MonomialOrder& order) {
  SortedPoly s;
  s.reserve(p.size());
  for (const auto& [m, c] : p.terms()) s.push_back({m, c});
  std::sort(s.begin(), s.end(), [&](const Term& a, const Term& b) { return order.greater(a.m, b.m); });
  return s;
}

inline Polynomial from_sorted(const Ring& ring, const SortedPoly& s) {
  Polynomial::Terms terms;
  for (const auto& t : s) terms.emplace(t.m, t.c);
  return Polynomial(ring, std::move(terms));
}

// f[from..] - c * m * g, result sorted.
inline SortedPoly subtract_multiple(const SortedPoly& f, std::size_t from, const Rational& c, const Monomial& m,
                                    const SortedPoly& g, const MonomialOrder& order) {
  SortedPoly out;
  out.reserve(f.size() - from + g.size());
  std::size_t i = from;
  std::size_t j = 0;
  while (i < f.size() || j < g.size()) {
    if (j == g.size()) {
      out.push_back(f[i++]);
      continue;
    }
    Monomial gm = g[j].m * m;
    if (i == f.size()) {
      out.push_back({std::move(gm), -(g[j].c * c)});
      ++j;
      continue;
    }
    const int cmp = order.compare(f[i].m, gm);
    if (cmp > 0) {
      out.push_back(f[i++]);
    } else if (cmp < 0) {
      out.push_back({std::move(gm), -(g[j].c * c)});
      ++j;
    } else {
      Rational v = f[i].c - g[j].c * c;
      if (!v.is_zero()) out.push_back({std::move(gm), std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

inline void make_monic(SortedPoly& p) {
  if (p.empty() || p.front().c.is_one()) return;
  const Rational inv = p.front().c.inverse();
  for (auto& t : p) t.c *= inv;
}

// Full reduction of f modulo the polynomials selected by `active`.
inline SortedPoly reduce_full(SortedPoly f, const std::vector<SortedPoly>& basis, const std::vector<bool>& active,
                              const MonomialOrder& order) {
  SortedPoly remainder;
  std::size_t pos = 0;
  while (pos < f.size()) {
    const Term& lead = f[pos];
    std::size_t divisor = basis.size();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (!active[k] || basis[k].empty()) continue;
      if (basis[k].front().m.divides(lead.m)) {
        divisor = k;
        break;
      }
    }
    if (divisor == basis.size()) {
      remainder.push_back(lead);
      ++pos;
      continue;
    }
    const SortedPoly& g = basis[divisor];
    const Rational factor = lead.c / g.front().c;
    const Monomial shift = g.front().m.quotient_of(lead.m);
    f = subtract_multiple(f, pos, factor, shift, g, order);
    pos = 0;
  }
  return remainder;
}

inline SortedPoly s_polynomial(const SortedPoly& f, const SortedPoly& g, const MonomialOrder& order) {
  const Monomial l = lcm(f.front().m, g.front().m);
  const Monomial mf = f.front().m.quotient_of(l);
  const Monomial mg = g.front().m.quotient_of(l);
  SortedPoly scaled_f;
  scaled_f.reserve(f.size());
  const Rational inv_f = f.front().c.inverse();
  for (const auto& t : f) scaled_f.push_back({t.m * mf, t.c * inv_f});
  return subtract_multiple(scaled_f, 0, g.front().c.inverse(), mg, g, order);
}

}  // namespace detail

/// RAII: installs degree limits for Gröbner computations on this thread.
class ScopedEngineLimits {
 public:
  explicit ScopedEngineLimits(EngineLimits limits) : saved_(detail::thread_limits()) {
    detail::thread_limits() = limits;
  }
  ~ScopedEngineLimits() { detail::thread_limits() = saved_; }
  ScopedEngineLimits(const ScopedEngineLimits&) = delete;
  ScopedEngineLimits& operator=(const ScopedEngineLimits&) = delete;

 private:
  EngineLimits saved_;
};

inline EngineLimits current_engine_limits() { return detail::thread_limits(); }

/// RAII: while alive, every basis computed on this thread is re-checked by
/// reducing all S-polynomials, and the outcome is tallied into `audit`.
class AuditScope {
 public:
  explicit AuditScope(BasisAudit& audit) : saved_(detail::thread_audit()) { detail::thread_audit() = &audit; }
  ~AuditScope() { detail::thread_audit() = saved_; }
  AuditScope(const AuditScope&) = delete;
  AuditScope& operator=(const AuditScope&) = delete;

 private:
  BasisAudit* saved_;
};

/// Reduced Gröbner basis: monic, inter-reduced, sorted by decreasing
/// leading monomial. The empty basis presents the zero ideal.
class GroebnerBasis {
 public:
  GroebnerBasis(Ring ring, MonomialOrder order) : ring_(std::move(ring)), order_(std::move(order)) {}

  const Ring& ring() const noexcept { return ring_; }
  const MonomialOrder& order() const noexcept { return order_; }
  std::size_t size() const noexcept { return sorted_.size(); }
  bool empty() const noexcept { return sorted_.empty(); }

  std::vector<Polynomial> elements() const {
    std::vector<Polynomial> out;
    out.reserve(sorted_.size());
    for (const auto& s : sorted_) out.push_back(detail::from_sorted(ring_, s));
    return out;
  }
  std::vector<Monomial> leading_monomials() const {
    std::vector<Monomial> out;
    for (const auto& s : sorted_) out.push_back(s.front().m);
    return out;
  }
  bool is_unit() const { return sorted_.size() == 1 && sorted_.front().front().m.is_one(); }

  Polynomial normal_form(const Polynomial& p) const {
    require_same_ring(p.ring(), ring_);
    const std::vector<bool> all(sorted_.size(), true);
    return detail::from_sorted(ring_, detail::reduce_full(detail::to_sorted(p, order_), sorted_, all, order_));
  }

  /// Buchberger certificate: every S-polynomial reduces to zero.
  bool verify() const {
    const std::vector<bool> all(sorted_.size(), true);
    for (std::size_t i = 0; i < sorted_.size(); ++i)
      for (std::size_t j = i + 1; j < sorted_.size(); ++j) {
        if (coprime(sorted_[i].front().m, sorted_[j].front().m)) continue;
        auto s = detail::s_polynomial(sorted_[i], sorted_[j], order_);
        if (!detail::reduce_full(std::move(s), sorted_, all, order_).empty()) return false;
      }
    return true;
  }

  friend bool operator==(const GroebnerBasis& a, const GroebnerBasis& b) {
    if (!(a.ring_ == b.ring_) || !(a.order_ == b.order_) || a.sorted_.size() != b.sorted_.size()) return false;
    for (std::size_t i = 0; i < a.sorted_.size(); ++i) {
      if (a.sorted_[i].size() != b.sorted_[i].size()) return false;
      for (std::size_t k = 0; k < a.sorted_[i].size(); ++k)
        if (a.sorted_[i][k].m != b.sorted_[i][k].m || !(a.sorted_[i][k].c == b.sorted_[i][k].c)) return false;
    }
    return true;
  }

 private:
  friend GroebnerBasis groebner_basis(const std::vector<Polynomial>&, const Ring&, const MonomialOrder&);

  Ring ring_;
  MonomialOrder order_;
  std::vector<detail::SortedPoly> sorted_;
};

namespace detail {

struct CriticalPair {
  std::size_t i;
  std::size_t j;
  Monomial lcm;
  std::uint64_t degree;
};

// Gebauer–Möller update (Becker–Weispfenning UPDATE) for new element h.
inline void update_pairs(std::vector<SortedPoly>& store, std::vector<bool>& active, std::vector<CriticalPair>& pairs,
                         std::size_t h) {
  const Monomial& lh = store[h].front().m;
  std::vector<CriticalPair> candidates;
  for (std::size_t g = 0; g < h; ++g) {
    if (!active[g]) continue;
    Monomial l = lcm(lh, store[g].front().m);
    const std::uint64_t d = l.degree();
    candidates.push_back({g, h, std::move(l), d});
  }
  // Chain criterion among the new pairs: drop (h,g) if some other new pair
  // still pending or already kept has an lcm dividing lcm(h,g).
  std::vector<CriticalPair> kept;
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    const auto& p = candidates[a];
    bool keep = coprime(lh, store[p.i].front().m);
    if (!keep) {
      keep = true;
      for (std::size_t b = a + 1; b < candidates.size() && keep; ++b)
        if (candidates[b].lcm.divides(p.lcm)) keep = false;
      for (std::size_t b = 0; b < kept.size() && keep; ++b)
        if (kept[b].lcm.divides(p.lcm)) keep = false;
    }
    if (keep) kept.push_back(p);
  }
  std::vector<CriticalPair> fresh;
  for (auto& p : kept)
    if (!coprime(lh, store[p.i].front().m)) fresh.push_back(std::move(p));
  // Prune old pairs whose lcm is a multiple of lh with distinct lcms.
  std::vector<CriticalPair> survivors;
  for (auto& p : pairs) {
    const bool divisible = lh.divides(p.lcm);
    const bool eq_i = lcm(store[p.i].front().m, lh) == p.lcm;
    const bool eq_j = lcm(store[p.j].front().m, lh) == p.lcm;
    if (!divisible || eq_i || eq_j) survivors.push_back(std::move(p));
  }
  pairs = std::move(survivors);
  for (auto& p : fresh) pairs.push_back(std::move(p));
  for (std::size_t g = 0; g < h; ++g)
    if (active[g] && lh.divides(store[g].front().m)) active[g] = false;
  active[h] = true;
}

}  // namespace detail

/// Unique reduced Gröbner basis of the ideal generated by `generators`.
inline GroebnerBasis groebner_basis(const std::vector<Polynomial>& generators, const Ring& ring,
                                    const MonomialOrder& order) {
  if (!order.is_global())
    throw Error(ErrorCode::NonGlobalOrder, "Buchberger needs a well-ordering; got " + order.describe());
  const EngineLimits limits = detail::thread_limits();
  GroebnerBasis result(ring, order);

  std::vector<detail::SortedPoly> store;
  std::vector<bool> active;
  std::vector<detail::CriticalPair> pairs;

  auto insert = [&](detail::SortedPoly h) {
    detail::make_monic(h);
    std::uint64_t deg = 0;
    for (const auto& t : h) deg = std::max(deg, t.m.degree());
    if (deg > limits.max_degree)
      throw Error(ErrorCode::DegreeBoundExceeded,
                  "basis element of degree " + std::to_string(deg) + " exceeds --max-degree " +
                      std::to_string(limits.max_degree));
    store.push_back(std::move(h));
    active.push_back(false);
    detail::update_pairs(store, active, pairs, store.size() - 1);
  };

  for (const auto& g : generators) {
    require_same_ring(g.ring(), ring);
    auto h = detail::reduce_full(detail::to_sorted(g, order), store, active, order);
    if (h.empty()) continue;
    if (h.front().m.is_one()) {
      store.clear();
      active.clear();
      pairs.clear();
      insert(std::move(h));
      break;
    }
    insert(std::move(h));
  }

  while (!pairs.empty()) {
    auto best = std::min_element(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
      if (a.degree != b.degree) return a.degree < b.degree;
      if (a.j != b.j) return a.j < b.j;
      return a.i < b.i;
    });
    const detail::CriticalPair pair = *best;
    pairs.erase(best);
    auto s = detail::s_polynomial(store[pair.i], store[pair.j], order);
    auto h = detail::reduce_full(std::move(s), store, active, order);
    if (h.empty()) continue;
    if (h.front().m.is_one()) {
      store.assign(1, std::move(h));
      detail::make_monic(store.front());
      active.assign(1, true);
      pairs.clear();
      break;
    }
    insert(std::move(h));
  }

  // Inter-reduce the surviving elements.
  std::vector<detail::SortedPoly> minimal;
  for (std::size_t k = 0; k < store.size(); ++k)
    if (active[k]) minimal.push_back(store[k]);
  std::vector<detail::SortedPoly> reduced;
  for (std::size_t k = 0; k < minimal.size(); ++k) {
    std::vector<bool> others(minimal.size(), true);
    others[k] = false;
    detail::SortedPoly head{minimal[k].front()};
    detail::SortedPoly tail(minimal[k].begin() + 1, minimal[k].end());
    auto reduced_tail = detail::reduce_full(std::move(tail), minimal, others, order);
    head.insert(head.end(), reduced_tail.begin(), reduced_tail.end());
    detail::make_monic(head);
    reduced.push_back(std::move(head));
  }
  std::sort(reduced.begin(), reduced.end(),
            [&](const auto& a, const auto& b) { return order.greater(a.front().m, b.front().m); });
  result.sorted_ = std::move(reduced);

  if (BasisAudit* audit = detail::thread_audit()) {
    ++audit->bases_checked;
    if (!result.verify()) ++audit->failures;
  }
  return result;
}

inline Polynomial reduce_normal_form(const Polynomial& p, const GroebnerBasis& basis) { return basis.normal_form(p); }

}  // namespace flatlimit
