#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flatlimit/degeneration.hpp"
#include "flatlimit/errors.hpp"
#include "flatlimit/ideal.hpp"

namespace flatlimit {

/// J ⊂ k[y1, y2, x..] with y1·y2 ∈ J, standing for J/(y1y2) on the node ring.
class NodeIdeal {
 public:
  NodeIdeal(Ideal ideal, std::string y1, std::string y2)
      : ideal_(std::move(ideal)), y1_(std::move(y1)), y2_(std::move(y2)) {
    const Ring& r = ideal_.ring();
    if (!r.contains(y1_) || !r.contains(y2_) || y1_ == y2_)
      throw Error(ErrorCode::RoleError, "node ring needs two distinct branch variables");
    if (!contains(ideal_, Polynomial::variable(r, y1_) * Polynomial::variable(r, y2_)))
      throw Error(ErrorCode::NotNodeIdeal, y1_ + "*" + y2_ + " is not in the ideal");
  }

  const Ideal& ideal() const noexcept { return ideal_; }
  const Ring& ring() const noexcept { return ideal_.ring(); }
  const std::string& y1() const noexcept { return y1_; }
  const std::string& y2() const noexcept { return y2_; }
  /// Branch variable of component c (1 or 2) and of the other one.
  const std::string& branch(int c) const { return check(c) == 1 ? y1_ : y2_; }
  const std::string& other(int c) const { return check(c) == 1 ? y2_ : y1_; }

 private:
  static int check(int c) {
    if (c != 1 && c != 2) throw Error(ErrorCode::RoleError, "node component must be 1 or 2");
    return c;
  }

  Ideal ideal_;
  std::string y1_;
  std::string y2_;
};

/// Presentation of Tor¹(O_Z, O_{Y_c}) as the pair ((J : y_other), J + (y_c));
/// Tor¹ vanishes iff the first ideal is contained in the second.
struct Tor1Presentation {
  Ideal kernel;    // (J : y_other)
  Ideal boundary;  // J + (y_c)
  bool zero() const { return is_subset(kernel, boundary); }
  /// Canonical generators of the kernel outside the boundary.
  std::vector<Polynomial> excess() const {
    std::vector<Polynomial> out;
    for (const auto& g : kernel.canonical_generators())
      if (!contains(boundary, g)) out.push_back(g);
    return out;
  }
};

inline Tor1Presentation tor1_node(const NodeIdeal& node, int component) {
  const Ideal& J = node.ideal();
  return {ideal_quotient(J, node.other(component)),
          J.plus(Polynomial::variable(node.ring(), node.branch(component)))};
}

/// I ⊗ O_{Y_c} → O_{Y_c} is injective: J ∩ (y_other) ⊆ y_other·J + (y1·y2).
inline bool restriction_injective(const NodeIdeal& node, int component) {
  const Ring& r = node.ring();
  const Polynomial yo = Polynomial::variable(r, node.other(component));
  const Polynomial y12 = Polynomial::variable(r, node.y1()) * Polynomial::variable(r, node.y2());
  const Ideal meet = intersect(node.ideal(), Ideal(r, {yo}));
  std::vector<Polynomial> gens{y12};
  for (const auto& g : node.ideal().generators()) gens.push_back(yo * g);
  return is_subset(meet, Ideal(r, std::move(gens)));
}

inline bool is_perfect_node(const NodeIdeal& node) {
  return restriction_injective(node, 1) && restriction_injective(node, 2);
}

/// Generator images under y_other ↦ 0, in (y_c, x..).
inline Ideal restrict_to_component(const NodeIdeal& node, int component) {
  if (!is_perfect_node(node))
    throw Error(ErrorCode::NotPerfect, "restriction of a non-perfect node ideal has torsion");
  return detail::specialize_ideal(node.ideal(), node.other(component), Rational(0));
}

/// Perfect ideal on the node with the given branch restrictions.
inline NodeIdeal glue_node(const Ideal& first, const std::string& y1, const Ideal& second, const std::string& y2) {
  const Ring base1 = first.ring().without(y1);
  const Ring base2 = second.ring().without(y2);
  if (!(base1 == base2)) throw Error(ErrorCode::RingMismatch, "branch ideals live over different divisor rings");
  if (y1 == y2 || base1.contains(y2) || base2.contains(y1))
    throw Error(ErrorCode::RoleError, "branch variables must be distinct and absent from the divisor ring");
  if (!is_relative(first, y1)) throw Error(ErrorCode::NotRelativeInput, "first branch ideal is not relative");
  if (!is_relative(second, y2)) throw Error(ErrorCode::NotRelativeInput, "second branch ideal is not relative");
  const Ideal d1 = detail::specialize_ideal(first, y1, Rational(0));
  const Ideal d2 = detail::specialize_ideal(second, y2, Rational(0));
  if (!ideals_equal(d1, d2))
    throw Error(ErrorCode::IncompatibleDivisorData,
                "divisor restrictions differ: " + to_string(d1) + " vs " + to_string(d2));

  std::vector<std::string> names{y1, y2};
  for (const auto& n : base1.names()) names.push_back(n);
  const Ring node_ring(names);
  const Polynomial v1 = Polynomial::variable(node_ring, y1);
  const Polynomial v2 = Polynomial::variable(node_ring, y2);
  const Ideal lifted = intersect(first.in_ring(node_ring).plus(v2), second.in_ring(node_ring).plus(v1));
  return NodeIdeal(lifted.plus(v1 * v2), y1, y2);
}

/// Reads a node ideal as a family over k[y1] with y2 as divisor coordinate.
/// A parameter variable t = y1·y2, if declared, must already be eliminated.
inline FamilyIdeal node_family_parameterize(const Ideal& ideal, const std::string& y1, const std::string& y2,
                                            const std::string& param = "") {
  const Ring& ring = ideal.ring();
  if (!ring.contains(y1) || !ring.contains(y2) || y1 == y2)
    throw Error(ErrorCode::MalformedNodeFamily, "node family needs both branch variables");
  Ideal body = ideal;
  if (!param.empty() && ring.contains(param)) {
    for (const auto& g : ideal.generators())
      if (g.involves(param))
        throw Error(ErrorCode::MalformedNodeFamily, "generator " + format_canonical(g) + " still involves " + param);
    body = ideal.in_ring(ring.without(param));
  }
  if (!ideals_equal(saturate(body, y1), body))
    throw Error(ErrorCode::MalformedNodeFamily, "ideal has " + y1 + "-torsion; the family over " + y1 + " is not flat");
  return FamilyIdeal(std::move(body), y1, y2);
}

}  // namespace flatlimit
