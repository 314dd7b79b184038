#include <gtest/gtest.h>

#include "support.hpp"

using namespace flatlimit;
using testing_support::CorpusFamily;
using testing_support::make_corpus;

namespace {

const Ring tyx{"t", "y", "x"};
const Ring swx{"s", "w", "x"};
const Ring wx{"w", "x"};
const Ring yx{"y", "x"};
const Ring tx{"t", "x"};
const Ring x_only{"x"};

FamilyIdeal F(std::string_view gens) { return FamilyIdeal(Ideal::parse(tyx, gens), "t", "y"); }
Ideal I(const Ring& r, std::string_view s) { return Ideal::parse(r, s); }
WeightExponent A(long p, long q = 1) { return WeightExponent(p, q); }

#define EXPECT_IDEAL(actual, ring, text) EXPECT_TRUE(ideals_equal((actual), I(ring, text))) << to_string(actual)

const std::vector<CorpusFamily>& corpus() {
  static const auto c = make_corpus(60, 99U);
  return c;
}

}  // namespace

TEST(Family, Roles) {
  EXPECT_EQ(F("y - t, x").transverse(), (std::vector<std::string>{"x"}));
  for (auto [p, d] : {std::pair{"t", "t"}, std::pair{"q", "y"}, std::pair{"t", "q"}}) {
    try {
      FamilyIdeal(Ideal::parse(tyx, "y"), p, d);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::RoleError);
    }
  }
  EXPECT_THROW(WeightExponent(Rational(0)), Error);
  EXPECT_EQ(A(4, 6).to_string(), "2/3");
}

TEST(Fiber, WorkedExamples) {
  EXPECT_IDEAL(fiber_at_zero(F("y - t, x")), yx, "y, x");
  EXPECT_IDEAL(fiber_at_zero(F("y^2 - t, x")), yx, "y^2, x");
  EXPECT_IDEAL(fiber_at_zero(F("y - t*x")), yx, "y");
}

TEST(DivisorImage, WorkedExamples) {
  EXPECT_IDEAL(divisor_image(F("y - t, x")), tx, "t, x");
  EXPECT_IDEAL(divisor_image(F("y - t*x")), tx, "t*x");
  const Ideal d = divisor_image(F("y - 1 + t, x"));
  EXPECT_IDEAL(d, tx, "t - 1, x");
  EXPECT_FALSE(d.is_unit());
  EXPECT_TRUE(initial_ideal_t(d, "t").is_unit());
}

TEST(LeadingCoefficient, WorkedExamples) {
  const Ring twx{"t", "w", "x"};
  auto [n1, b1] = t_leading_coefficient(parse_polynomial("t^2*(w^2 - 1)", twx), "t");
  EXPECT_EQ(n1, 2U);
  EXPECT_EQ(b1, parse_polynomial("w^2 - 1", wx));
  auto [n2, b2] = t_leading_coefficient(parse_polynomial("x", twx), "t");
  EXPECT_EQ(n2, 0U);
  EXPECT_EQ(b2, parse_polynomial("x", wx));
  auto [n3, b3] = t_leading_coefficient(parse_polynomial("t*x + t^2*w", twx), "t");
  EXPECT_EQ(n3, 1U);
  EXPECT_EQ(b3, parse_polynomial("x", wx));
  try {
    (void)t_leading_coefficient(Polynomial(twx), "t");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroPolynomial);
  }
}

TEST(InitialIdeal, WorkedExamples) {
  EXPECT_TRUE(initial_ideal_t(I(tx, "t, x"), "t").is_unit());
  EXPECT_IDEAL(initial_ideal_t(I(tx, "t*x"), "t"), x_only, "x");
  EXPECT_IDEAL(initial_ideal_t(I(tx, "x^2, t*x"), "t"), x_only, "x");
}

TEST(Relative, WorkedExamples) {
  EXPECT_FALSE(is_relative(I(yx, "y, x"), "y"));
  EXPECT_TRUE(is_relative(I(yx, "y - 1, x"), "y"));
  EXPECT_TRUE(is_relative(I(yx, "x"), "y"));
}

TEST(RelativeFamily, WorkedExamples) {
  EXPECT_FALSE(is_relative_family(F("y - t, x")));
  EXPECT_TRUE(is_relative_family(F("y - 1 + t, x")));
  EXPECT_FALSE(is_relative_family(F("y - t*x")));
  try {
    (void)is_relative_family(F("t*y, x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FlatnessViolation);
  }
}

TEST(WeightSubstitute, WorkedExamples) {
  EXPECT_IDEAL(weight_substitute(F("y - t, x"), A(1)), swx, "s*w - s, x");
  EXPECT_IDEAL(weight_substitute(F("y^2 - t, x"), A(1, 2)), swx, "s^2*w^2 - s^2, x");
  EXPECT_IDEAL(weight_substitute(F("y - t, x"), A(2)), swx, "s^2*w - s, x");
  // Chart names avoid transverse variables.
  const Ring clash{"t", "y", "s"};
  const auto sub = weight_substitute(FamilyIdeal(Ideal::parse(clash, "y - t*s"), "t", "y"), A(1));
  EXPECT_EQ(sub.ring().names(), (std::vector<std::string>{"s_0", "w", "s"}));
}

TEST(FlatLimit, WorkedExamples) {
  const auto r1 = flat_limit(F("y - t, x"), A(1));
  EXPECT_IDEAL(r1.limit, wx, "w - 1, x");
  EXPECT_TRUE(r1.divisor_image_of_limit.is_unit());
  EXPECT_TRUE(is_subset(r1.substituted, r1.saturated));
  EXPECT_IDEAL(flat_limit(F("y^2 - t, x"), A(1, 2)).limit, wx, "w^2 - 1, x");
  const auto r2 = flat_limit(F("y - t, x"), A(2));
  EXPECT_TRUE(r2.limit.is_unit());
  EXPECT_IDEAL(r2.saturated, swx, "s*w - 1, x");
}

TEST(FlatLimit, CertificateCountsPointsAtInfinity) {
  const auto fam = F("(y - t)*(y - t^2), x - 1");
  const auto at1 = flat_limit(fam, A(1));
  EXPECT_IDEAL(at1.limit, wx, "w*(w - 1), x - 1");
  EXPECT_EQ(at1.certificate.special, Colength(2));
  EXPECT_EQ(at1.certificate.at_infinity, Colength(0));
  const auto at2 = flat_limit(fam, A(2));
  EXPECT_IDEAL(at2.limit, wx, "w - 1, x - 1");
  EXPECT_TRUE(at2.certificate.checked);
  EXPECT_TRUE(at2.certificate.passed);
  EXPECT_EQ(at2.certificate.special, Colength(1));
  EXPECT_EQ(at2.certificate.at_infinity, Colength(1));
  EXPECT_EQ(at2.certificate.generic, Colength(2));
}

TEST(Pullback, WorkedExamples) {
  EXPECT_IDEAL(pullback_from_divisor(I(x_only, "x"), wx), wx, "x");
  EXPECT_TRUE(pullback_from_divisor(Ideal::unit(x_only), wx).is_unit());
  const Ideal k = I(x_only, "x^2 - x");
  EXPECT_EQ(colength(k), Colength(2));
  EXPECT_EQ(colength(pullback_from_divisor(k, wx)), std::nullopt);
}

TEST(TrivialLimit, WorkedExamples) {
  EXPECT_TRUE(is_trivial_limit(F("y - t, x"), A(2)));
  EXPECT_FALSE(is_trivial_limit(F("y - t, x"), A(1)));
  EXPECT_TRUE(is_trivial_limit(F("y - t*x"), A(2)));
}

TEST(CriticalExponent, WorkedExamples) {
  const auto c1 = critical_exponent(F("y - t, x"));
  EXPECT_EQ(c1.a_star, A(1));
  EXPECT_IDEAL(c1.record.limit, wx, "w - 1, x");
  EXPECT_TRUE(c1.trivial_above);
  const auto c2 = critical_exponent(F("y^2 - t, x"));
  EXPECT_EQ(c2.a_star, A(1, 2));
  EXPECT_IDEAL(c2.record.limit, wx, "w^2 - 1, x");
  const auto c3 = critical_exponent(F("y - t*x"));
  EXPECT_EQ(c3.a_star, A(1));
  EXPECT_IDEAL(c3.record.limit, wx, "w - x");
  EXPECT_TRUE(c3.trivial_above);
}

TEST(CriticalExponent, MultiRateTakesTheFastestBranch) {
  const auto c = critical_exponent(F("(y - t)*(y - t^2), x - 1"));
  EXPECT_EQ(c.a_star, A(2));
  EXPECT_IDEAL(c.record.limit, wx, "w - 1, x - 1");
  const auto e = first_escape_exponent(F("(y - t)*(y - t^2), x - 1"));
  EXPECT_EQ(e.exponent, A(1));
  EXPECT_IDEAL(e.record.limit, wx, "w*(w - 1), x - 1");
}

TEST(CriticalExponent, Errors) {
  try {
    (void)critical_exponent(F("y - 1, x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoEscape);
  }
  try {
    (void)critical_exponent(F("t*y, x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FlatnessViolation);
  }
}

TEST(CriticalExponent, FallbackAndParallelAgree) {
  for (const auto& fam : corpus()) {
    if (!fam.escapes()) continue;
    const auto f = fam.family();
    const auto walls = critical_exponent(f);
    const auto farey = critical_exponent(f, ScanOptions{1, false});
    const auto par = critical_exponent(f, ScanOptions{3, true});
    EXPECT_TRUE(farey.used_fallback);
    EXPECT_EQ(walls.a_star, farey.a_star) << fam.describe();
    EXPECT_EQ(walls.a_star, par.a_star) << fam.describe();
    EXPECT_EQ(to_string(walls.record.limit), to_string(par.record.limit));
  }
}

TEST(CriticalExponent, CandidateWalls) {
  const auto walls = candidate_walls(F("(y - t)*(y - t^2), x - 1"));
  EXPECT_TRUE(std::find(walls.begin(), walls.end(), Rational(1)) != walls.end());
  EXPECT_TRUE(std::find(walls.begin(), walls.end(), Rational(2)) != walls.end());
  for (const auto& w : walls) EXPECT_GT(w.sign(), 0);
}

// Expected exponents and limits come from the factor structure of each
// corpus family, not from the engine.
TEST(Corpus, CriticalExponentMatchesConstruction) {
  for (const auto& fam : corpus()) {
    const auto f = fam.family();
    const bool escapes = fam.escapes();
    EXPECT_EQ(is_relative_family(f), !escapes) << fam.describe();
    EXPECT_EQ(is_relative(fiber_at_zero(f), "y"), !escapes) << fam.describe();
    if (!escapes) continue;
    const auto c = critical_exponent(f);
    EXPECT_EQ(c.a_star.value(), *fam.max_rate()) << fam.describe();
    EXPECT_TRUE(ideals_equal(c.record.limit, fam.expected_limit(*fam.max_rate(), "w")))
        << fam.describe() << " got " << to_string(c.record.limit);
  }
}

TEST(Corpus, LimitsAlongTheRay) {
  const std::vector<Rational> grid{Rational(mpz_class(1), mpz_class(3)), Rational(mpz_class(1), mpz_class(2)),
                                   Rational(1), Rational(mpz_class(3), mpz_class(2)), Rational(2), Rational(3),
                                   Rational(4)};
  for (std::size_t n = 0; n < 25; ++n) {
    const auto& fam = corpus()[n];
    const auto f = fam.family();
    const Ideal image = divisor_image(f);
    const Ideal image_at_zero = detail::specialize_ideal(image, "t", Rational(0));
    const Ideal top = divisor_initial_ideal(f);
    std::optional<Ideal> previous;
    bool relative_seen = false;
    for (const auto& a : grid) {
      const auto rec = flat_limit(f, WeightExponent(a));
      // Construction oracle.
      EXPECT_TRUE(ideals_equal(rec.limit, fam.expected_limit(a, "w"))) << fam.describe() << " a=" << a;
      // Flatness across the chart and its point at infinity.
      EXPECT_TRUE(rec.certificate.checked && rec.certificate.passed);
      EXPECT_EQ(rec.certificate.generic, Colength(fam.generic_colength()));
      // Sandwich: I^D_0 ⊆ Ĩ(a)₀^D ⊆ Ĩ(b)₀^D ⊆ I^D_{t→0}.
      const Ideal d = rec.divisor_image_of_limit;
      EXPECT_TRUE(is_subset(image_at_zero, d));
      EXPECT_TRUE(is_subset(d, top));
      if (previous) EXPECT_TRUE(is_subset(*previous, d));
      previous = d;
      // A pullback contained in the limit equals it.
      const Ideal pulled = pullback_from_divisor(top, rec.limit.ring());
      if (is_subset(pulled, rec.limit)) EXPECT_TRUE(ideals_equal(pulled, rec.limit));
      // Once relative, every larger exponent is trivial.
      if (relative_seen) EXPECT_TRUE(ideals_equal(pulled, rec.limit)) << fam.describe() << " a=" << a;
      if (is_relative(rec.limit, "w")) relative_seen = true;
    }
  }
}

TEST(Corpus, LargeExponentIsRelativeOrTrivial) {
  for (const auto& fam : corpus()) {
    const auto f = fam.family();
    std::uint64_t tdeg = 0;
    for (const auto& g : f.ideal().generators()) tdeg = std::max<std::uint64_t>(tdeg, g.degree_in("t"));
    const WeightExponent a(Rational(static_cast<long>(tdeg) + 1));
    const auto rec = flat_limit(f, a);
    EXPECT_TRUE(is_relative(rec.limit, "w") || is_pullback_limit(rec, divisor_initial_ideal(f))) << fam.describe();
  }
}

TEST(Corpus, ZeroDimensionalRelativeMeansEmptyDivisorMeet) {
  for (const auto& fam : corpus()) {
    const Ideal i0 = fiber_at_zero(fam.family());
    EXPECT_EQ(is_relative(i0, "y"), colength(i0.plus(Polynomial::variable(i0.ring(), "y"))) == Colength(0));
  }
}
