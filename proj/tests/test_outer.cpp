#include <gtest/gtest.h>

#include <cmath>

#include "hwil/error.hpp"
#include "hwil/outer.hpp"
#include "hwil/sampling.hpp"

using namespace hwil;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

const OuterFamily& outer12() {
  static const OuterFamily of{AngularFamilies(12)};
  return of;
}

}  // namespace

TEST(HerglotzSegment, KernelIsOneAtOrigin) {
  EXPECT_DOUBLE_EQ(herglotz_segment(0.0, 0.3, 1.7).real(), 1.4);
  EXPECT_EQ(herglotz_segment(0.0, 0.3, 1.7).imag(), 0.0);
}

TEST(HerglotzSegment, FullCircle) {
  for (Complex z : {Complex(0.5, 0.0), Complex(-0.3, 0.9), Complex(0.0, 0.99)})
    EXPECT_NEAR(herglotz_segment(z, 0.0, kTwoPi).real(), kTwoPi, 1e-10 * kTwoPi);
}

TEST(HerglotzSegment, Errors) {
  EXPECT_THROW(herglotz_segment({1.0, 0.0}, 0.0, 1.0), Error);
  EXPECT_THROW(herglotz_segment({0.2, 0.0}, 1.0, 1.0), Error);
  EXPECT_THROW(herglotz_segment({0.2, 0.0}, 2.0, 1.0), Error);
}

TEST(HerglotzCentered, MatchesSegment) {
  for (double r : {0.0, 0.3, 0.9, 0.999}) {
    const double c = 0.7, h = 0.05;
    for (double phi : {-0.2, 0.0, 0.01, 0.3}) {
      const Complex want = herglotz_segment(std::polar(r, c + phi), c - h, c + h);
      const Complex got = herglotz_centered(r, phi, h);
      EXPECT_NEAR(std::abs(got - want), 0.0, 1e-12 * (1.0 + std::abs(want)));
    }
  }
}

TEST(Exponent, OriginSeriesOracle) {
  const auto& of = outer12();
  const auto& fam = of.families();
  for (int n = 1; n <= 12; ++n) {
    // Kernel is 1 at z = 0: h_n(0) is the mean of log phi_n.
    double sum = std::log(fam.eps(n)) * (kTwoPi - 2.0 * fam.eps(n));
    for (int m = 1; m <= 400; ++m)
      if (m != n) sum -= 2.0 * fam.eps(m) * (m + 4) * kLn2;
    const auto e = of.exponent(n, 0.0);
    EXPECT_NEAR(e.value.real(), sum / kTwoPi, 1e-12 * std::abs(sum));
    EXPECT_NEAR(e.value.imag(), 0.0, 1e-14);
    EXPECT_LT(e.tail_bound, 1e-10);
  }
}

TEST(Exponent, RealPartBelowTail) {
  const auto& of = outer12();
  for (Complex z : sample_half_annulus({1000, 21}))
    for (int n = 1; n <= 12; ++n) {
      const auto e = of.exponent(n, z);
      EXPECT_LE(e.value.real(), e.tail_bound);
      EXPECT_LE(std::exp(e.value.real()), 1.0);
    }
}

TEST(Exponent, AdaptiveCutReachesTarget) {
  const OuterFamily strict{AngularFamilies(12), MCutPolicy{12, 1e-25, 4096}};
  const auto e = strict.exponent(1, std::polar(0.999, 1e-2));
  EXPECT_LT(e.tail_bound, 1e-25);
  EXPECT_GT(e.m_cut, 12);
  const auto loose = strict.exponent(1, std::polar(0.999, 1e-2), 12);
  EXPECT_GT(loose.tail_bound, 1e-25);
  EXPECT_NEAR(std::abs(loose.value - e.value), 0.0, loose.tail_bound);
  EXPECT_THROW(outer12().exponent(3, 0.5, 2), Error);
}

TEST(Exponent, BatchAgreesWithSingle) {
  const auto& of = outer12();
  const Complex z = std::polar(0.8, 0.4);
  const auto b = of.exponents(z, 12);
  for (int n = 1; n <= 12; ++n) {
    const auto e = of.exponent(n, z, b.m_cut);
    EXPECT_NEAR(std::abs(b.h[n - 1] - e.value), 0.0, 1e-12 * std::abs(e.value));
  }
}

TEST(ModulusBound, ArithmeticChain) {
  const auto& of = outer12();
  const auto rep = modulus_bound_check(of, 1, std::vector<Complex>{std::polar(0.75, 2.0)});
  EXPECT_NEAR(rep.chain_value, 4.977e-3, 1e-6);
  EXPECT_DOUBLE_EQ(rep.chain_bound, 1.0 / 32.0);
  EXPECT_TRUE(rep.chain_pass);
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.max_log_modulus, std::log(1.0 / 32.0));
}

TEST(ModulusBound, DiscSamplesExcluded) {
  const auto& of = outer12();
  const auto inside = sample_disc(2, {50, 1});
  const auto rep = modulus_bound_check(of, 2, inside);
  EXPECT_EQ(rep.excluded, 50);
  EXPECT_EQ(rep.evaluated, 0);
  EXPECT_FALSE(rep.pass);
}

TEST(BoundaryValue, ExactModuli) {
  const auto& of = outer12();
  const auto& fam = of.families();
  for (int n = 1; n <= 6; ++n) {
    EXPECT_EQ(of.boundary_value(n, Angle::in_family(n, 0.0), BoundaryMethod::PrincipalValue).modulus, 1.0);
    for (int m = 1; m <= 6; ++m) {
      if (m == n) continue;
      const auto bv = of.boundary_value(n, Angle::in_family(m, 0.0), BoundaryMethod::PrincipalValue);
      const double want = fam.eps(n) * std::ldexp(1.0, -m - 4);
      EXPECT_NEAR(bv.modulus, want, 1e-13 * want);
    }
    EXPECT_NEAR(of.boundary_value(n, Angle::absolute(2.0), BoundaryMethod::PrincipalValue).modulus, fam.eps(n),
                1e-13 * fam.eps(n));
  }
}

TEST(BoundaryValue, RejectsJumps) {
  const auto& of = outer12();
  const double e = of.families().eps(2);
  EXPECT_THROW(of.boundary_value(2, Angle::in_family(2, e), BoundaryMethod::PrincipalValue), Error);
  EXPECT_THROW(of.boundary_value(2, Angle::in_family(2, -e), BoundaryMethod::Radial), Error);
  // J_12 is too narrow for binary64 radii.
  EXPECT_THROW(of.boundary_value(12, Angle::in_family(12, 0.0), BoundaryMethod::Radial), ToleranceError);
}

TEST(RadialConvergence, Examples) {
  const auto& of = outer12();
  for (int n = 1; n <= 8; ++n) {
    const auto at_center = radial_convergence_check(of, n, Angle::in_family(n, 0.0));
    EXPECT_TRUE(at_center.pass) << n;
    EXPECT_NEAR(std::exp(at_center.limit_log), 1.0, 1e-6);
    const auto at_pi = radial_convergence_check(of, n, Angle::absolute(kPi));
    EXPECT_TRUE(at_pi.pass) << n;
    EXPECT_NEAR(std::exp(at_pi.limit_log) / of.families().eps(n), 1.0, 1e-6);
    const auto gap = radial_convergence_check(
        of, n, Angle::absolute(0.5 * (AngularFamilies::theta(1) + AngularFamilies::theta(2))));
    EXPECT_TRUE(gap.pass) << n;
    EXPECT_TRUE(gap.cauchy);
  }
}

TEST(Angle, CenteredRepresentation) {
  const Angle a = Angle::in_family(3, 1e-20);
  EXPECT_EQ(a.from_center(3), 1e-20);
  EXPECT_DOUBLE_EQ(a.value(), AngularFamilies::theta(3));
  EXPECT_DOUBLE_EQ(Angle::absolute(0.4).from_center(2), 0.4 - 0.25);
}
