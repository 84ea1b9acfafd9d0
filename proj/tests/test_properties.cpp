#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hwil/geometry.hpp"
#include "hwil/outer.hpp"
#include "hwil/sampling.hpp"
#include "hwil/seq_space.hpp"

using namespace hwil;

namespace {

Complex random_disc_point(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(rmax * std::sqrt(u(rng)), kTwoPi * u(rng));
}

}  // namespace

TEST(Properties, SeminormAxioms) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> w(10);
    for (auto& x : w) x = u(rng);
    const SeqWeight lam(w);
    FiniteSeq a(10), b(10);
    for (int n = 1; n <= 10; ++n) {
      a[n] = {g(rng), g(rng)};
      b[n] = {g(rng), g(rng)};
    }
    const Complex c{g(rng), g(rng)};
    EXPECT_LE(seminorm(a + b, lam), (seminorm(a, lam) + seminorm(b, lam)) * (1.0 + 1e-15));
    EXPECT_NEAR(seminorm(c * a, lam), std::abs(c) * seminorm(a, lam), 1e-14 * seminorm(a, lam) * std::abs(c));
    EXPECT_GE(seminorm(a, lam), 0.0);
  }
  EXPECT_EQ(seminorm(FiniteSeq(5), SeqWeight(std::vector<double>(5, 1.0))), 0.0);
}

TEST(Properties, HerglotzAdditive) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const Complex z = random_disc_point(rng, 0.95);
    double a = kTwoPi * u(rng), b = kTwoPi * u(rng), c = kTwoPi * u(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    if (a == b || b == c) continue;
    const Complex whole = herglotz_segment(z, a, c);
    const Complex parts = herglotz_segment(z, a, b) + herglotz_segment(z, b, c);
    EXPECT_NEAR(std::abs(whole - parts), 0.0, 1e-12 * (1.0 + std::abs(whole)));
  }
}

TEST(Properties, HerglotzFullCircle) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 1000; ++t) {
    const Complex z = random_disc_point(rng, 0.99);
    const Complex v = herglotz_segment(z, 0.0, kTwoPi);
    EXPECT_NEAR(v.real() / kTwoPi, 1.0, 1e-10);
    EXPECT_NEAR(v.imag(), 0.0, 1e-10);
  }
}

TEST(Properties, PoissonPositivity) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const Complex z = random_disc_point(rng, 0.999);
    const double a = kTwoPi * u(rng), h = 1e-3 * u(rng) + 1e-12;
    EXPECT_GT(herglotz_segment(z, a, a + h).real(), 0.0);
  }
}

TEST(Properties, BoundaryDistanceBruteForce) {
  // The boundary of G1 is the upper unit semicircle, the circle of radius
  // 1/2 and the two real segments joining them.
  std::vector<Complex> boundary;
  const int m = 100000;
  for (int i = 0; i <= m; ++i) {
    const double t = kPi * i / m;
    boundary.push_back(std::polar(1.0, t));
    boundary.push_back(std::polar(0.5, t));
    boundary.push_back({0.5 + 0.5 * i / m, 0.0});
    boundary.push_back({-0.5 - 0.5 * i / m, 0.0});
  }
  for (Complex z : sample_half_annulus({100, 15})) {
    double best = 1e9;
    for (Complex b : boundary) best = std::min(best, std::abs(z - b));
    EXPECT_NEAR(boundary_distance(z), best, 1e-6);
  }
}

TEST(Properties, DiscLiesOverPlateau) {
  for (int n = 1; n <= 12; ++n) {
    const Interval in = AngularFamilies::plateau(n);
    for (Complex z : sample_disc(n, {300, static_cast<std::uint64_t>(n)})) {
      ASSERT_TRUE(region_membership(z, Region::disc(n)));
      const double t = std::arg(z);
      EXPECT_TRUE(in.contains(t)) << n << " " << t;
    }
  }
}

TEST(Properties, ModulusNeverExceedsOne) {
  const OuterFamily of{AngularFamilies(12)};
  std::mt19937_64 rng(16);
  for (int t = 0; t < 300; ++t) {
    const Complex z = random_disc_point(rng, 0.999);
    const auto b = of.exponents(z, 12);
    for (const Complex& h : b.h) EXPECT_LE(h.real(), b.tail_bound);
  }
}
