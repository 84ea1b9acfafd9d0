#pragma once

// Deterministic low-discrepancy samplers over G1 and the regions around
// the discs D_n. Every sampler is a pure function of (plan, arguments).

#include <complex>
#include <cstdint>
#include <vector>

#include "hwil/geometry.hpp"

namespace hwil {

struct SamplingPlan {
  int count = 1000;
  std::uint64_t seed = 1;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Radical inverse of index in the given base (van der Corput).
double radical_inverse(std::uint64_t index, unsigned base);

/// 2D Halton(2,3) points with a seeded Cranley-Patterson rotation.
class HaltonSequence {
 public:
  explicit HaltonSequence(std::uint64_t seed);
  std::pair<double, double> operator()(std::uint64_t index) const;

 private:
  double shift_u_;
  double shift_v_;
};

/// Area-uniform low-discrepancy points of G1.
std::vector<Complex> sample_half_annulus(const SamplingPlan& plan);

/// Points of D_n, half area-uniform and half concentrated near the
/// boundary circle.
std::vector<Complex> sample_disc(int n, const SamplingPlan& plan);

/// Points of C_n within distance `band` of the circle |z - e^{i theta_n}| =
/// 1/(50 n^2), including points on the circle itself.
std::vector<Complex> sample_disc_shell(int n, double band, const SamplingPlan& plan);

/// Points of C_n: area-uniform points of G1 outside D_n, `near` of them
/// replaced by shell points within 1e-3 of the boundary of D_n.
std::vector<Complex> sample_complement(int n, int near, const SamplingPlan& plan);

/// Points of the common region, outside every D_m with m <= m_top.
std::vector<Complex> sample_common_region(int m_top, const SamplingPlan& plan);

}  // namespace hwil
