#pragma once

// The half-annulus G1 = {1/2 < |z| < 1, 0 < arg z < pi}, the angular
// families theta_n, I_n, J_n, shoulders s_n, and the discs D_n near the
// outer arc.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "hwil/error.hpp"

namespace hwil {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kInnerRadius = 0.5;
inline constexpr double kOuterRadius = 1.0;

struct Interval {
  double lo;
  double hi;
  double center() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// eps_n = 2^(-n-17) n^(-6): half the admissible ceiling 2^(-n-16) n^(-6).
double default_eps(int n);

/// The admissible ceiling 2^(-n-16) n^(-6) for eps_n (strict).
double eps_ceiling(int n);

using EpsRule = std::function<double(int)>;

/// Angular data of the construction. Quantities are defined for every
/// n >= 1; the invariants are asserted for n <= n_max at construction.
class AngularFamilies {
 public:
  explicit AngularFamilies(int n_max = 12, EpsRule eps = default_eps);

  int n_max() const { return n_max_; }
  double eps(int n) const;

  static double theta(int n) { return 1.0 / (2.0 * n); }
  static double plateau_half_width(int n) { return 1.0 / (32.0 * n * static_cast<double>(n)); }
  static double shoulder(int n) { return theta(n) + 1.0 / (16.0 * n * static_cast<double>(n)); }
  static Interval plateau(int n) {
    return {theta(n) - plateau_half_width(n), theta(n) + plateau_half_width(n)};
  }
  Interval jump(int n) const { return {theta(n) - eps(n), theta(n) + eps(n)}; }

  /// Ascending anchor angles left(I_{n+1}) < s_{n+1} < left(I_n) <
  /// right(I_n) < s_n for n <= n_max, framed by 0 and pi.
  std::vector<double> anchor_sequence() const;
  bool anchors_strictly_increasing() const;

 private:
  int n_max_;
  EpsRule rule_;
  std::vector<double> cache_;  // eps(n) for n <= cache_.size()
};

/// Radius 1/(50 n^2) of D_n.
inline double disc_radius(int n) { return 1.0 / (50.0 * n * static_cast<double>(n)); }
inline Complex disc_center(int n) { return std::polar(1.0, AngularFamilies::theta(n)); }

bool in_half_annulus(Complex z);

/// Distance from z in G1 to the complement of G1 (the two arcs and the
/// two real segments bounding it).
double boundary_distance(Complex z);

enum class RegionKind { Disc, Complement, Sector, Whole };

struct Region {
  RegionKind kind = RegionKind::Whole;
  int n = 0;  // unused for Whole

  static Region disc(int n) { return {RegionKind::Disc, n}; }
  static Region complement(int n) { return {RegionKind::Complement, n}; }
  static Region sector(int n) { return {RegionKind::Sector, n}; }
  static Region whole() { return {RegionKind::Whole, 0}; }

  std::string name() const;
  static Region parse(const std::string& name);
};

bool region_membership(Complex z, const Region& region);

struct KernelDistance {
  double estimate;  // sampled infimum of |e^{i theta} - z|
  double bound;     // 1/(2^6 n^2)
  bool pass;        // estimate > bound
  int samples;
};

struct SamplingPlan;

/// Sampled infimum of |e^{i theta} - z| over theta in J_n and z in the
/// boundary of D_n (within the closed unit disc) plus far samples of C_n.
KernelDistance min_kernel_distance(const AngularFamilies& fam, int n, const SamplingPlan& plan);

struct SectorInclusion {
  double deviation;   // asin(rho / (1 - rho)), rho = 1/(50 n^2)
  double half_width;  // 1/(2^5 n^2)
  bool pass;
};

/// D_n lies in the sector over I_n.
SectorInclusion sector_inclusion_check(int n);

}  // namespace hwil
