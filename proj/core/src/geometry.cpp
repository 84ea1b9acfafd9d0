#include "hwil/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hwil/sampling.hpp"

namespace hwil {

namespace {
constexpr int kEpsCache = 512;

double pow6(int n) {
  const double x = static_cast<double>(n);
  const double x3 = x * x * x;
  return x3 * x3;
}

double segment_distance(Complex z, double lo, double hi) {
  const double x = std::clamp(z.real(), lo, hi);
  return std::hypot(z.real() - x, z.imag());
}
}  // namespace

double default_eps(int n) {
  if (n < 1) throw Error("default_eps: n must be >= 1");
  return std::ldexp(1.0, -n - 17) / pow6(n);
}

double eps_ceiling(int n) {
  if (n < 1) throw Error("eps_ceiling: n must be >= 1");
  return std::ldexp(1.0, -n - 16) / pow6(n);
}

AngularFamilies::AngularFamilies(int n_max, EpsRule eps) : n_max_(n_max), rule_(std::move(eps)) {
  if (n_max < 1) throw Error("AngularFamilies: n_max must be >= 1");
  if (!rule_) throw Error("AngularFamilies: missing eps rule");
  cache_.resize(kEpsCache);
  for (int n = 1; n <= kEpsCache; ++n) cache_[n - 1] = rule_(n);
  for (int n = 1; n <= n_max; ++n) {
    const double e = cache_[n - 1];
    if (!(e > 0.0) || !(e < eps_ceiling(n)))
      throw Error("AngularFamilies: eps_" + std::to_string(n) + " violates 0 < eps_n < 2^(-n-16) n^(-6)");
    if (!(e < plateau_half_width(n)))
      throw Error("AngularFamilies: J_" + std::to_string(n) + " not strictly inside I_" + std::to_string(n));
  }
  if (!anchors_strictly_increasing()) throw Error("AngularFamilies: anchor sequence is not strictly increasing");
}

double AngularFamilies::eps(int n) const {
  if (n < 1) throw Error("AngularFamilies::eps: n must be >= 1");
  if (n <= static_cast<int>(cache_.size())) return cache_[n - 1];
  return rule_(n);
}

std::vector<double> AngularFamilies::anchor_sequence() const {
  std::vector<double> a;
  a.reserve(3 * static_cast<std::size_t>(n_max_) + 3);
  a.push_back(0.0);
  a.push_back(shoulder(n_max_ + 1));
  for (int n = n_max_; n >= 1; --n) {
    const Interval I = plateau(n);
    a.push_back(I.lo);
    a.push_back(I.hi);
    a.push_back(shoulder(n));
  }
  a.push_back(kPi);
  return a;
}

bool AngularFamilies::anchors_strictly_increasing() const {
  const auto a = anchor_sequence();
  return std::adjacent_find(a.begin(), a.end(), std::greater_equal<>()) == a.end();
}

bool in_half_annulus(Complex z) {
  const double r = std::abs(z);
  return r > kInnerRadius && r < kOuterRadius && z.imag() > 0.0;
}

double boundary_distance(Complex z) {
  if (!in_half_annulus(z)) throw Error("boundary_distance: point outside G1");
  const double r = std::abs(z);
  return std::min({r - kInnerRadius, kOuterRadius - r, segment_distance(z, 0.5, 1.0),
                   segment_distance(z, -1.0, -0.5)});
}

std::string Region::name() const {
  switch (kind) {
    case RegionKind::Disc: return "D_" + std::to_string(n);
    case RegionKind::Complement: return "C_" + std::to_string(n);
    case RegionKind::Sector: return "S_" + std::to_string(n);
    case RegionKind::Whole: return "G1";
  }
  return "G1";
}

Region Region::parse(const std::string& name) {
  if (name == "G1") return whole();
  if (name.size() < 3 || name[1] != '_') throw Error("Region::parse: bad region name '" + name + "'");
  const int n = std::stoi(name.substr(2));
  if (n < 1) throw Error("Region::parse: index must be >= 1");
  switch (name[0]) {
    case 'D': return disc(n);
    case 'C': return complement(n);
    case 'S': return sector(n);
    default: throw Error("Region::parse: bad region name '" + name + "'");
  }
}

bool region_membership(Complex z, const Region& region) {
  if (!in_half_annulus(z)) return false;
  switch (region.kind) {
    case RegionKind::Whole: return true;
    case RegionKind::Disc: return std::abs(z - disc_center(region.n)) < disc_radius(region.n);
    case RegionKind::Complement: return !(std::abs(z - disc_center(region.n)) < disc_radius(region.n));
    case RegionKind::Sector: return AngularFamilies::plateau(region.n).contains(std::arg(z));
  }
  return false;
}

KernelDistance min_kernel_distance(const AngularFamilies& fam, int n, const SamplingPlan& plan) {
  if (plan.count <= 0) throw Error("min_kernel_distance: sampling plan has no samples");
  if (n < 1 || n > fam.n_max()) throw Error("min_kernel_distance: n outside 1..n_max");

  const Interval J = fam.jump(n);
  constexpr int kArcPoints = 33;
  std::vector<Complex> arc;
  for (int i = 0; i < kArcPoints; ++i)
    arc.push_back(std::polar(1.0, J.lo + (J.hi - J.lo) * i / (kArcPoints - 1)));

  const int on_circle = std::max(1, plan.count / 2);
  std::vector<Complex> zs;
  const Complex c = disc_center(n);
  const double rho = disc_radius(n);
  for (int i = 0; i < on_circle; ++i) {
    const Complex z = c + std::polar(rho, kTwoPi * (i + 0.5) / on_circle);
    if (std::abs(z) <= 1.0) zs.push_back(z);
  }
  // Where the circle meets |z| = 1; the constrained minimum sits there.
  const double phi = 2.0 * std::asin(0.5 * rho);
  zs.push_back(std::polar(1.0, AngularFamilies::theta(n) - phi));
  zs.push_back(std::polar(1.0, AngularFamilies::theta(n) + phi));
  SamplingPlan far{plan.count - on_circle, plan.seed};
  if (far.count > 0) {
    for (Complex z : sample_half_annulus(far))
      if (region_membership(z, Region::complement(n))) zs.push_back(z);
  }

  double best = std::numeric_limits<double>::infinity();
  for (Complex z : zs)
    for (Complex w : arc) best = std::min(best, std::abs(w - z));
  const double bound = 1.0 / (64.0 * n * static_cast<double>(n));
  return {best, bound, best > bound, static_cast<int>(zs.size())};
}

SectorInclusion sector_inclusion_check(int n) {
  if (n < 1) throw Error("sector_inclusion_check: n must be >= 1");
  const double rho = disc_radius(n);
  const double dev = std::asin(rho / (1.0 - rho));
  const double hw = AngularFamilies::plateau_half_width(n);
  return {dev, hw, dev <= hw};
}

}  // namespace hwil
