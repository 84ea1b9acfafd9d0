#include "hwil/outer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hwil {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// 1 - r e^{i psi}, accurate for r -> 1 and psi -> 0.
Complex one_minus(double r, double psi) {
  const double s = std::sin(0.5 * psi);
  return {(1.0 - r) + 2.0 * r * s * s, -r * std::sin(psi)};
}

Complex log1p_complex(Complex w) {
  const double x = w.real(), y = w.imag();
  return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

double normalize_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

}  // namespace

double Angle::value() const {
  return anchor == 0 ? offset : AngularFamilies::theta(anchor) + offset;
}

double Angle::from_center(int m) const {
  if (anchor == m) return offset;
  if (anchor == 0) return offset - AngularFamilies::theta(m);
  return (AngularFamilies::theta(anchor) - AngularFamilies::theta(m)) + offset;
}

Complex herglotz_centered(double r, double phi, double h) {
  if (h == 0.0) return {};
  if (r == 0.0) return {2.0 * h, 0.0};
  const Complex oa = one_minus(r, phi + h);  // 1 - z e^{-ia}
  const Complex ob = one_minus(r, phi - h);  // 1 - z e^{-ib}
  // ob / oa = 1 + w
  const Complex w = std::polar(r, phi) * Complex(0.0, 2.0 * std::sin(h)) / oa;
  const Complex L = std::abs(w) <= 0.5 ? log1p_complex(w) : std::log(ob) - std::log(oa);
  return Complex(2.0 * h, 0.0) - Complex(0.0, 2.0) * L;
}

Complex herglotz_segment(Complex z, double a, double b) {
  if (!(std::abs(z) < 1.0)) throw Error("herglotz_segment: requires |z| < 1");
  if (!(a < b)) throw Error("herglotz_segment: requires a < b");
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double r = std::abs(z);
  const double phi = r == 0.0 ? 0.0 : std::arg(z) - c;
  return herglotz_centered(r, phi, h);
}

double herglotz_pv_inside(double off, double h) {
  if (!(std::abs(off) < h)) throw Error("herglotz_pv_inside: point not interior to the segment");
  // -2 log( sin((h - off)/2) / sin((h + off)/2) )
  const double sb = std::sin(0.5 * (h + off));
  const double diff = -2.0 * std::cos(0.5 * h) * std::sin(0.5 * off);  // sin A - sin B
  const double q = diff / sb;
  if (std::abs(q) < 0.5) return -2.0 * std::log1p(q);
  return -2.0 * (std::log(std::sin(0.5 * (h - off))) - std::log(sb));
}

OuterFamily::OuterFamily(AngularFamilies fam, MCutPolicy policy) : fam_(std::move(fam)), policy_(policy) {
  if (policy_.base < 1 || policy_.cap < policy_.base) throw Error("MCutPolicy: need 1 <= base <= cap");
  if (!(policy_.target > 0.0)) throw Error("MCutPolicy: target must be positive");
  // Terms (m+4) ln2 2 eps_m / 2pi, m = 1..top, summed from the top down.
  // Beyond `top` each term is below half its predecessor (eps_m < 2^(-m-16) m^-6),
  // so the remainder is bounded by the last term.
  const int top = policy_.cap + 64;
  std::vector<double> term(static_cast<std::size_t>(top) + 1, 0.0);
  for (int m = 1; m <= top; ++m) term[m] = (m + 4) * kLn2 * 2.0 * fam_.eps(m) / kTwoPi;
  tail_sums_.assign(static_cast<std::size_t>(top) + 1, 0.0);
  double acc = term[top];
  for (int M = top; M >= 0; --M) {
    tail_sums_[M] = acc;
    if (M >= 1) acc += term[M];
  }
}

double OuterFamily::log_eps(int n) const { return std::log(fam_.eps(n)); }

int OuterFamily::containing_jump(const Angle& theta) const {
  if (theta.anchor != 0 && std::abs(theta.offset) <= fam_.eps(theta.anchor)) return theta.anchor;
  const double t = normalize_angle(theta.value());
  if (t <= 0.0 || t > 0.75) return 0;
  const double guess = std::round(1.0 / (2.0 * t));
  if (guess > 1e9) return 0;
  const int m0 = static_cast<int>(guess);
  for (int m = std::max(1, m0 - 1); m <= m0 + 1; ++m)
    if (std::abs(theta.from_center(m)) <= fam_.eps(m)) return m;
  return 0;
}

double OuterFamily::jump_distance(const Angle& theta) const {
  const double t = normalize_angle(theta.value());
  double d = std::min(t, kTwoPi - t);
  if (t > 0.0 && t < kPi) {
    const double guess = std::min(std::round(1.0 / (2.0 * t)), 1e9);
    const int m0 = static_cast<int>(guess);
    for (int m = std::max(1, m0 - 3); m <= m0 + 3; ++m)
      d = std::min(d, std::abs(std::abs(theta.from_center(m)) - fam_.eps(m)));
  }
  return d;
}

double OuterFamily::log_phi(int n, const Angle& theta) const {
  if (jump_distance(theta) == 0.0) throw Error("log_phi: angle sits on a jump of the boundary profile");
  const int m = containing_jump(theta);
  if (m == n) return 0.0;
  if (m != 0) return log_eps(n) - (m + 4) * kLn2;
  return log_eps(n);
}

double OuterFamily::tail_bound(int m_cut, double dist) const {
  if (m_cut < 0 || m_cut >= static_cast<int>(tail_sums_.size())) throw Error("tail_bound: m_cut out of range");
  if (!(dist > 0.0)) return std::numeric_limits<double>::infinity();
  if (tail_sums_[m_cut] == 0.0) return 0.0;
  return tail_sums_[m_cut] * 2.0 / dist;
}

double OuterFamily::tail_distance(double r, const Angle& theta, int m_cut) const {
  const double alpha = AngularFamilies::theta(m_cut + 1) + fam_.eps(m_cut + 1);
  const double t = normalize_angle(theta.value());
  if (t <= alpha) return 1.0 - r;
  auto dist_to = [&](double a) {
    const double s = std::sin(0.5 * (t - a));
    return std::sqrt((1.0 - r) * (1.0 - r) + 4.0 * r * s * s);
  };
  return std::min(dist_to(0.0), dist_to(alpha));
}

int OuterFamily::initial_cut(int n_top) const {
  return std::min(policy_.cap, std::max({policy_.base, n_top, fam_.n_max()}));
}

std::vector<Complex> OuterFamily::segments(double r, const Angle& theta, int m_cut) const {
  std::vector<Complex> H(static_cast<std::size_t>(m_cut));
  for (int m = 1; m <= m_cut; ++m) H[m - 1] = herglotz_centered(r, theta.from_center(m), fam_.eps(m));
  return H;
}

ExponentBatch OuterFamily::exponents_fixed(double r, const Angle& theta, int n_top, int m_cut) const {
  if (!(r >= 0.0 && r < 1.0)) throw Error("exponents: requires 0 <= r < 1");
  if (n_top < 1) throw Error("exponents: n_top must be >= 1");
  if (m_cut < n_top) throw Error("exponents: m_cut must be >= n");
  const double dist = tail_distance(r, theta, m_cut);
  if (!(dist > 0.0)) throw Error("exponents: point touches the tail arc; cannot bound the truncation");
  const auto H = segments(r, theta, m_cut);
  ExponentBatch out{std::vector<Complex>(static_cast<std::size_t>(n_top)), tail_bound(m_cut, dist), m_cut};
  for (int n = 1; n <= n_top; ++n) {
    Complex jumps{};
    for (int m = 1; m <= m_cut; ++m)
      if (m != n) jumps += (m + 4) * kLn2 * H[m - 1];
    const Complex full_minus_own = Complex(kTwoPi - H[n - 1].real(), -H[n - 1].imag());
    out.h[n - 1] = (log_eps(n) * full_minus_own - jumps) / kTwoPi;
  }
  return out;
}

ExponentBatch OuterFamily::exponents(double r, const Angle& theta, int n_top) const {
  int m_cut = initial_cut(n_top);
  while (m_cut < policy_.cap && !(tail_bound(m_cut, tail_distance(r, theta, m_cut)) < policy_.target))
    m_cut = std::min(policy_.cap, 2 * m_cut);
  return exponents_fixed(r, theta, n_top, m_cut);
}

ExponentBatch OuterFamily::exponents(Complex z, int n_top) const {
  const double r = std::abs(z);
  return exponents(r, Angle::absolute(r == 0.0 ? 0.0 : std::arg(z)), n_top);
}

OuterExponent OuterFamily::exponent(int n, Complex z, int m_cut) const {
  const double r = std::abs(z);
  auto b = exponents_fixed(r, Angle::absolute(r == 0.0 ? 0.0 : std::arg(z)), n, m_cut);
  return {b.h[n - 1], b.tail_bound, b.m_cut};
}

OuterExponent OuterFamily::exponent(int n, Complex z) const {
  auto b = exponents(z, n);
  return {b.h[n - 1], b.tail_bound, b.m_cut};
}

BoundaryPhases OuterFamily::boundary_phases(const Angle& theta, int n_top) const {
  if (n_top < 1) throw Error("boundary_phases: n_top must be >= 1");
  if (jump_distance(theta) == 0.0) throw Error("boundary_phases: angle sits on a jump of the boundary profile");
  int m_cut = initial_cut(n_top);
  while (m_cut < policy_.cap && !(tail_bound(m_cut, tail_distance(1.0, theta, m_cut)) < policy_.target))
    m_cut = std::min(policy_.cap, 2 * m_cut);
  const double tail = tail_bound(m_cut, tail_distance(1.0, theta, m_cut));
  if (!std::isfinite(tail)) throw Error("boundary_phases: angle inside the tail arc");

  const int host = containing_jump(theta);
  std::vector<double> im(static_cast<std::size_t>(m_cut));
  for (int m = 1; m <= m_cut; ++m) {
    const double off = theta.from_center(m);
    im[m - 1] = m == host ? herglotz_pv_inside(off, fam_.eps(m)) : herglotz_centered(1.0, off, fam_.eps(m)).imag();
  }
  BoundaryPhases out{std::vector<double>(static_cast<std::size_t>(n_top)),
                     std::vector<double>(static_cast<std::size_t>(n_top)), tail};
  for (int n = 1; n <= n_top; ++n) {
    double jumps = 0.0;
    for (int m = 1; m <= m_cut; ++m)
      if (m != n) jumps += (m + 4) * kLn2 * im[m - 1];
    out.phase[n - 1] = (-log_eps(n) * im[n - 1] - jumps) / kTwoPi;
    out.log_modulus[n - 1] = host == n ? 0.0 : (host != 0 ? log_eps(n) - (host + 4) * kLn2 : log_eps(n));
  }
  return out;
}

OuterFamily::RadialLimit OuterFamily::radial_limit(int n, const Angle& theta) const {
  constexpr int kLevels = 5;
  const double jd = jump_distance(theta);
  if (!(jd > 0.0)) throw ToleranceError("radial_limit: angle sits on a jump");
  // First radial step at most jd / 8, halving four more times.
  const int j0 = std::max(4, static_cast<int>(std::ceil(std::log2(8.0 / jd))));
  if (j0 + kLevels - 1 > 53) throw ToleranceError("radial_limit: angle too near a jump for binary64 radii");

  int m_cut = initial_cut(n);
  while (m_cut < policy_.cap && !(tail_bound(m_cut, tail_distance(1.0, theta, m_cut)) < policy_.target))
    m_cut = std::min(policy_.cap, 2 * m_cut);

  RadialLimit out{};
  out.j0 = j0;
  double tail = 0.0;
  std::vector<std::vector<Complex>> T(kLevels);
  for (int i = 0; i < kLevels; ++i) {
    const double r = 1.0 - std::ldexp(1.0, -(j0 + i));
    auto b = exponents_fixed(r, theta, n, m_cut);
    tail = std::max(tail, b.tail_bound);
    out.samples.push_back(b.h[n - 1]);
    T[i].push_back(b.h[n - 1]);
    for (int k = 1; k <= i; ++k) {
      const double f = std::ldexp(1.0, k) - 1.0;
      T[i].push_back(T[i][k - 1] + (T[i][k - 1] - T[i - 1][k - 1]) / f);
    }
  }
  out.limit = T[kLevels - 1][kLevels - 1];
  const Complex prev = T[kLevels - 2][kLevels - 2];
  out.err = {std::abs(out.limit.real() - prev.real()), std::abs(out.limit.imag() - prev.imag())};
  out.tail_bound = tail;
  return out;
}

BoundaryValue OuterFamily::boundary_value(int n, const Angle& theta, BoundaryMethod method) const {
  const double lm = log_phi(n, theta);
  if (method == BoundaryMethod::PrincipalValue) {
    auto p = boundary_phases(theta, n);
    const double ph = p.phase[n - 1];
    return {std::exp(lm), lm, ph, p.tail_bound + 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(ph))};
  }
  auto rl = radial_limit(n, theta);
  return {std::exp(lm), lm, rl.limit.imag(), rl.err.imag() + rl.tail_bound};
}

ModulusBoundReport modulus_bound_check(const OuterFamily& outer, int n, std::span<const Complex> samples) {
  ModulusBoundReport rep{};
  rep.n = n;
  rep.log_bound = -(4.0 + n) * kLn2;
  rep.max_log_modulus = -std::numeric_limits<double>::infinity();
  for (Complex z : samples) {
    if (!region_membership(z, Region::complement(n))) {
      ++rep.excluded;
      continue;
    }
    const auto h = outer.exponent(n, z);
    rep.max_log_modulus = std::max(rep.max_log_modulus, h.value.real() + h.tail_bound);
    ++rep.evaluated;
  }
  rep.pass = rep.evaluated > 0 && rep.max_log_modulus <= rep.log_bound;

  const double eps = outer.families().eps(n);
  const double n4 = std::pow(static_cast<double>(n), 4);
  rep.chain_value = eps * 4096.0 * n4 / kPi + eps;
  rep.chain_bound = std::ldexp(1.0, -4 - n);
  rep.chain_pass = rep.chain_value <= rep.chain_bound;
  return rep;
}

RadialConvergence radial_convergence_check(const OuterFamily& outer, int n, const Angle& theta, double rel_tol) {
  const auto rl = outer.radial_limit(n, theta);
  RadialConvergence rc{};
  rc.n = n;
  rc.theta = theta.value();
  rc.limit_log = rl.limit.real();
  rc.target_log = outer.log_phi(n, theta);
  rc.rel_err = std::abs(std::expm1(rc.limit_log - rc.target_log));
  rc.cauchy = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rl.samples.size(); ++i) {
    const double d = std::abs(rl.samples[i].real() - rl.samples[i - 1].real());
    if (d > prev + 1e-13) rc.cauchy = false;
    prev = d;
  }
  rc.pass = rc.cauchy && rc.rel_err <= rel_tol;
  return rc;
}

}  // namespace hwil
