#pragma once

// Outer functions e_n = exp(h_n) on the unit disc with piecewise-constant
// boundary modulus phi_n:
//
//   phi_n = 1 on J_n,  eps_n 2^(-m-4) on J_m (m != n),  eps_n elsewhere,
//   h_n(z) = (1/2pi) int_0^{2pi} (e^{it} + z)/(e^{it} - z) log phi_n(t) dt.
//
// log phi_n is log eps_n plus constant jumps on the intervals J_m, so h_n
// is a finite combination of closed-form kernel integrals over J_m plus a
// tail over m > m_cut whose size is bounded explicitly. Everything stays
// in the log domain; moduli are only exponentiated by callers.

#include <complex>
#include <span>
#include <vector>

#include "hwil/geometry.hpp"

namespace hwil {

/// Angle on the unit circle kept relative to a family centre theta_anchor
/// so that theta - theta_m stays exact inside the tiny intervals J_m.
/// anchor == 0 means `offset` is the absolute angle.
struct Angle {
  int anchor = 0;
  double offset = 0.0;

  static Angle absolute(double theta) { return {0, theta}; }
  static Angle in_family(int m, double offset) { return {m, offset}; }

  double value() const;
  /// theta - theta_m.
  double from_center(int m) const;
};

/// int_a^b (e^{it} + z)/(e^{it} - z) dt for |z| < 1, via the antiderivative
/// t - 2i log(1 - z e^{-it}) with the principal logarithm.
Complex herglotz_segment(Complex z, double a, double b);

/// The same integral over [c - h, c + h] at z = r e^{i(c + phi)}; stable for
/// tiny h and for r -> 1. At r = 1 it is the boundary value for segments
/// not containing c + phi.
Complex herglotz_centered(double r, double phi, double h);

/// Principal-value imaginary part of the kernel integral over
/// [c - h, c + h] at e^{i(c + off)} with |off| < h.
double herglotz_pv_inside(double off, double h);

struct MCutPolicy {
  int base = 40;          // starting m_cut (raised to at least n_max)
  double target = 1e-10;  // tail bound goal
  int cap = 2048;
};

struct OuterExponent {
  Complex value;      // h_n(z) truncated at m_cut
  double tail_bound;  // |h_n(z) - value| <= tail_bound
  int m_cut;
};

struct ExponentBatch {
  std::vector<Complex> h;  // h_n at index n - 1
  double tail_bound;
  int m_cut;
};

enum class BoundaryMethod { Radial, PrincipalValue };

struct BoundaryValue {
  double modulus;      // phi_n(theta), exact
  double log_modulus;  // log phi_n(theta)
  double phase;        // Im h_n*(theta)
  double err;          // bound/estimate for the phase error
};

struct BoundaryPhases {
  std::vector<double> phase;  // Im h_n*(theta) at index n - 1
  std::vector<double> log_modulus;
  double tail_bound;
};

class OuterFamily {
 public:
  explicit OuterFamily(AngularFamilies fam, MCutPolicy policy = {});

  const AngularFamilies& families() const { return fam_; }
  const MCutPolicy& policy() const { return policy_; }

  double log_eps(int n) const;
  /// J_m containing theta in its closed hull, or 0.
  int containing_jump(const Angle& theta) const;
  /// Distance from theta to the nearest jump of the profiles (including
  /// the accumulation point 0).
  double jump_distance(const Angle& theta) const;
  /// log phi_n(theta); theta must not sit on a jump.
  double log_phi(int n, const Angle& theta) const;

  /// Rigorous bound on the truncation error of the sum over m > m_cut for
  /// a point at distance `dist` from the arc carrying those intervals.
  double tail_bound(int m_cut, double dist) const;
  double tail_distance(double r, const Angle& theta, int m_cut) const;

  OuterExponent exponent(int n, Complex z, int m_cut) const;
  /// As above with m_cut chosen by the policy.
  OuterExponent exponent(int n, Complex z) const;

  /// h_1..h_{n_top} at z = r e^{i theta} (r < 1) sharing one set of
  /// segment integrals, m_cut chosen by the policy.
  ExponentBatch exponents(double r, const Angle& theta, int n_top) const;
  ExponentBatch exponents(Complex z, int n_top) const;
  ExponentBatch exponents_fixed(double r, const Angle& theta, int n_top, int m_cut) const;

  /// Boundary phases of e_1..e_{n_top} at theta by the closed-form
  /// principal value.
  BoundaryPhases boundary_phases(const Angle& theta, int n_top) const;

  BoundaryValue boundary_value(int n, const Angle& theta, BoundaryMethod method) const;

  /// Radial samples used by the Radial method: j0 and the extrapolation of
  /// h_n((1 - 2^-j) e^{i theta}), j = j0..j0+4.
  struct RadialLimit {
    Complex limit;
    Complex err;  // componentwise |last - previous| extrapolant
    std::vector<Complex> samples;
    int j0;
    double tail_bound;
  };
  RadialLimit radial_limit(int n, const Angle& theta) const;

 private:
  int initial_cut(int n_top) const;
  std::vector<Complex> segments(double r, const Angle& theta, int m_cut) const;

  AngularFamilies fam_;
  MCutPolicy policy_;
  std::vector<double> tail_sums_;  // sum_{m > M} (m+4) ln2 * 2 eps_m / (2 pi)
};

struct ModulusBoundReport {
  int n;
  int evaluated;
  int excluded;            // samples in D_n (outside the check's domain)
  double max_log_modulus;  // max over samples of Re h_n + tail
  double log_bound;        // log 2^(-4-n)
  bool pass;
  double chain_value;      // pi^-1 eps_n 2^12 n^4 + eps_n
  double chain_bound;      // 2^(-4-n)
  bool chain_pass;
};

/// |e_n| <= 2^(-4-n) on the samples lying in C_n, compared in the log
/// domain, plus the arithmetic bound chain for the eps schedule.
ModulusBoundReport modulus_bound_check(const OuterFamily& outer, int n, std::span<const Complex> samples);

struct RadialConvergence {
  int n;
  double theta;
  double limit_log;   // extrapolated lim Re h_n((1 - d) e^{i theta})
  double target_log;  // log phi_n(theta)
  double rel_err;     // |exp(limit - target) - 1|
  bool cauchy;        // successive radial samples contract
  bool pass;
};

RadialConvergence radial_convergence_check(const OuterFamily& outer, int n, const Angle& theta,
                                           double rel_tol = 1e-6);

}  // namespace hwil
