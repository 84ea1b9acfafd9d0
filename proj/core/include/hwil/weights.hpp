#pragma once

// Angular plateau/shoulder weights on G1 (functions of arg z only), the
// dominating-weight normalizer for the associated system, and the product
// weights v_k(z1, z2) = w_k(z1) u_k(z1, |z2|) on G1 x C.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "hwil/geometry.hpp"
#include "hwil/seq_space.hpp"

namespace hwil {

struct Anchor {
  double theta;
  double value;
};

/// Continuous piecewise-affine function of theta on [0, pi], given by its
/// anchors (strictly increasing angles, first at 0, last at pi).
class AngularWeight {
 public:
  explicit AngularWeight(std::vector<Anchor> anchors);

  /// Evaluation at theta; angles outside [0, pi] are clamped.
  double operator()(double theta) const;
  double at(Complex z) const { return (*this)(std::arg(z)); }

  std::span<const Anchor> anchors() const { return anchors_; }

  /// Exact sup over [iv.lo, iv.hi]: the max over the interval endpoints
  /// and the anchors inside.
  double sup_over(const Interval& iv) const;
  double max_value() const;
  double min_value() const;

  AngularWeight scaled(double c) const;

  static AngularWeight pointwise_min(const AngularWeight& a, const AngularWeight& b);
  static AngularWeight pointwise_max(const AngularWeight& a, const AngularWeight& b);

 private:
  std::vector<Anchor> anchors_;
};

/// The plateau/shoulder scheme: value plateau(n) on I_n for n <= n_cut,
/// 1 at every shoulder s_n (n <= n_cut + 1), 1 at 0 and pi, affine between
/// consecutive anchors. On [0, s_{n_cut+1}] the weight is the constant 1.
AngularWeight plateau_weight(const AngularFamilies& fam, int n_cut,
                             const std::function<double(int)>& plateau);

/// w_k: plateau values lambda_{nk}.
AngularWeight make_wk(int k, const KoetheMatrix& matrix, const AngularFamilies& fam, int n_cut);

/// The weight built like w_k with lambda_{nk} replaced by lam(n).
AngularWeight make_canonical_wbar(const SeqWeight& lam, const AngularFamilies& fam, int n_cut);

/// The floor weight with plateau values 1/n^2.
AngularWeight floor_weight(const AngularFamilies& fam, int n_cut);

struct DominatingWeight {
  AngularWeight weight;       // w-bar = min(w_1, max(w^(1), w'))
  double scale;               // C with C w' <= w-bar
  SeqWeight lam;              // value of w-bar on D_n, n <= n_cut
  std::vector<double> rho;    // max(1/n^2, sup_{I_n} w')
};

/// Replaces an arbitrary angular weight w' by a dominating weight that is
/// <= 1, >= the floor weight, and constant on every D_n.
DominatingWeight lemma1_normalize(const AngularWeight& wprime, const AngularFamilies& fam,
                                  const KoetheMatrix& matrix, const AngularWeight& w1, int n_cut);

/// (k - 1) / (2k).
double u_exponent(int k);

/// u_k(z1, t): (1 + 1/d(z1) + t)^(-e) for t <= k, (1 + t)^(-e) for
/// t >= k + 1, affine in between; e = (k-1)/(2k).
double uk(int k, Complex z1, double t);

/// C_k = (k + 2)^((k-1)/(2k)).
double restriction_constant(int k);

class ProductWeight {
 public:
  ProductWeight(AngularWeight base, int level);

  double operator()(Complex z1, Complex z2) const { return at(z1, std::abs(z2)); }
  double at(Complex z1, double t) const;

  const AngularWeight& base() const { return base_; }
  int level() const { return level_; }

 private:
  AngularWeight base_;
  int level_;
};

struct ScaledProductWeight {
  double scale;
  ProductWeight weight;
};

/// v-bar(z1, z2) = min_i scale_i * v_{k_i}(z1, z2).
using ProductCombination = std::vector<ScaledProductWeight>;

double evaluate(const ProductCombination& vbar, Complex z1, double t);

/// sup over z2 in C of v-bar(z1, z2). Each u_k is monotone between the
/// breakpoints {0, k, k+1}, so the min is quasi-concave there and the sup
/// on each piece is found by golden-section search.
double weight_transfer_sup(const ProductCombination& vbar, Complex z1);

}  // namespace hwil
