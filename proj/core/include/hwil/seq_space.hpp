#pragma once

// Weighted sequence spaces on the positive integers: the Koethe matrix
// (lambda_{nk}), weights of its associated system, finitely supported
// elements of the projective hull and their weighted sup-seminorms.
//
// All indices are 1-based (n, k >= 1) to match the usual notation.

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "hwil/error.hpp"

namespace hwil {

using Complex = std::complex<double>;

/// Inverse of the diagonal enumeration of N x N:
/// 1 -> (1,1), 2 -> (1,2), 3 -> (2,1), 4 -> (1,3), 5 -> (2,2), ...
/// Along diagonal s = m + j - 1 the first coordinate m runs 1..s.
/// The enumeration guarantees n >= j.
std::pair<int, int> diag_unpair(int n);

/// Truncated decreasing Koethe matrix lambda_{nk}, n <= n_max, k <= k_max.
class KoetheMatrix {
 public:
  KoetheMatrix(int n_max, int k_max);

  /// The generating rule, valid for any n, k >= 1: with (m, j) =
  /// diag_unpair(n), lambda_{nk} = 1/j if m <= k and 1 otherwise.
  static double rule(int n, int k);

  double operator()(int n, int k) const;
  int n_max() const { return n_max_; }
  int k_max() const { return k_max_; }

  /// lambda_k as a vector indexed n - 1.
  std::vector<double> level(int k) const;

 private:
  int n_max_;
  int k_max_;
  std::vector<double> entries_;  // row-major in n, then k
};

KoetheMatrix default_matrix(int n_max, int k_max);

/// A positive weight on {1..size()} with optional domination witnesses
/// c_k (weight <= c_k * lambda_k on the truncation), stored for k = 1..
class SeqWeight {
 public:
  explicit SeqWeight(std::vector<double> values,
                     std::vector<double> witnesses = {});

  double operator()(int n) const;
  int size() const { return static_cast<int>(values_.size()); }
  std::span<const double> values() const { return values_; }
  std::span<const double> witnesses() const { return witnesses_; }
  bool has_witnesses() const { return !witnesses_.empty(); }

  /// 1/n^2 <= weight(n) <= 1 for every materialized n.
  bool normalized() const { return normalized_; }

  SeqWeight scaled(double c) const;

 private:
  std::vector<double> values_;
  std::vector<double> witnesses_;
  bool normalized_ = false;
};

/// Smallest constants c_k with weight <= c_k * lambda_k on the common
/// truncation, for k = 1..matrix.k_max().
std::vector<double> scan_witnesses(const SeqWeight& weight,
                                   const KoetheMatrix& matrix);

/// True when every stored witness dominates: weight(n) <= c_k lambda_{nk}.
bool witnesses_hold(const SeqWeight& weight, const KoetheMatrix& matrix,
                    double rel_slack = 0.0);

/// lambda_k itself as a SeqWeight, carrying its scanned witnesses.
SeqWeight matrix_level_weight(const KoetheMatrix& matrix, int k);

struct NormalizedWeight {
  SeqWeight weight;  // lambda-bar, carries witnesses d_k
  double scale;      // C with mu <= C * lambda-bar on the truncation
};

/// Given mu in the associated system with witnesses c_k, builds
/// lambda-bar = min(inf_k d_k lambda_k, lambda_1), d_k = max(c_k, 1).
NormalizedWeight normalize_seq_weight(const SeqWeight& mu,
                                      const KoetheMatrix& matrix);

/// Finitely supported complex sequence a_1..a_N (dense storage).
class FiniteSeq {
 public:
  FiniteSeq() = default;
  explicit FiniteSeq(int size) : coeffs_(static_cast<std::size_t>(size)) {}
  explicit FiniteSeq(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {}

  static FiniteSeq unit(int size, int n, Complex value = 1.0);

  int size() const { return static_cast<int>(coeffs_.size()); }
  Complex operator[](int n) const;
  Complex& operator[](int n);
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::vector<int> support() const;

  FiniteSeq& operator+=(const FiniteSeq& other);
  FiniteSeq& operator-=(const FiniteSeq& other);
  FiniteSeq& operator*=(Complex c);
  friend FiniteSeq operator+(FiniteSeq a, const FiniteSeq& b) { return a += b; }
  friend FiniteSeq operator-(FiniteSeq a, const FiniteSeq& b) { return a -= b; }
  friend FiniteSeq operator*(Complex c, FiniteSeq a) { return a *= c; }

 private:
  std::vector<Complex> coeffs_;
};

/// p(a) = sup_n weight(n) |a_n|; zero for the empty sequence.
double seminorm(const FiniteSeq& a, const SeqWeight& weight);

}  // namespace hwil
