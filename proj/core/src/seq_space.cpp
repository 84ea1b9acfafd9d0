#include "hwil/seq_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hwil {

std::pair<int, int> diag_unpair(int n) {
  if (n < 1) throw Error("diag_unpair: index must be >= 1");
  // Diagonal s holds indices (s-1)s/2 + 1 .. s(s+1)/2.
  int s = static_cast<int>(std::floor((std::sqrt(8.0 * n + 1.0) - 1.0) / 2.0));
  while (static_cast<long long>(s) * (s + 1) / 2 < n) ++s;
  while (s > 1 && static_cast<long long>(s - 1) * s / 2 >= n) --s;
  const int p = n - static_cast<int>(static_cast<long long>(s - 1) * s / 2);
  return {p, s + 1 - p};
}

KoetheMatrix::KoetheMatrix(int n_max, int k_max) : n_max_(n_max), k_max_(k_max) {
  if (n_max < 1 || k_max < 1) throw Error("KoetheMatrix: n_max and k_max must be >= 1");
  entries_.resize(static_cast<std::size_t>(n_max) * k_max);
  for (int n = 1; n <= n_max; ++n)
    for (int k = 1; k <= k_max; ++k)
      entries_[static_cast<std::size_t>(n - 1) * k_max + (k - 1)] = rule(n, k);
}

double KoetheMatrix::rule(int n, int k) {
  if (k < 1) throw Error("KoetheMatrix::rule: level must be >= 1");
  const auto [m, j] = diag_unpair(n);
  return m <= k ? 1.0 / j : 1.0;
}

double KoetheMatrix::operator()(int n, int k) const {
  if (n < 1 || n > n_max_ || k < 1 || k > k_max_)
    throw Error("KoetheMatrix: index (" + std::to_string(n) + ", " +
                std::to_string(k) + ") outside the truncation");
  return entries_[static_cast<std::size_t>(n - 1) * k_max_ + (k - 1)];
}

std::vector<double> KoetheMatrix::level(int k) const {
  std::vector<double> out(static_cast<std::size_t>(n_max_));
  for (int n = 1; n <= n_max_; ++n) out[n - 1] = (*this)(n, k);
  return out;
}

KoetheMatrix default_matrix(int n_max, int k_max) { return KoetheMatrix(n_max, k_max); }

SeqWeight::SeqWeight(std::vector<double> values, std::vector<double> witnesses)
    : values_(std::move(values)), witnesses_(std::move(witnesses)) {
  if (values_.empty()) throw Error("SeqWeight: empty truncation");
  normalized_ = true;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v > 0.0) || !std::isfinite(v)) throw Error("SeqWeight: values must be positive and finite");
    const double n = static_cast<double>(i + 1);
    if (v < 1.0 / (n * n) || v > 1.0) normalized_ = false;
  }
  for (double c : witnesses_)
    if (!(c > 0.0)) throw Error("SeqWeight: witnesses must be positive");
}

double SeqWeight::operator()(int n) const {
  if (n < 1 || n > size()) throw Error("SeqWeight: index " + std::to_string(n) + " outside the truncation");
  return values_[n - 1];
}

SeqWeight SeqWeight::scaled(double c) const {
  if (!(c > 0.0)) throw Error("SeqWeight::scaled: factor must be positive");
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  std::vector<double> w(witnesses_);
  for (double& x : w) x *= c;
  return SeqWeight(std::move(v), std::move(w));
}

std::vector<double> scan_witnesses(const SeqWeight& weight, const KoetheMatrix& matrix) {
  const int n_top = std::min(weight.size(), matrix.n_max());
  std::vector<double> c(static_cast<std::size_t>(matrix.k_max()), 0.0);
  for (int k = 1; k <= matrix.k_max(); ++k)
    for (int n = 1; n <= n_top; ++n) c[k - 1] = std::max(c[k - 1], weight(n) / matrix(n, k));
  return c;
}

bool witnesses_hold(const SeqWeight& weight, const KoetheMatrix& matrix, double rel_slack) {
  if (!weight.has_witnesses()) return false;
  const int k_top = std::min(static_cast<int>(weight.witnesses().size()), matrix.k_max());
  const int n_top = std::min(weight.size(), matrix.n_max());
  for (int k = 1; k <= k_top; ++k) {
    const double c = weight.witnesses()[k - 1];
    for (int n = 1; n <= n_top; ++n)
      if (weight(n) > c * matrix(n, k) * (1.0 + rel_slack)) return false;
  }
  return true;
}

SeqWeight matrix_level_weight(const KoetheMatrix& matrix, int k) {
  SeqWeight bare(matrix.level(k));
  return SeqWeight(matrix.level(k), scan_witnesses(bare, matrix));
}

NormalizedWeight normalize_seq_weight(const SeqWeight& mu, const KoetheMatrix& matrix) {
  if (!mu.has_witnesses()) throw Error("normalize_seq_weight: weight carries no witnesses c_k");
  if (static_cast<int>(mu.witnesses().size()) < matrix.k_max())
    throw Error("normalize_seq_weight: need one witness per level k <= k_max");
  const int n_top = std::min(mu.size(), matrix.n_max());
  if (n_top < 1) throw Error("normalize_seq_weight: empty truncation");

  std::vector<double> d(static_cast<std::size_t>(matrix.k_max()));
  for (int k = 1; k <= matrix.k_max(); ++k) d[k - 1] = std::max(mu.witnesses()[k - 1], 1.0);

  std::vector<double> out(static_cast<std::size_t>(n_top));
  for (int n = 1; n <= n_top; ++n) {
    double inf = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= matrix.k_max(); ++k) inf = std::min(inf, d[k - 1] * matrix(n, k));
    out[n - 1] = std::min(inf, matrix(n, 1));
  }
  // mu <= c_k lambda_k <= d_k lambda_k for every k, and mu <= d_1 lambda_1;
  // so mu <= d_1 * min(inf_k d_k lambda_k, lambda_1).
  return {SeqWeight(std::move(out), d), d[0]};
}

FiniteSeq FiniteSeq::unit(int size, int n, Complex value) {
  FiniteSeq a(size);
  a[n] = value;
  return a;
}

Complex FiniteSeq::operator[](int n) const {
  if (n < 1 || n > size()) throw Error("FiniteSeq: index " + std::to_string(n) + " out of range");
  return coeffs_[n - 1];
}

Complex& FiniteSeq::operator[](int n) {
  if (n < 1 || n > size()) throw Error("FiniteSeq: index " + std::to_string(n) + " out of range");
  return coeffs_[n - 1];
}

std::vector<int> FiniteSeq::support() const {
  std::vector<int> s;
  for (int n = 1; n <= size(); ++n)
    if (coeffs_[n - 1] != Complex{}) s.push_back(n);
  return s;
}

FiniteSeq& FiniteSeq::operator+=(const FiniteSeq& other) {
  if (other.size() > size()) coeffs_.resize(other.coeffs_.size());
  for (int n = 1; n <= other.size(); ++n) coeffs_[n - 1] += other.coeffs_[n - 1];
  return *this;
}

FiniteSeq& FiniteSeq::operator-=(const FiniteSeq& other) {
  if (other.size() > size()) coeffs_.resize(other.coeffs_.size());
  for (int n = 1; n <= other.size(); ++n) coeffs_[n - 1] -= other.coeffs_[n - 1];
  return *this;
}

FiniteSeq& FiniteSeq::operator*=(Complex c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

double seminorm(const FiniteSeq& a, const SeqWeight& weight) {
  double sup = 0.0;
  for (int n = 1; n <= a.size(); ++n) {
    const double m = std::abs(a[n]);
    if (m == 0.0) continue;
    sup = std::max(sup, weight(n) * m);
  }
  return sup;
}

}  // namespace hwil
