#include "hwil/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hwil {

AngularWeight::AngularWeight(std::vector<Anchor> anchors) : anchors_(std::move(anchors)) {
  if (anchors_.size() < 2) throw Error("AngularWeight: need at least two anchors");
  if (anchors_.front().theta != 0.0 || anchors_.back().theta != kPi)
    throw Error("AngularWeight: anchors must span [0, pi]");
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    if (!(anchors_[i].value > 0.0) || !std::isfinite(anchors_[i].value))
      throw Error("AngularWeight: anchor values must be positive");
    if (i > 0 && !(anchors_[i].theta > anchors_[i - 1].theta))
      throw Error("AngularWeight: anchor angles must be strictly increasing");
  }
}

double AngularWeight::operator()(double theta) const {
  theta = std::clamp(theta, 0.0, kPi);
  auto it = std::upper_bound(anchors_.begin(), anchors_.end(), theta,
                             [](double t, const Anchor& a) { return t < a.theta; });
  if (it == anchors_.end()) return anchors_.back().value;
  const Anchor& hi = *it;
  const Anchor& lo = *(it - 1);
  if (theta == lo.theta) return lo.value;
  return lo.value + (hi.value - lo.value) * ((theta - lo.theta) / (hi.theta - lo.theta));
}

double AngularWeight::sup_over(const Interval& iv) const {
  double s = std::max((*this)(iv.lo), (*this)(iv.hi));
  for (const Anchor& a : anchors_)
    if (a.theta > iv.lo && a.theta < iv.hi) s = std::max(s, a.value);
  return s;
}

double AngularWeight::max_value() const {
  double m = 0.0;
  for (const Anchor& a : anchors_) m = std::max(m, a.value);
  return m;
}

double AngularWeight::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const Anchor& a : anchors_) m = std::min(m, a.value);
  return m;
}

AngularWeight AngularWeight::scaled(double c) const {
  std::vector<Anchor> out(anchors_);
  for (Anchor& a : out) a.value *= c;
  return AngularWeight(std::move(out));
}

namespace {

template <class Op>
AngularWeight combine(const AngularWeight& a, const AngularWeight& b, Op op) {
  std::vector<double> ts;
  for (const Anchor& x : a.anchors()) ts.push_back(x.theta);
  for (const Anchor& x : b.anchors()) ts.push_back(x.theta);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::vector<Anchor> out;
  out.reserve(2 * ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t0 = ts[i];
    const double a0 = a(t0), b0 = b(t0);
    out.push_back({t0, op(a0, b0)});
    if (i + 1 == ts.size()) break;
    const double t1 = ts[i + 1];
    const double g0 = a0 - b0, g1 = a(t1) - b(t1);
    if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) {
      const double tc = t0 + (t1 - t0) * (g0 / (g0 - g1));
      if (tc > t0 && tc < t1) out.push_back({tc, op(a(tc), b(tc))});
    }
  }
  return AngularWeight(std::move(out));
}

}  // namespace

AngularWeight AngularWeight::pointwise_min(const AngularWeight& a, const AngularWeight& b) {
  return combine(a, b, [](double x, double y) { return std::min(x, y); });
}

AngularWeight AngularWeight::pointwise_max(const AngularWeight& a, const AngularWeight& b) {
  return combine(a, b, [](double x, double y) { return std::max(x, y); });
}

AngularWeight plateau_weight(const AngularFamilies& /*fam*/, int n_cut,
                             const std::function<double(int)>& plateau) {
  if (n_cut < 1) throw Error("plateau_weight: n_cut must be >= 1");
  std::vector<Anchor> a;
  a.reserve(3 * static_cast<std::size_t>(n_cut) + 3);
  a.push_back({0.0, 1.0});
  a.push_back({AngularFamilies::shoulder(n_cut + 1), 1.0});
  for (int n = n_cut; n >= 1; --n) {
    const double p = plateau(n);
    const Interval I = AngularFamilies::plateau(n);
    a.push_back({I.lo, p});
    a.push_back({I.hi, p});
    a.push_back({AngularFamilies::shoulder(n), 1.0});
  }
  a.push_back({kPi, 1.0});
  return AngularWeight(std::move(a));
}

AngularWeight make_wk(int k, const KoetheMatrix& matrix, const AngularFamilies& fam, int n_cut) {
  if (k < 1 || k > matrix.k_max()) throw Error("make_wk: level outside 1..k_max");
  if (n_cut > matrix.n_max()) throw Error("make_wk: n_cut exceeds the matrix truncation");
  return plateau_weight(fam, n_cut, [&](int n) { return matrix(n, k); });
}

AngularWeight make_canonical_wbar(const SeqWeight& lam, const AngularFamilies& fam, int n_cut) {
  if (!lam.normalized()) throw Error("make_canonical_wbar: weight is not normalized (1/n^2 <= lam <= 1)");
  if (n_cut > lam.size()) throw Error("make_canonical_wbar: n_cut exceeds the weight truncation");
  return plateau_weight(fam, n_cut, [&](int n) { return lam(n); });
}

AngularWeight floor_weight(const AngularFamilies& fam, int n_cut) {
  return plateau_weight(fam, n_cut, [](int n) { return 1.0 / (static_cast<double>(n) * n); });
}

DominatingWeight lemma1_normalize(const AngularWeight& wprime, const AngularFamilies& fam,
                                  const KoetheMatrix& matrix, const AngularWeight& w1, int n_cut) {
  if (n_cut < 1 || n_cut > matrix.n_max()) throw Error("lemma1_normalize: n_cut outside 1..n_max");
  std::vector<double> rho(static_cast<std::size_t>(n_cut));
  for (int n = 1; n <= n_cut; ++n)
    rho[n - 1] = std::max(1.0 / (static_cast<double>(n) * n), wprime.sup_over(AngularFamilies::plateau(n)));

  const AngularWeight w_rho = plateau_weight(fam, n_cut, [&](int n) { return rho[n - 1]; });
  AngularWeight wbar = AngularWeight::pointwise_min(w1, AngularWeight::pointwise_max(w_rho, wprime));

  // w-bar / w' is linear-fractional between consecutive anchors of w-bar
  // (which include every breakpoint of w'), so its min sits on an anchor.
  double scale = std::numeric_limits<double>::infinity();
  for (const Anchor& a : wbar.anchors()) scale = std::min(scale, a.value / wprime(a.theta));

  std::vector<double> lam(static_cast<std::size_t>(n_cut));
  for (int n = 1; n <= n_cut; ++n) lam[n - 1] = wbar(AngularFamilies::theta(n));
  SeqWeight bare(lam);
  SeqWeight lam_w(std::move(lam), scan_witnesses(bare, matrix));
  return {std::move(wbar), scale, std::move(lam_w), std::move(rho)};
}

double u_exponent(int k) {
  if (k < 1) throw Error("u_exponent: level must be >= 1");
  return static_cast<double>(k - 1) / (2.0 * k);
}

double uk(int k, Complex z1, double t) {
  if (t < 0.0) throw Error("uk: t must be >= 0");
  const double e = u_exponent(k);
  const double d = boundary_distance(z1);
  const double kk = static_cast<double>(k);
  if (t <= kk) return std::pow(1.0 + 1.0 / d + t, -e);
  if (t >= kk + 1.0) return std::pow(1.0 + t, -e);
  const double lo = std::pow(1.0 + 1.0 / d + kk, -e);
  const double hi = std::pow(2.0 + kk, -e);
  return lo + (hi - lo) * (t - kk);
}

double restriction_constant(int k) { return std::pow(k + 2.0, u_exponent(k)); }

ProductWeight::ProductWeight(AngularWeight base, int level) : base_(std::move(base)), level_(level) {
  if (level < 1) throw Error("ProductWeight: level must be >= 1");
}

double ProductWeight::at(Complex z1, double t) const { return base_.at(z1) * uk(level_, z1, t); }

double evaluate(const ProductCombination& vbar, Complex z1, double t) {
  if (vbar.empty()) throw Error("evaluate: empty weight combination");
  double v = std::numeric_limits<double>::infinity();
  for (const auto& c : vbar) v = std::min(v, c.scale * c.weight.at(z1, t));
  return v;
}

double weight_transfer_sup(const ProductCombination& vbar, Complex z1) {
  if (vbar.empty()) throw Error("weight_transfer_sup: empty weight combination");
  std::vector<double> br{0.0};
  for (const auto& c : vbar) {
    br.push_back(c.weight.level());
    br.push_back(c.weight.level() + 1.0);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());

  auto f = [&](double t) { return evaluate(vbar, z1, t); };
  double best = 0.0;
  for (double t : br) best = std::max(best, f(t));

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    double a = br[i], b = br[i + 1];
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 120 && b - a > 1e-15 * (1.0 + b); ++it) {
      if (f1 < f2) {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + inv_phi * (b - a); f2 = f(x2);
      } else {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - inv_phi * (b - a); f1 = f(x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  // Beyond the last breakpoint every factor decreases to 0.
  return best;
}

}  // namespace hwil
