#include "hwil/operators.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "hwil/error.hpp"
#include "hwil/sampling.hpp"

namespace hwil {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

double uniform01(std::uint64_t& state) { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; }

struct RowIntegrals {
  std::vector<Complex> value;  // j = 1..cols
  std::vector<double> err;
};

// (2 eps_n)^-1 int_{J_n} e_j* chi_n for j = 1..cols. theta = theta_n +
// eps_n s, s in (-1, 1), so the integral is (1/2) int_{-1}^{1} ds.
RowIntegrals row_integrals(const OuterFamily& outer, int n, int cols, const QuadraturePlan& plan) {
  const double eps = outer.families().eps(n);
  const int top = std::max(cols, n);
  auto integrate = [&](const QuadratureRule& rule, double* phase_err, double* round_err) {
    std::vector<Complex> acc(static_cast<std::size_t>(cols));
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const auto bp = outer.boundary_phases(Angle::in_family(n, eps * rule.nodes[i]), top);
      const double pn = bp.phase[n - 1];
      for (int j = 1; j <= cols; ++j) {
        const double pj = bp.phase[j - 1];
        acc[j - 1] += 0.5 * rule.weights[i] * std::polar(std::exp(bp.log_modulus[j - 1]), pj - pn);
      }
      if (phase_err) *phase_err = std::max(*phase_err, 2.0 * bp.tail_bound);
      if (round_err) {
        double big = std::abs(pn);
        for (double p : bp.phase) big = std::max(big, std::abs(p));
        *round_err = std::max(*round_err, 64.0 * kUlp * (1.0 + 2.0 * big));
      }
    }
    return acc;
  };

  double phase_err = 0.0, round_err = 0.0;
  const auto fine = integrate(graded_rule(plan.levels, plan.points), &phase_err, &round_err);
  const auto coarse = integrate(graded_rule(plan.levels - 1, plan.points), nullptr, nullptr);

  RowIntegrals out{fine, std::vector<double>(static_cast<std::size_t>(cols))};
  // The end cells of width 2^-levels carry the oscillating endpoint
  // singularities; their contribution to both rules is bounded by the modulus.
  const double end_cells = std::ldexp(1.0, 1 - plan.levels);
  for (int j = 1; j <= cols; ++j) {
    const double scale = std::exp(outer.log_phi(j, Angle::in_family(n, 0.0)));
    out.err[j - 1] = std::abs(fine[j - 1] - coarse[j - 1]) + scale * (end_cells + phase_err + round_err);
  }
  return out;
}

void check_plan(const QuadraturePlan& plan) {
  if (!(plan.tol > 0.0)) throw ToleranceError("tolerance unreachable: quadrature tolerance must be positive");
  if (plan.levels < 2) throw Error("quadrature plan needs at least two levels");
  if (plan.points < 1) throw Error("quadrature plan needs at least one point per cell");
}

void check_row(const OuterFamily& outer, int n, const RowIntegrals& row, double tol) {
  for (std::size_t j = 1; j <= row.err.size(); ++j) {
    const double scale = std::exp(outer.log_phi(static_cast<int>(j), Angle::in_family(n, 0.0)));
    if (!(row.err[j - 1] <= tol * scale))
      throw ToleranceError("tolerance unreachable: entry (" + std::to_string(n) + ", " + std::to_string(j) +
                           ") error " + std::to_string(row.err[j - 1] / scale) + " exceeds " + std::to_string(tol));
  }
}

}  // namespace

SpanValue evaluate(const OuterFamily& outer, const SpanElement& f, Complex z) {
  const int size = f.coeffs.size();
  if (size == 0) return {0.0, 0.0};
  const auto b = outer.exponents(z, size);
  SpanValue out{0.0, 0.0};
  for (int n = 1; n <= size; ++n) {
    const Complex a = f.coeffs[n];
    if (a == 0.0) continue;
    const Complex e = std::exp(b.h[n - 1]);
    out.value += a * e;
    out.err += std::abs(a) * std::abs(e) * std::expm1(b.tail_bound);
  }
  return out;
}

SpanValue boundary_evaluate(const OuterFamily& outer, const SpanElement& f, const Angle& theta) {
  const int size = f.coeffs.size();
  if (size == 0) return {0.0, 0.0};
  const auto bp = outer.boundary_phases(theta, size);
  SpanValue out{0.0, 0.0};
  for (int n = 1; n <= size; ++n) {
    const Complex a = f.coeffs[n];
    const double mod = std::exp(bp.log_modulus[n - 1]);
    out.value += a * std::polar(mod, bp.phase[n - 1]);
    out.err += std::abs(a) * mod * bp.tail_bound;
  }
  return out;
}

Chi chi_n(const OuterFamily& outer, int n, const Angle& theta) {
  if (outer.containing_jump(theta) != n) throw Error("chi_n: angle must lie inside J_n");
  const auto bv = outer.boundary_value(n, theta, BoundaryMethod::PrincipalValue);
  return {std::polar(1.0, -bv.phase), bv.err};
}

OperatorMatrix::OperatorMatrix(int dim, std::vector<Complex> entries, std::vector<double> err)
    : dim_(dim), entries_(std::move(entries)), err_(std::move(err)) {
  const auto want = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
  if (dim < 1 || entries_.size() != want || err_.size() != want)
    throw Error("OperatorMatrix: entry count does not match dim^2");
}

std::size_t OperatorMatrix::index(int n, int j) const {
  if (n < 1 || n > dim_ || j < 1 || j > dim_) throw Error("OperatorMatrix: index outside 1..dim");
  return static_cast<std::size_t>(n - 1) * dim_ + static_cast<std::size_t>(j - 1);
}

FiniteSeq OperatorMatrix::apply(const FiniteSeq& a) const {
  if (a.size() > dim_) throw Error("OperatorMatrix::apply: sequence longer than dim");
  FiniteSeq out(dim_);
  for (int n = 1; n <= dim_; ++n)
    for (int j = 1; j <= a.size(); ++j) out[n] += (*this)(n, j) * a[j];
  return out;
}

FiniteSeq OperatorMatrix::apply_b(const FiniteSeq& a) const {
  if (a.size() > dim_) throw Error("OperatorMatrix::apply_b: sequence longer than dim");
  FiniteSeq out(dim_);
  for (int n = 1; n <= dim_; ++n)
    for (int j = 1; j <= a.size(); ++j) out[n] += b(n, j) * a[j];
  return out;
}

OperatorMatrix OperatorMatrix::identity(int dim) {
  const auto size = static_cast<std::size_t>(dim) * dim;
  std::vector<Complex> e(size);
  for (int n = 0; n < dim; ++n) e[static_cast<std::size_t>(n) * dim + n] = 1.0;
  return OperatorMatrix(dim, std::move(e), std::vector<double>(size));
}

OperatorMatrix assemble_operator(const OuterFamily& outer, int dim, const QuadraturePlan& plan) {
  check_plan(plan);
  if (dim < 1 || dim > outer.families().n_max()) throw Error("assemble_operator: dim outside 1..n_max");
  std::vector<std::future<RowIntegrals>> rows;
  for (int n = 1; n <= dim; ++n)
    rows.push_back(std::async(std::launch::async, [&outer, n, dim, &plan] {
      return row_integrals(outer, n, dim, plan);
    }));
  std::vector<Complex> entries;
  std::vector<double> err;
  for (int n = 1; n <= dim; ++n) {
    RowIntegrals row = rows[n - 1].get();
    check_row(outer, n, row, plan.tol);
    entries.insert(entries.end(), row.value.begin(), row.value.end());
    err.insert(err.end(), row.err.begin(), row.err.end());
  }
  return OperatorMatrix(dim, std::move(entries), std::move(err));
}

PhiResult phi_apply(const OuterFamily& outer, const SpanElement& f, int n_top, const QuadraturePlan& plan) {
  check_plan(plan);
  if (n_top < 1) throw Error("phi_apply: n_top must be >= 1");
  const int cols = std::max(1, f.coeffs.size());
  PhiResult out{FiniteSeq(n_top), std::vector<double>(static_cast<std::size_t>(n_top))};
  if (f.coeffs.support().empty()) return out;
  for (int n = 1; n <= n_top; ++n) {
    const RowIntegrals row = row_integrals(outer, n, cols, plan);
    check_row(outer, n, row, plan.tol);
    for (int j = 1; j <= f.coeffs.size(); ++j) {
      out.coords[n] += row.value[j - 1] * f.coeffs[j];
      out.err[n - 1] += row.err[j - 1] * std::abs(f.coeffs[j]);
    }
  }
  return out;
}

FiniteSeq random_unit_seq(const SeqWeight& lam, int dim, std::uint64_t& state) {
  if (dim < 1 || dim > lam.size()) throw Error("random_unit_seq: dim outside 1..lam.size()");
  FiniteSeq a(dim);
  for (int n = 1; n <= dim; ++n) {
    const double r = std::sqrt(uniform01(state));
    const double t = kTwoPi * uniform01(state);
    a[n] = std::polar(r / lam(n), t);
  }
  const double p = seminorm(a, lam);
  if (p > 0.0) a *= 1.0 / p;
  return a;
}

PsiReport psi_seminorm_check(const OuterFamily& outer, const FiniteSeq& a, const SeqWeight& lam,
                             const AngularWeight& wbar, std::span<const Complex> samples) {
  PsiReport rep{0.0, 0.0, 3.0 * seminorm(a, lam), static_cast<int>(samples.size()), true};
  const SpanElement f{a};
  for (Complex z : samples) {
    const auto v = evaluate(outer, f, z);
    const double w = wbar.at(z);
    rep.measured = std::max(rep.measured, w * std::abs(v.value));
    rep.allowance = std::max(rep.allowance, w * v.err);
  }
  rep.pass = rep.measured <= rep.bound + rep.allowance;
  return rep;
}

ContractionCertificate contraction_certificate(const OperatorMatrix& m, const SeqWeight& lam) {
  if (lam.size() < m.dim()) throw Error("contraction_certificate: weight shorter than the matrix");
  double delta = 0.0;
  for (int n = 1; n <= m.dim(); ++n) {
    double row = 0.0;
    for (int j = 1; j <= m.dim(); ++j) row += (std::abs(m.b(n, j)) + m.error(n, j)) / lam(j);
    delta = std::max(delta, lam(n) * row);
  }
  return {delta};
}

ContractionReport contraction_check(const OperatorMatrix& m, const AngularFamilies& fam, const SeqWeight& lam,
                                    int trials, std::uint64_t seed, double rel_slack) {
  const int dim = m.dim();
  ContractionReport rep{};
  rep.trials = trials;
  rep.bound = 1.0 / 128.0;
  rep.ingredient_bound = 1.0 / 8.0;
  rep.certificate = contraction_certificate(m, lam);

  for (int n = 1; n <= dim; ++n)
    for (int j = 1; j <= dim; ++j)
      if (j != n)
        rep.max_entry_ratio =
            std::max(rep.max_entry_ratio, std::abs(m.b(n, j)) / (fam.eps(j) * std::ldexp(1.0, -n - 4)));

  std::uint64_t state = seed;
  for (int t = 0; t < trials; ++t) {
    const FiniteSeq a = random_unit_seq(lam, dim, state);
    const double p = seminorm(a, lam);
    const FiniteSeq ba = m.apply_b(a);
    rep.max_ratio = std::max(rep.max_ratio, seminorm(ba, lam) / p);

    double allowance = 0.0, ingredient = 0.0;
    for (int n = 1; n <= dim; ++n) {
      double row = 0.0;
      for (int j = 1; j <= dim; ++j) row += m.error(n, j) * std::abs(a[j]);
      allowance = std::max(allowance, lam(n) * row);
    }
    for (int j = 1; j <= dim; ++j) ingredient += std::abs(a[j]) * fam.eps(j);
    rep.allowance = std::max(rep.allowance, allowance / p);
    rep.max_ingredient = std::max(rep.max_ingredient, ingredient / p);
  }
  rep.pass = rep.max_ratio <= rep.bound * (1.0 + rel_slack) + rep.allowance;
  rep.ingredient_pass = rep.max_ingredient <= rep.ingredient_bound;
  rep.entry_pass = rep.max_entry_ratio <= 1.0;
  return rep;
}

NeumannResult neumann_invert(const OperatorMatrix& m, const FiniteSeq& a, const SeqWeight& lam, double tol,
                             const ContractionCertificate& cert) {
  if (!(cert.delta < 1.0)) throw Error("neumann_invert: no contraction certificate with delta < 1");
  if (!(tol > 0.0)) throw ToleranceError("tolerance unreachable: Neumann tolerance must be positive");
  const double p = seminorm(a, lam);
  int terms = 0;
  double tail = cert.delta * p / (1.0 - cert.delta);
  while (!(tail < tol)) {
    ++terms;
    tail *= cert.delta;
    if (terms > 10000) throw ToleranceError("neumann_invert: series does not reach the tolerance");
  }
  FiniteSeq x = a, term = a;
  for (int k = 1; k <= terms; ++k) {
    term = m.apply_b(term);
    term *= -1.0;
    x += term;
  }
  const FiniteSeq back = m.apply(x);
  return {x, terms, seminorm(back - a, lam), seminorm(x, lam), p / (1.0 - cert.delta)};
}

ProjectionReport projection_check(const OperatorMatrix& m, const SeqWeight& lam, int trials, double tol,
                                  const ContractionCertificate& cert, std::uint64_t seed) {
  ProjectionReport rep{trials, 0.0, 0.0, tol, true};
  std::uint64_t state = seed;
  // Coefficients of P f = psi A phi f for f = psi b are A T b, T = phi psi.
  auto project = [&](const FiniteSeq& b) { return neumann_invert(m, m.apply(b), lam, 0.1 * tol, cert).value; };
  for (int t = 0; t < trials; ++t) {
    const FiniteSeq b = random_unit_seq(lam, m.dim(), state);
    const FiniteSeq pb = project(b);
    const FiniteSeq ppb = project(pb);
    rep.max_image_residual = std::max(rep.max_image_residual, seminorm(pb - b, lam));
    rep.max_idempotence = std::max(rep.max_idempotence, seminorm(ppb - pb, lam));
  }
  rep.pass = rep.max_idempotence < tol && rep.max_image_residual < tol;
  return rep;
}

std::vector<double> restriction_t_grid(int k) {
  const double kk = k;
  std::vector<double> t{0.0, 0.5, kk, kk + 0.25, kk + 0.5, kk + 0.75, kk + 1.0, kk + 2.0, 10.0 * kk, 100.0, 1e4};
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

RestrictionReport restriction_A_check(int k, const OuterFamily& outer, const SpanElement& g,
                                      const AngularWeight& wk, std::span<const Complex> z1_samples) {
  RestrictionReport rep{k, restriction_constant(k), 0.0, 0.0, true, true};
  const auto grid = restriction_t_grid(k);
  for (Complex z1 : z1_samples) {
    const double gz = std::abs(evaluate(outer, g, z1).value);
    const double w = wk.at(z1);
    rep.p_wk_af = std::max(rep.p_wk_af, w * gz);
    for (double t : grid) rep.p_vk_f = std::max(rep.p_vk_f, w * uk(k, z1, t) * gz);
  }
  // C_k u_k(z1, k + 1) = 1 up to rounding of the two powers.
  const double round = 8.0 * kUlp;
  rep.pass_a = rep.p_wk_af <= rep.ck * rep.p_vk_f * (1.0 + round);
  rep.pass_b = rep.p_vk_f <= rep.p_wk_af;
  return rep;
}

}  // namespace hwil
