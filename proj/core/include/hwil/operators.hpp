#pragma once

// The maps psi(a) = sum a_n e_n and
//   phi(f)_n = (2 eps_n)^-1 int_{J_n} f*(e^{it}) chi_n(t) dt
// at finite truncation, the matrix of phi psi, its Neumann inverse and the
// restriction operator checks on G1 x C.

#include <cstdint>
#include <span>
#include <vector>

#include "hwil/outer.hpp"
#include "hwil/quadrature.hpp"
#include "hwil/seq_space.hpp"
#include "hwil/weights.hpp"

namespace hwil {

/// sum a_n e_n for finitely many a_n.
struct SpanElement {
  FiniteSeq coeffs;
};

struct SpanValue {
  Complex value;
  double err;  // from the exponent tails
};

SpanValue evaluate(const OuterFamily& outer, const SpanElement& f, Complex z);

/// f*(e^{i theta}) from exact moduli and closed-form boundary phases.
SpanValue boundary_evaluate(const OuterFamily& outer, const SpanElement& f, const Angle& theta);

struct Chi {
  Complex value;  // unit modulus
  double err;     // phase error bound
};

/// e^{-i arg e_n*(e^{i theta})} for theta inside J_n.
Chi chi_n(const OuterFamily& outer, int n, const Angle& theta);

/// Entries of phi psi: (phi psi)_{nj} = (2 eps_n)^-1 int_{J_n} e_j* chi_n.
class OperatorMatrix {
 public:
  OperatorMatrix(int dim, std::vector<Complex> entries, std::vector<double> err);

  int dim() const { return dim_; }
  Complex operator()(int n, int j) const { return entries_[index(n, j)]; }
  double error(int n, int j) const { return err_[index(n, j)]; }
  /// (phi psi - id)_{nj}.
  Complex b(int n, int j) const { return (*this)(n, j) - (n == j ? 1.0 : 0.0); }
  double diag_residual(int n) const { return std::abs(b(n, n)); }

  FiniteSeq apply(const FiniteSeq& a) const;
  FiniteSeq apply_b(const FiniteSeq& a) const;

  static OperatorMatrix identity(int dim);

 private:
  std::size_t index(int n, int j) const;

  int dim_;
  std::vector<Complex> entries_;
  std::vector<double> err_;
};

/// Graded-mesh quadrature on every J_n, n <= dim; rows run concurrently.
/// Throws ToleranceError when some err_{nj} exceeds plan.tol times the
/// entry scale phi_j on J_n, or when plan.tol <= 0.
OperatorMatrix assemble_operator(const OuterFamily& outer, int dim, const QuadraturePlan& plan);

struct PhiResult {
  FiniteSeq coords;
  std::vector<double> err;
};

/// First n_top coordinates of phi(f), with the same error policy.
PhiResult phi_apply(const OuterFamily& outer, const SpanElement& f, int n_top, const QuadraturePlan& plan);

/// Unit-seminorm random sequence: a_n uniform in the unit disc scaled by
/// 1/lam(n), then normalized so p_lam(a) = 1.
FiniteSeq random_unit_seq(const SeqWeight& lam, int dim, std::uint64_t& state);

struct PsiReport {
  double measured;   // sup over samples of w-bar |psi a|
  double allowance;  // from exponent tails
  double bound;      // 3 p_lam(a)
  int samples;
  bool pass;
};

/// Samples should cover every D_m, m <= a.size(), and the common region.
PsiReport psi_seminorm_check(const OuterFamily& outer, const FiniteSeq& a, const SeqWeight& lam,
                             const AngularWeight& wbar, std::span<const Complex> samples);

struct ContractionCertificate {
  double delta;  // p_lam(B a) <= delta p_lam(a), entry errors included
};

/// max_n lam(n) sum_j (|B_nj| + err_nj) / lam(j).
ContractionCertificate contraction_certificate(const OperatorMatrix& m, const SeqWeight& lam);

struct ContractionReport {
  int trials;
  double max_ratio;       // max p(Ba) over unit a
  double allowance;       // max of the entry-error contribution
  double bound;           // 1/128
  bool pass;
  double max_ingredient;  // max sum_j |a_j| eps_j over unit a
  double ingredient_bound;
  bool ingredient_pass;
  double max_entry_ratio;  // max_{j != n} |B_nj| / (eps_j 2^(-n-4))
  bool entry_pass;
  ContractionCertificate certificate;
};

ContractionReport contraction_check(const OperatorMatrix& m, const AngularFamilies& fam, const SeqWeight& lam,
                                    int trials, std::uint64_t seed, double rel_slack = 1e-3);

struct NeumannResult {
  FiniteSeq value;  // A a
  int terms;        // M
  double residual;  // p((id + B) A a - a)
  double norm;      // p(A a)
  double norm_bound;  // p(a) / (1 - delta)
};

/// A a = sum_{m <= M} (-B)^m a with delta^(M+1) p(a) / (1 - delta) < tol.
NeumannResult neumann_invert(const OperatorMatrix& m, const FiniteSeq& a, const SeqWeight& lam, double tol,
                             const ContractionCertificate& cert);

struct ProjectionReport {
  int trials;
  double max_image_residual;   // p(A phi psi a - a)
  double max_idempotence;      // p(P P f - P f) at coefficient level
  double tol;
  bool pass;
};

ProjectionReport projection_check(const OperatorMatrix& m, const SeqWeight& lam, int trials, double tol,
                                  const ContractionCertificate& cert, std::uint64_t seed);

struct RestrictionReport {
  int k;
  double ck;
  double p_wk_af;  // sup w_k |g| on the z1 samples
  double p_vk_f;   // sup v_k |g-bar| on samples x t-grid
  bool pass_a;     // p_wk(Af) <= C_k p_vk(f)
  bool pass_b;     // p_vk(f) <= p_wk(g)
};

/// |z2| grid used for the product weights.
std::vector<double> restriction_t_grid(int k);

RestrictionReport restriction_A_check(int k, const OuterFamily& outer, const SpanElement& g,
                                      const AngularWeight& wk, std::span<const Complex> z1_samples);

}  // namespace hwil
