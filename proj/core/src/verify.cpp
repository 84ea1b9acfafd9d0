#include "hwil/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <tuple>

#include "hwil/error.hpp"
#include "hwil/operators.hpp"
#include "hwil/sampling.hpp"
#include "hwil/seq_space.hpp"
#include "hwil/weights.hpp"

namespace hwil {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed ^ (tag * 0xd1342543de82ef95ull);
  return splitmix64(s);
}

double uniform01(std::uint64_t& state) { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; }

SamplingPlan plan(int count, std::uint64_t seed, std::uint64_t tag) { return {count, derive_seed(seed, tag)}; }

thread_local std::chrono::steady_clock::time_point g_mark = std::chrono::steady_clock::now();

double lap() {
  const auto now = std::chrono::steady_clock::now();
  const double s = std::chrono::duration<double>(now - g_mark).count();
  g_mark = now;
  return s;
}

double tol(const VerifyConfig& cfg, const std::string& key) { return cfg.tolerances.at(key); }

CheckRecord make_record(std::string id, std::string anchor, CheckKind kind, std::string relation, double quantity,
                        double bound, bool extra_ok = true, std::string detail = {}) {
  CheckRecord r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.kind = kind;
  r.relation = std::move(relation);
  r.quantity = quantity;
  r.bound = bound;
  bool holds = false;
  if (r.relation == "<=") holds = quantity <= bound, r.margin = bound - quantity;
  else if (r.relation == "<") holds = quantity < bound, r.margin = bound - quantity;
  else if (r.relation == ">=") holds = quantity >= bound, r.margin = quantity - bound;
  else if (r.relation == ">") holds = quantity > bound, r.margin = quantity - bound;
  else throw Error("make_record: unknown relation '" + r.relation + "'");
  r.pass = holds && extra_ok && std::isfinite(quantity);
  r.status = r.pass ? "ok" : "failed";
  r.detail = std::move(detail);
  r.seconds = lap();
  return r;
}

CheckRecord failed_record(std::string id, std::string anchor, CheckKind kind, const std::string& why) {
  CheckRecord r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.kind = kind;
  r.relation = "<=";
  r.quantity = std::numeric_limits<double>::quiet_NaN();
  r.bound = std::numeric_limits<double>::quiet_NaN();
  r.margin = std::numeric_limits<double>::quiet_NaN();
  r.pass = false;
  r.status = why;
  r.seconds = lap();
  return r;
}

// A record whose bound rests on a zero tolerance cannot pass.
CheckRecord gate(CheckRecord r, const VerifyConfig& cfg, const std::string& key) {
  if (tol(cfg, key) == 0.0) {
    r.pass = false;
    r.status = "tolerance unreachable: " + key + " = 0";
  }
  return r;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

// Everything the checks share, built once per battery.
struct Context {
  const VerifyConfig& cfg;
  AngularFamilies fam;
  KoetheMatrix matrix;
  OuterFamily outer;
  int n_cut;
  AngularWeight w1;
  std::vector<std::pair<std::string, SeqWeight>> lams;  // normalized weights
  std::vector<std::pair<std::string, AngularWeight>> dominated_inputs;

  explicit Context(const VerifyConfig& c)
      : cfg(c),
        fam(c.n_max),
        matrix(default_matrix(c.n_max, c.k_max)),
        outer(fam, c.m_cut),
        n_cut(c.n_max),
        w1(make_wk(1, matrix, fam, c.n_max)) {
    const SeqWeight floor_lam = [&] {
      std::vector<double> v(static_cast<std::size_t>(n_cut));
      for (int n = 1; n <= n_cut; ++n) v[n - 1] = 1.0 / (static_cast<double>(n) * n);
      SeqWeight bare(v);
      return SeqWeight(v, scan_witnesses(bare, matrix));
    }();
    const SeqWeight norm3 = normalize_seq_weight(matrix_level_weight(matrix, 3), matrix).weight;
    const SeqWeight normk = normalize_seq_weight(matrix_level_weight(matrix, c.k_max), matrix).weight;

    dominated_inputs.emplace_back("w_2", make_wk(2, matrix, fam, n_cut));
    dominated_inputs.emplace_back("w_5", make_wk(5, matrix, fam, n_cut));
    dominated_inputs.emplace_back("canonical(floor)", make_canonical_wbar(floor_lam, fam, n_cut));
    dominated_inputs.emplace_back("canonical(normalized lambda_3)", make_canonical_wbar(norm3, fam, n_cut));

    lams.emplace_back("normalized(w_2)", lemma1_normalize(dominated_inputs[0].second, fam, matrix, w1, n_cut).lam);
    lams.emplace_back("normalized(w_5)", lemma1_normalize(dominated_inputs[1].second, fam, matrix, w1, n_cut).lam);
    lams.emplace_back("floor", floor_lam);
    lams.emplace_back("normalized lambda_3", norm3);
    lams.emplace_back("normalized lambda_kmax", normk);
  }
};

// e_n(z) for n <= dim at every sample, with exponent tails.
struct SpanTable {
  std::vector<Complex> z;
  std::vector<Complex> e;  // sample-major
  std::vector<double> tail;
  int dim;

  SpanTable(const OuterFamily& outer, std::vector<Complex> pts, int d) : z(std::move(pts)), dim(d) {
    e.reserve(z.size() * static_cast<std::size_t>(dim));
    for (Complex p : z) {
      const auto b = outer.exponents(p, dim);
      for (int n = 1; n <= dim; ++n) e.push_back(std::exp(b.h[n - 1]));
      tail.push_back(b.tail_bound);
    }
  }

  SpanValue value(std::size_t i, const FiniteSeq& a) const {
    SpanValue out{0.0, 0.0};
    for (int n = 1; n <= std::min(dim, a.size()); ++n) {
      const Complex en = e[i * dim + (n - 1)];
      out.value += a[n] * en;
      out.err += std::abs(a[n]) * std::abs(en) * std::expm1(tail[i]);
    }
    return out;
  }
};

std::vector<Complex> concat(std::vector<std::vector<Complex>> parts) {
  std::vector<Complex> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// ---------------------------------------------------------------- geometry

std::vector<CheckRecord> geometry_checks(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<CheckRecord> out;

  const auto anchors = ctx.fam.anchor_sequence();
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < anchors.size(); ++i) min_gap = std::min(min_gap, anchors[i] - anchors[i - 1]);
  out.push_back(make_record("geometry.anchor_order", "plateau and shoulder anchors strictly increasing",
                            CheckKind::Certified, ">", min_gap, 0.0, true,
                            "minimum gap between consecutive anchors, n <= n_max"));

  double jump_ratio = 0.0;
  for (int n = 1; n <= cfg.n_max; ++n)
    jump_ratio = std::max(jump_ratio, ctx.fam.eps(n) / AngularFamilies::plateau_half_width(n));
  out.push_back(make_record("geometry.jump_in_plateau", "J_n inside I_n: eps_n < 1/(2^5 n^2)", CheckKind::Certified,
                            "<", jump_ratio, 1.0, true, "max_n eps_n / (1/(32 n^2))"));

  double sector = 0.0;
  for (int n = 1; n <= cfg.n_max; ++n) {
    const auto s = sector_inclusion_check(n);
    sector = std::max(sector, s.deviation / s.half_width);
  }
  out.push_back(make_record("geometry.sector_inclusion", "D_n inside the sector over I_n", CheckKind::Certified,
                            "<=", sector, 1.0, true, "max_n asin(rho/(1-rho)) / (1/(32 n^2))"));

  double kernel = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= cfg.trunc_n; ++n) {
    const auto k = min_kernel_distance(ctx.fam, n, plan(cfg.samples.kernel, cfg.seed, 100 + n));
    kernel = std::min(kernel, k.estimate / k.bound);
  }
  out.push_back(make_record("geometry.kernel_distance", "|e^{it} - z| >= 1/(2^6 n^2) for t in J_n, z in C_n",
                            CheckKind::Sampled, ">=", kernel, 1.0, true,
                            "min_n sampled distance / (1/(64 n^2)), n <= trunc_n"));
  return out;
}

// ----------------------------------------------------------------- weights

std::vector<CheckRecord> weight_checks(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<CheckRecord> out;
  const int n_cut = ctx.n_cut;

  double plateau_dev = 0.0;
  for (int k = 1; k <= cfg.k_max; ++k) {
    const AngularWeight wk = make_wk(k, ctx.matrix, ctx.fam, n_cut);
    for (int n = 1; n <= n_cut; ++n) {
      const Interval iv = AngularFamilies::plateau(n);
      for (double t : {iv.lo, iv.center(), iv.hi})
        plateau_dev = std::max(plateau_dev, std::abs(wk(t) - ctx.matrix(n, k)));
      plateau_dev = std::max(plateau_dev, std::abs(wk(AngularFamilies::shoulder(n)) - 1.0));
    }
    plateau_dev = std::max({plateau_dev, std::abs(wk(0.0) - 1.0), std::abs(wk(kPi) - 1.0)});
  }
  out.push_back(make_record("weights.wk_anchors", "w_k = lambda_{nk} on I_n, 1 at shoulders, 0 and pi",
                            CheckKind::Certified, "<=", plateau_dev, 0.0, true,
                            "max deviation at plateau and shoulder anchors, k <= k_max"));

  const auto pts = sample_half_annulus(plan(cfg.samples.dominating, cfg.seed, 200));
  double mono = -std::numeric_limits<double>::infinity();
  std::vector<AngularWeight> ws;
  for (int k = 1; k <= cfg.k_max; ++k) ws.push_back(make_wk(k, ctx.matrix, ctx.fam, n_cut));
  for (Complex z : pts)
    for (int k = 1; k < cfg.k_max; ++k) {
      const double a = ws[k - 1].at(z), b = ws[k].at(z);
      mono = std::max(mono, b - a * (1.0 + 4.0 * kUlp));
      const int kr = std::min(k, cfg.k_restriction);
      const ProductWeight vk(ws[kr - 1], kr), vk1(ws[kr], kr + 1);
      for (double t : restriction_t_grid(kr)) mono = std::max(mono, vk1.at(z, t) - vk.at(z, t) * (1.0 + 4.0 * kUlp));
    }
  out.push_back(make_record("weights.monotone_system", "w_{k+1} <= w_k and v_{k+1} <= v_k", CheckKind::Sampled,
                            "<=", mono, 0.0, true, "max of w_{k+1} - w_k and v_{k+1} - v_k over samples"));

  // Dominating-weight normalizer.
  std::vector<std::vector<Complex>> discs;
  for (int n = 1; n <= n_cut; ++n) discs.push_back(sample_disc(n, plan(cfg.samples.dominating_disc, cfg.seed, 300 + n)));
  const AngularWeight floor = floor_weight(ctx.fam, n_cut);
  double worst = -std::numeric_limits<double>::infinity();
  std::string names;
  for (const auto& [name, wprime] : ctx.dominated_inputs) {
    const auto dw = lemma1_normalize(wprime, ctx.fam, ctx.matrix, ctx.w1, n_cut);
    names += (names.empty() ? "" : ", ") + name + " (C = " + fmt(dw.scale) + ")";
    for (Complex z : pts) {
      const double wb = dw.weight.at(z);
      worst = std::max({worst, dw.scale * wprime.at(z) - wb * (1.0 + 4.0 * kUlp), wb - 1.0,
                        floor.at(z) - wb * (1.0 + 4.0 * kUlp)});
    }
    for (int n = 1; n <= n_cut; ++n) {
      worst = std::max(worst, 1.0 / (static_cast<double>(n) * n) - dw.lam(n));
      for (Complex z : discs[n - 1]) worst = std::max(worst, std::abs(dw.weight.at(z) - dw.lam(n)));
    }
  }
  out.push_back(make_record("weights.dominating_certificate",
                            "C w' <= w-bar <= 1, w-bar >= floor, w-bar constant on D_n, plateaus >= 1/n^2",
                            CheckKind::Sampled, "<=", worst, 0.0, true, "worst violation; inputs: " + names));
  return out;
}

// ------------------------------------------------------------------- outer

std::vector<Angle> boundary_angles(const VerifyConfig& cfg, int n) {
  const int top = cfg.trunc_n;
  std::vector<Angle> th{Angle::in_family(n, 0.0), Angle::in_family(n, 0.5 * default_eps(n))};
  for (int m = 1; m <= top; ++m)
    if (m != n) th.push_back(Angle::in_family(m, 0.0));
  th.push_back(Angle::absolute(kPi));
  for (int m = 1; m < top; ++m)
    th.push_back(Angle::absolute(0.5 * (AngularFamilies::theta(m) + AngularFamilies::theta(m + 1))));
  std::uint64_t state = derive_seed(cfg.seed, 400 + n);
  while (static_cast<int>(th.size()) < cfg.samples.boundary_theta)
    th.push_back(Angle::absolute(0.6 + (kTwoPi - 0.7) * uniform01(state)));
  th.resize(static_cast<std::size_t>(cfg.samples.boundary_theta));
  return th;
}

std::vector<CheckRecord> outer_checks(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<CheckRecord> out;

  {
    std::uint64_t state = derive_seed(cfg.seed, 500);
    double worst = 0.0;
    for (int i = 0; i < cfg.samples.poisson; ++i) {
      const Complex z = std::polar(0.99 * std::sqrt(uniform01(state)), kTwoPi * uniform01(state));
      worst = std::max(worst, std::abs(herglotz_segment(z, 0.0, kTwoPi).real() / kTwoPi - 1.0));
    }
    out.push_back(gate(make_record("outer.poisson_normalization",
                                   "Re int_0^{2pi} (e^{it}+z)/(e^{it}-z) dt = 2 pi", CheckKind::Certified, "<=",
                                   worst, tol(cfg, "poisson"), true, "max relative deviation, |z| <= 0.99"),
                       cfg, "poisson"));
  }

  {
    const auto pts = sample_half_annulus(plan(cfg.samples.ceiling, cfg.seed, 600));
    double worst = -std::numeric_limits<double>::infinity();
    for (Complex z : pts) {
      const auto b = ctx.outer.exponents(z, cfg.n_max);
      for (const Complex& h : b.h) worst = std::max(worst, h.real() - b.tail_bound);
    }
    out.push_back(make_record("outer.modulus_ceiling", "|e_n(z)| <= 1 on G1", CheckKind::Certified, "<=", worst, 0.0,
                              true, "max of Re h_n - tail over samples, n <= n_max"));
  }

  {
    double worst = -std::numeric_limits<double>::infinity();
    int excluded = 0;
    for (int n = 1; n <= cfg.trunc_n; ++n) {
      const auto pts =
          sample_complement(n, cfg.samples.complement_near, plan(cfg.samples.complement, cfg.seed, 700 + n));
      const auto rep = modulus_bound_check(ctx.outer, n, pts);
      worst = std::max(worst, rep.max_log_modulus - rep.log_bound);
      excluded += rep.excluded;
    }
    out.push_back(make_record("outer.complement_bound", "|e_n(z)| <= 2^(-4-n) on C_n", CheckKind::Sampled, "<=",
                              worst, 0.0, true,
                              "max of log|e_n| + tail - log 2^(-4-n), n <= trunc_n; excluded " +
                                  std::to_string(excluded)));

    double chain = 0.0;
    for (int n = 1; n <= cfg.n_max; ++n) {
      const double eps = ctx.fam.eps(n);
      const double value = eps * std::ldexp(1.0, 12) * std::pow(n, 4) / kPi + eps;
      chain = std::max(chain, value / std::ldexp(1.0, -4 - n));
    }
    out.push_back(make_record("outer.eps_chain", "pi^-1 eps_n 2^12 n^4 + eps_n <= 2^(-4-n)", CheckKind::Certified,
                              "<=", chain, 1.0, true, "max ratio over n <= n_max"));
  }

  {
    double worst = 0.0, phase = -std::numeric_limits<double>::infinity();
    bool cauchy = true;
    std::string failure;
    for (int n = 1; n <= cfg.trunc_n && failure.empty(); ++n)
      for (const Angle& th : boundary_angles(cfg, n)) {
        try {
          const auto rc = radial_convergence_check(ctx.outer, n, th, tol(cfg, "radial"));
          worst = std::max(worst, rc.rel_err);
          cauchy = cauchy && rc.cauchy;
          const auto r = ctx.outer.boundary_value(n, th, BoundaryMethod::Radial);
          const auto p = ctx.outer.boundary_value(n, th, BoundaryMethod::PrincipalValue);
          phase = std::max(phase, std::abs(r.phase - p.phase) - r.err - p.err);
        } catch (const Error& e) {
          failure = e.what();
          break;
        }
      }
    if (failure.empty()) {
      out.push_back(gate(make_record("outer.boundary_modulus", "|e_n((1-d) e^{it})| -> phi_n(t)",
                                     CheckKind::Sampled, "<=", worst, tol(cfg, "radial"), cauchy,
                                     "max relative error of the extrapolated limit, n <= trunc_n"),
                         cfg, "radial"));
      out.push_back(gate(make_record("outer.phase_agreement", "plumbing", CheckKind::Plumbing, "<=", phase,
                                     tol(cfg, "phase"), true,
                                     "max |radial - principal value| phase gap beyond the combined error"),
                         cfg, "phase"));
    } else {
      out.push_back(failed_record("outer.boundary_modulus", "|e_n((1-d) e^{it})| -> phi_n(t)", CheckKind::Sampled,
                                  "tolerance unreachable: " + failure));
      out.push_back(failed_record("outer.phase_agreement", "plumbing", CheckKind::Plumbing,
                                  "tolerance unreachable: " + failure));
    }
  }
  return out;
}

// --------------------------------------------------------------- operators

const char* const kDiagAnchor = "(2 eps_n)^-1 int_{J_n} e_n* chi_n = 1";
const char* const kOffAnchor = "|e_j*| = eps_j 2^(-n-4) on J_n";
const char* const kIngredientAnchor = "sum_j |a_j| eps_j <= (1/8) p(a)";
const char* const kContractionAnchor = "p((phi psi - id) a) <= p(a)/128";
const char* const kPsiAnchor = "p_{w-bar}(psi a) <= 3 p(a)";
const char* const kNeumannAnchor = "A = sum (-1)^m B^m inverts phi psi";
const char* const kProjectionAnchor = "(psi A) phi is a projection";

std::vector<CheckRecord> operator_checks(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int dim = cfg.trunc_n;
  std::vector<CheckRecord> out;

  // Quadrature-free ingredient bound.
  {
    double worst = 0.0;
    for (std::size_t l = 0; l < ctx.lams.size(); ++l) {
      std::uint64_t state = derive_seed(cfg.seed, 800 + l);
      for (int t = 0; t < cfg.trials; ++t) {
        const FiniteSeq a = random_unit_seq(ctx.lams[l].second, dim, state);
        double s = 0.0;
        for (int j = 1; j <= dim; ++j) s += std::abs(a[j]) * ctx.fam.eps(j);
        worst = std::max(worst, s / seminorm(a, ctx.lams[l].second));
      }
    }
    out.push_back(make_record("operators.ingredient", kIngredientAnchor, CheckKind::Sampled, "<=", worst, 0.125,
                              true, std::to_string(ctx.lams.size()) + " weights x " + std::to_string(cfg.trials) +
                                        " unit vectors"));
  }

  QuadraturePlan qp{cfg.quad_levels, cfg.quad_points, tol(cfg, "quadrature")};
  std::optional<OperatorMatrix> m;
  std::string why;
  try {
    m = assemble_operator(ctx.outer, dim, qp);
  } catch (const ToleranceError& e) {
    why = e.what();
  }
  if (!m) {
    for (const auto& [id, anchor, kind] :
         std::vector<std::tuple<std::string, std::string, CheckKind>>{
             {"operators.quadrature", "plumbing", CheckKind::Plumbing},
             {"operators.diagonal_identity", kDiagAnchor, CheckKind::Certified},
             {"operators.offdiagonal_modulus", kOffAnchor, CheckKind::Certified},
             {"operators.contraction", kContractionAnchor, CheckKind::Sampled},
             {"operators.contraction_certificate", "plumbing", CheckKind::Certified},
             {"operators.phi_continuity", "plumbing", CheckKind::Sampled},
             {"operators.neumann_residual", kNeumannAnchor, CheckKind::Certified},
             {"operators.neumann_terms", "plumbing", CheckKind::Certified},
             {"operators.projection", kProjectionAnchor, CheckKind::Certified}})
      out.push_back(failed_record(id, anchor, kind, why));
    return out;
  }

  double max_err = 0.0;
  for (int n = 1; n <= dim; ++n)
    for (int j = 1; j <= dim; ++j) {
      const double scale = n == j ? 1.0 : ctx.fam.eps(j) * std::ldexp(1.0, -n - 4);
      max_err = std::max(max_err, m->error(n, j) / scale);
    }
  out.push_back(gate(make_record("operators.quadrature", "plumbing", CheckKind::Plumbing, "<=", max_err,
                                 qp.tol, true, "max relative entry error, " + std::to_string(qp.levels) +
                                                   " levels x " + std::to_string(qp.points) + " points"),
                     cfg, "quadrature"));

  double diag = 0.0, off = 0.0;
  for (int n = 1; n <= dim; ++n)
    for (int j = 1; j <= dim; ++j) {
      if (n == j) diag = std::max(diag, m->diag_residual(n) + m->error(n, n));
      else off = std::max(off, (std::abs((*m)(n, j)) + m->error(n, j)) / (ctx.fam.eps(j) * std::ldexp(1.0, -n - 4)));
    }
  out.push_back(gate(make_record("operators.diagonal_identity", kDiagAnchor, CheckKind::Certified, "<=", diag,
                                 tol(cfg, "diagonal"), true, "max_n |(phi psi)_nn - 1| + error bound"),
                     cfg, "diagonal"));
  out.push_back(gate(make_record("operators.offdiagonal_modulus", kOffAnchor, CheckKind::Certified, "<=", off,
                                 1.0 + tol(cfg, "offdiag"), true,
                                 "max_{j != n} (|(phi psi)_nj| + error) / (eps_j 2^(-n-4))"),
                     cfg, "offdiag"));

  double ratio = 0.0, allowance = 0.0, delta = 0.0;
  bool contraction_ok = true;
  for (std::size_t l = 0; l < ctx.lams.size(); ++l) {
    const auto rep = contraction_check(*m, ctx.fam, ctx.lams[l].second, cfg.trials, derive_seed(cfg.seed, 900 + l),
                                       tol(cfg, "contraction"));
    ratio = std::max(ratio, rep.max_ratio);
    allowance = std::max(allowance, rep.allowance);
    delta = std::max(delta, rep.certificate.delta);
    contraction_ok = contraction_ok && rep.entry_pass;
  }
  out.push_back(gate(make_record("operators.contraction", kContractionAnchor, CheckKind::Sampled, "<=", ratio,
                                 (1.0 + tol(cfg, "contraction")) / 128.0 + allowance, contraction_ok,
                                 "max over weights and unit vectors of p(Ba); bound includes entry-error allowance " +
                                     fmt(allowance)),
                     cfg, "contraction"));
  out.push_back(make_record("operators.contraction_certificate", "plumbing", CheckKind::Certified, "<=", delta,
                            1.0 / 128.0, true, "max over weights of the row-sum bound delta"));

  // phi continuity at quadrature level: lam(n) |phi(f)_n| is bounded by
  // w-bar |f*| on J_n, where w-bar = lam(n).
  {
    const SeqWeight& lam = ctx.lams[0].second;
    const QuadratureRule rule = graded_rule(qp.levels, qp.points);
    std::uint64_t state = derive_seed(cfg.seed, 1000);
    double worst = 0.0;
    for (int t = 0; t < std::min(cfg.trials, 10); ++t) {
      const FiniteSeq a = random_unit_seq(lam, dim, state);
      const FiniteSeq phi = m->apply(a);
      for (int n = 1; n <= dim; ++n) {
        double sup = 0.0, err = 0.0;
        for (double s : rule.nodes)
          sup = std::max(sup, std::abs(boundary_evaluate(ctx.outer, SpanElement{a}, Angle::in_family(n, ctx.fam.eps(n) * s)).value));
        for (int j = 1; j <= dim; ++j) err += m->error(n, j) * std::abs(a[j]);
        worst = std::max(worst, (std::abs(phi[n]) - err) / sup);
      }
    }
    out.push_back(make_record("operators.phi_continuity", "plumbing", CheckKind::Sampled, "<=", worst,
                              1.0 + 1e-12, true, "max_n (|phi(f)_n| - error) / sup_{J_n} |f*|"));
  }

  {
    double residual = 0.0, norm = 0.0;
    int terms = 0;
    std::string failure;
    try {
      for (std::size_t l = 0; l < ctx.lams.size(); ++l) {
        const SeqWeight& lam = ctx.lams[l].second;
        const auto cert = contraction_certificate(*m, lam);
        std::uint64_t state = derive_seed(cfg.seed, 1100 + l);
        for (int t = 0; t < cfg.trials; ++t) {
          const FiniteSeq a = random_unit_seq(lam, dim, state);
          const auto r = neumann_invert(*m, a, lam, tol(cfg, "neumann"), cert);
          residual = std::max(residual, r.residual);
          terms = std::max(terms, r.terms);
          norm = std::max(norm, r.norm / r.norm_bound);
        }
      }
    } catch (const Error& e) {
      failure = e.what();
    }
    if (failure.empty()) {
      out.push_back(gate(make_record("operators.neumann_residual", kNeumannAnchor, CheckKind::Certified, "<",
                                     residual, tol(cfg, "neumann"), norm <= 1.0 + 4.0 * kUlp,
                                     "max p(phi psi A a - a); p(Aa) <= p(a)/(1 - delta) ratio " + fmt(norm)),
                         cfg, "neumann"));
      out.push_back(make_record("operators.neumann_terms", "plumbing", CheckKind::Certified, "<=", terms, 6.0, true,
                                "max series length M"));
    } else {
      out.push_back(failed_record("operators.neumann_residual", kNeumannAnchor, CheckKind::Certified, failure));
      out.push_back(failed_record("operators.neumann_terms", "plumbing", CheckKind::Certified, failure));
    }
  }

  {
    double idem = 0.0, image = 0.0;
    std::string failure;
    try {
      for (std::size_t l = 0; l < ctx.lams.size(); ++l) {
        const SeqWeight& lam = ctx.lams[l].second;
        const auto rep = projection_check(*m, lam, cfg.trials, tol(cfg, "projection"),
                                          contraction_certificate(*m, lam), derive_seed(cfg.seed, 1200 + l));
        idem = std::max(idem, rep.max_idempotence);
        image = std::max(image, rep.max_image_residual);
      }
    } catch (const Error& e) {
      failure = e.what();
    }
    if (failure.empty())
      out.push_back(gate(make_record("operators.projection", kProjectionAnchor, CheckKind::Certified, "<", idem,
                                     tol(cfg, "projection"), image < tol(cfg, "projection"),
                                     "max idempotence residual; image residual " + fmt(image)),
                         cfg, "projection"));
    else
      out.push_back(failed_record("operators.projection", kProjectionAnchor, CheckKind::Certified, failure));
  }
  return out;
}

std::vector<CheckRecord> psi_checks(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int dim = cfg.trunc_n;
  const int total = cfg.samples.psi;
  const int per_disc = std::max(1, (2 * total / 5) / dim);
  const int common = std::max(1, (total - per_disc * dim) / 2);
  const int whole = std::max(1, total - per_disc * dim - common);

  std::vector<std::vector<Complex>> parts;
  for (int m = 1; m <= dim; ++m) parts.push_back(sample_disc(m, plan(per_disc, cfg.seed, 1300 + m)));
  parts.push_back(sample_common_region(dim, plan(common, cfg.seed, 1400)));
  parts.push_back(sample_half_annulus(plan(whole, cfg.seed, 1401)));
  const SpanTable table(ctx.outer, concat(std::move(parts)), dim);

  const SeqWeight& lam = ctx.lams[0].second;
  const AngularWeight wbar = make_canonical_wbar(lam, ctx.fam, ctx.n_cut);
  std::vector<double> w(table.z.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = wbar.at(table.z[i]);

  std::vector<FiniteSeq> as;
  for (int m = 1; m <= dim; ++m) as.push_back(FiniteSeq::unit(dim, m, 1.0 / lam(m)));
  std::uint64_t state = derive_seed(cfg.seed, 1500);
  for (int t = 0; t < cfg.trials; ++t) as.push_back(random_unit_seq(lam, dim, state));

  double worst = 0.0;
  for (const FiniteSeq& a : as) {
    double sup = 0.0;
    for (std::size_t i = 0; i < table.z.size(); ++i) {
      const auto v = table.value(i, a);
      sup = std::max(sup, w[i] * (std::abs(v.value) - v.err));
    }
    worst = std::max(worst, sup / (3.0 * seminorm(a, lam)));
  }
  return {make_record("operators.psi_norm", kPsiAnchor, CheckKind::Sampled, "<=", worst, 1.0, true,
                      "max sup w-bar |psi a| / (3 p(a)) on " + std::to_string(table.z.size()) + " samples, " +
                          std::to_string(as.size()) + " vectors")};
}

// ------------------------------------------------- product weights on G1 x C

std::vector<CheckRecord> product_checks(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int dim = cfg.trunc_n;
  std::vector<CheckRecord> out;

  std::vector<std::vector<Complex>> parts{sample_half_annulus(plan(cfg.samples.restriction, cfg.seed, 1600))};
  for (int m = 1; m <= dim; ++m) parts.push_back(sample_disc(m, plan(100, cfg.seed, 1600 + m)));
  const auto z1 = concat(std::move(parts));

  const SeqWeight& lam = ctx.lams[0].second;
  std::uint64_t state = derive_seed(cfg.seed, 1700);
  double ratio_b = 0.0, ratio_a = 0.0, transfer = 0.0;
  for (int k = 1; k <= cfg.k_restriction; ++k) {
    const AngularWeight wk = make_wk(k, ctx.matrix, ctx.fam, ctx.n_cut);
    for (int t = 0; t < 3; ++t) {
      const SpanElement g{random_unit_seq(lam, dim, state)};
      const auto rep = restriction_A_check(k, ctx.outer, g, wk, z1);
      ratio_b = std::max(ratio_b, rep.p_vk_f / rep.p_wk_af);
      ratio_a = std::max(ratio_a, rep.p_wk_af / (rep.ck * rep.p_vk_f));
    }
    const ProductCombination vbar{{1.0, ProductWeight(wk, k)}};
    for (std::size_t i = 0; i < z1.size(); i += 7)
      transfer = std::max(transfer, weight_transfer_sup(vbar, z1[i]) / (restriction_constant(k) * wk.at(z1[i])));
  }
  out.push_back(make_record("product.restriction_reverse", "p_{v_k}(g-bar) <= p_{w_k}(g)", CheckKind::Sampled, "<=",
                            ratio_b, 1.0, true, "max ratio, k <= k_restriction"));
  out.push_back(make_record("product.restriction_bound", "p_{w_k}(A f) <= C_k p_{v_k}(f), C_k = (k+2)^((k-1)/(2k))",
                            CheckKind::Sampled, "<=", ratio_a, 1.0 + 8.0 * kUlp, true,
                            "max ratio, k <= k_restriction; rounding slack 8 ulp"));
  out.push_back(make_record("product.weight_transfer", "sup_{z2} v_k(z1, z2) <= C_k w_k(z1)", CheckKind::Sampled,
                            "<=", transfer, 1.0, true, "max ratio over z1 samples"));

  // Condition (M) witnesses.
  {
    const ProductWeight v1(ctx.w1, 1), v2(make_wk(2, ctx.matrix, ctx.fam, ctx.n_cut), 2);
    const Complex z(0.0, 0.75);
    double prev = 0.0, last = 0.0;
    bool monotone = true;
    for (double m : {1e2, 1e4, 1e6}) {
      last = v1.at(z, m) / v2.at(z, m);
      monotone = monotone && last > prev;
      prev = last;
    }
    out.push_back(make_record("product.condition_m_unbounded", "v_k / v_{k+1} unbounded as |z2| -> infinity",
                              CheckKind::Certified, ">", last, 10.0, monotone,
                              "k = 1, z1 = 0.75i; ratio at |z2| = 1e6, increasing over 1e2, 1e4, 1e6"));
  }
  {
    const ProductWeight v1(ctx.w1, 1), v3(make_wk(3, ctx.matrix, ctx.fam, ctx.n_cut), 3);
    double prev = 0.0, last = 0.0;
    bool monotone = true;
    for (int j = 1; j <= 6; ++j) {
      const Complex z = std::polar(1.0 - std::pow(10.0, -j), kPi / 2.0);
      last = v1.at(z, 0.0) / v3.at(z, 0.0);
      monotone = monotone && last > prev;
      prev = last;
    }
    out.push_back(make_record("product.condition_m_boundary", "v_k / v_{k'} unbounded as d(z1) -> 0",
                              CheckKind::Certified, ">", last, 10.0, monotone,
                              "k = 1, k' = 3, z2 = 0; ratio at d = 1e-6, increasing over d = 1e-1..1e-6"));
  }
  return out;
}

void write_csv_number(std::ostream& os, double x) { os << std::setprecision(17) << x; }

}  // namespace

// ------------------------------------------------------------------ config

std::map<std::string, double> VerifyConfig::default_tolerances() {
  return {{"poisson", 1e-10},  {"radial", 1e-6},     {"quadrature", 1e-6}, {"diagonal", 1e-6},
          {"offdiag", 1e-6},   {"contraction", 1e-3}, {"neumann", 1e-9},    {"projection", 1e-6},
          {"phase", 1e-9}};
}

void validate(const VerifyConfig& cfg) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw Error("invalid config: " + what);
  };
  need(cfg.n_max >= 1 && cfg.n_max <= 40, "n_max must be in 1..40");
  need(cfg.trunc_n >= 1 && cfg.trunc_n <= cfg.n_max, "trunc_n must be in 1..n_max");
  need(cfg.k_max >= 5, "k_max must be >= 5");
  need(cfg.k_restriction >= 1 && cfg.k_restriction < cfg.k_max, "k_restriction must be in 1..k_max-1");
  need(cfg.m_cut.base >= 1 && cfg.m_cut.cap >= cfg.m_cut.base, "m_cut needs 1 <= base <= cap");
  need(cfg.m_cut.target > 0.0 && cfg.m_cut.target < 1.0, "m_cut target must be in (0, 1)");
  const auto& s = cfg.samples;
  for (int c : {s.poisson, s.ceiling, s.complement, s.complement_near, s.boundary_theta, s.kernel, s.psi, s.dominating,
                s.dominating_disc, s.restriction})
    need(c > 0, "sample counts must be positive");
  need(s.complement_near <= s.complement, "complement_near must not exceed complement");
  need(cfg.quad_levels >= 2 && cfg.quad_levels <= 50, "quadrature levels must be in 2..50");
  need(cfg.quad_points >= 1 && cfg.quad_points <= 64, "quadrature points must be in 1..64");
  need(cfg.trials > 0, "trials must be positive");
  const auto defaults = VerifyConfig::default_tolerances();
  for (const auto& [key, value] : cfg.tolerances) {
    need(defaults.count(key) == 1, "unknown tolerance '" + key + "'");
    need(value >= 0.0 && value < 1.0, "tolerance '" + key + "' must be in [0, 1)");
  }
  for (const auto& [key, value] : defaults) need(cfg.tolerances.count(key) == 1, "missing tolerance '" + key + "'");
}

Json config_to_json(const VerifyConfig& cfg) {
  const auto& s = cfg.samples;
  return Json{{"n_max", cfg.n_max},
              {"trunc_n", cfg.trunc_n},
              {"k_max", cfg.k_max},
              {"k_restriction", cfg.k_restriction},
              {"m_cut", {{"base", cfg.m_cut.base}, {"target", cfg.m_cut.target}, {"cap", cfg.m_cut.cap}}},
              {"samples",
               {{"poisson", s.poisson},
                {"ceiling", s.ceiling},
                {"complement", s.complement},
                {"complement_near", s.complement_near},
                {"boundary_theta", s.boundary_theta},
                {"kernel", s.kernel},
                {"psi", s.psi},
                {"dominating", s.dominating},
                {"dominating_disc", s.dominating_disc},
                {"restriction", s.restriction}}},
              {"quadrature", {{"levels", cfg.quad_levels}, {"points", cfg.quad_points}}},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"tolerances", cfg.tolerances},
              {"out_dir", cfg.out_dir}};
}

namespace {

template <typename T>
void read(const Json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; }))
      throw Error("invalid config: unknown key '" + where + k + "'");
  }
}

}  // namespace

VerifyConfig config_from_json(const Json& j, VerifyConfig cfg) {
  if (!j.is_object()) throw Error("invalid config: expected a JSON object");
  try {
    reject_unknown(j,
                   {"n_max", "trunc_n", "k_max", "k_restriction", "m_cut", "samples", "quadrature", "trials", "seed",
                    "tolerances", "out_dir"},
                   "");
    read(j, "n_max", cfg.n_max);
    read(j, "trunc_n", cfg.trunc_n);
    read(j, "k_max", cfg.k_max);
    read(j, "k_restriction", cfg.k_restriction);
    if (j.contains("m_cut")) {
      const auto& m = j.at("m_cut");
      reject_unknown(m, {"base", "target", "cap"}, "m_cut.");
      read(m, "base", cfg.m_cut.base);
      read(m, "target", cfg.m_cut.target);
      read(m, "cap", cfg.m_cut.cap);
    }
    if (j.contains("samples")) {
      const auto& s = j.at("samples");
      reject_unknown(s,
                     {"poisson", "ceiling", "complement", "complement_near", "boundary_theta", "kernel", "psi",
                      "dominating", "dominating_disc", "restriction"},
                     "samples.");
      read(s, "poisson", cfg.samples.poisson);
      read(s, "ceiling", cfg.samples.ceiling);
      read(s, "complement", cfg.samples.complement);
      read(s, "complement_near", cfg.samples.complement_near);
      read(s, "boundary_theta", cfg.samples.boundary_theta);
      read(s, "kernel", cfg.samples.kernel);
      read(s, "psi", cfg.samples.psi);
      read(s, "dominating", cfg.samples.dominating);
      read(s, "dominating_disc", cfg.samples.dominating_disc);
      read(s, "restriction", cfg.samples.restriction);
    }
    if (j.contains("quadrature")) {
      const auto& q = j.at("quadrature");
      reject_unknown(q, {"levels", "points"}, "quadrature.");
      read(q, "levels", cfg.quad_levels);
      read(q, "points", cfg.quad_points);
    }
    read(j, "trials", cfg.trials);
    read(j, "seed", cfg.seed);
    if (j.contains("tolerances"))
      for (const auto& [k, v] : j.at("tolerances").items()) {
        if (!cfg.tolerances.count(k)) throw Error("invalid config: unknown key 'tolerances." + k + "'");
        cfg.tolerances[k] = v.get<double>();
      }
    read(j, "out_dir", cfg.out_dir);
  } catch (const Json::exception& e) {
    throw Error(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

VerifyConfig load_config(const std::string& path, VerifyConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw Error("config file '" + path + "': " + e.what());
  }
  return config_from_json(j, std::move(base));
}

std::string config_hash(const VerifyConfig& cfg) {
  const std::string text = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// ------------------------------------------------------------------ report

const char* to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::Certified: return "certified";
    case CheckKind::Sampled: return "sampled";
    case CheckKind::Plumbing: return "plumbing";
  }
  return "plumbing";
}

int VerificationReport::passed() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.pass; }));
}

int VerificationReport::failed() const { return static_cast<int>(records.size()) - passed(); }

const CheckRecord* VerificationReport::find(const std::string& id) const {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

Json report_to_json(const VerificationReport& report) {
  Json records = Json::array();
  int certified = 0, sampled = 0, plumbing = 0;
  for (const auto& r : report.records) {
    records.push_back({{"id", r.id},
                       {"anchor", r.anchor},
                       {"kind", to_string(r.kind)},
                       {"relation", r.relation},
                       {"quantity", r.quantity},
                       {"bound", r.bound},
                       {"margin", r.margin},
                       {"pass", r.pass},
                       {"status", r.status},
                       {"detail", r.detail},
                       {"provenance", {{"config_hash", report.config_hash}, {"seed", report.seed}}}});
    (r.kind == CheckKind::Certified ? certified : r.kind == CheckKind::Sampled ? sampled : plumbing)++;
  }
  return Json{{"tool", "hwil"},
              {"config", report.config},
              {"config_hash", report.config_hash},
              {"seed", report.seed},
              {"records", std::move(records)},
              {"summary",
               {{"total", report.records.size()},
                {"passed", report.passed()},
                {"failed", report.failed()},
                {"certified", certified},
                {"sampled", sampled},
                {"plumbing", plumbing}}}};
}

std::string dump_report(const VerificationReport& report) { return report_to_json(report).dump(2) + "\n"; }

VerificationReport run_battery(const VerifyConfig& cfg, bool concurrent) {
  validate(cfg);
  VerificationReport report;
  report.config = config_to_json(cfg);
  report.config_hash = config_hash(cfg);
  report.seed = cfg.seed;

  const Context ctx(cfg);
  report.records.push_back(make_record("config.validated", "plumbing", CheckKind::Plumbing, ">=", 1.0, 1.0, true,
                                       "config hash " + report.config_hash));

  using Group = std::function<std::vector<CheckRecord>(const Context&)>;
  const std::vector<std::pair<std::string, Group>> groups{{"geometry", geometry_checks},
                                                          {"weights", weight_checks},
                                                          {"outer", outer_checks},
                                                          {"operators", operator_checks},
                                                          {"psi", psi_checks},
                                                          {"product", product_checks}};
  std::vector<std::future<std::vector<CheckRecord>>> running;
  for (const auto& g : groups)
    running.push_back(std::async(concurrent ? std::launch::async : std::launch::deferred, [&ctx, &g] {
      lap();
      try {
        return g.second(ctx);
      } catch (const std::exception& e) {
        return std::vector<CheckRecord>{failed_record(g.first + ".error", "plumbing", CheckKind::Plumbing,
                                                      std::string("error: ") + e.what())};
      }
    }));
  for (auto& f : running) {
    auto recs = f.get();
    report.records.insert(report.records.end(), recs.begin(), recs.end());
  }
  return report;
}

// --------------------------------------------------------------------- csv

DumpKind parse_dump_kind(const std::string& name) {
  if (name == "weight") return DumpKind::Weight;
  if (name == "exponent") return DumpKind::Exponent;
  if (name == "matrix") return DumpKind::Matrix;
  throw Error("unknown dump selector '" + name + "' (expected weight, exponent or matrix)");
}

void dump_csv(const DumpRequest& req, const VerifyConfig& cfg, std::ostream& out) {
  validate(cfg);
  const AngularFamilies fam(cfg.n_max);
  switch (req.kind) {
    case DumpKind::Weight: {
      if (req.index < 1 || req.index > cfg.k_max) throw Error("dump weight: k must be in 1..k_max");
      const int grid = req.grid > 0 ? req.grid : 10000;
      if (grid < 2) throw Error("dump weight: need at least two grid points");
      const auto wk = make_wk(req.index, default_matrix(cfg.n_max, cfg.k_max), fam, cfg.n_max);
      out << "theta,value\n";
      for (int i = 0; i < grid; ++i) {
        const double t = kPi * i / (grid - 1);
        write_csv_number(out, t);
        out << ',';
        write_csv_number(out, wk(t));
        out << '\n';
      }
      break;
    }
    case DumpKind::Exponent: {
      if (req.index < 1 || req.index > cfg.n_max) throw Error("dump exponent: n must be in 1..n_max");
      const int grid = req.grid > 0 ? req.grid : 100;
      const OuterFamily outer(fam, cfg.m_cut);
      out << "r,theta,re_h,im_h,tail_bound\n";
      for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
          const double r = 0.5 + 0.5 * (i + 0.5) / grid;
          const double t = kPi * (j + 0.5) / grid;
          const auto e = outer.exponent(req.index, std::polar(r, t));
          for (double x : {r, t, e.value.real(), e.value.imag()}) {
            write_csv_number(out, x);
            out << ',';
          }
          write_csv_number(out, e.tail_bound);
          out << '\n';
        }
      break;
    }
    case DumpKind::Matrix: {
      const OuterFamily outer(fam, cfg.m_cut);
      const auto m =
          assemble_operator(outer, cfg.trunc_n, {cfg.quad_levels, cfg.quad_points, tol(cfg, "quadrature")});
      out << "n,j,re,im,err\n";
      for (int n = 1; n <= m.dim(); ++n)
        for (int j = 1; j <= m.dim(); ++j) {
          out << n << ',' << j << ',';
          write_csv_number(out, m(n, j).real());
          out << ',';
          write_csv_number(out, m(n, j).imag());
          out << ',';
          write_csv_number(out, m.error(n, j));
          out << '\n';
        }
      break;
    }
  }
}

void dump_csv(const DumpRequest& req, const VerifyConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  dump_csv(req, cfg, out);
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace hwil
