// Acceptance run: the default battery, one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hwil/verify.hpp"

using namespace hwil;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::function<bool(std::string&)> check;
};

const CheckRecord* once(const VerificationReport& rep, const std::string& id, std::string& why) {
  int hits = 0;
  const CheckRecord* found = nullptr;
  for (const auto& r : rep.records)
    if (r.id == id) ++hits, found = &r;
  if (hits != 1) {
    why += id + " appears " + std::to_string(hits) + " times; ";
    return nullptr;
  }
  if (!found->pass) why += id + " failed (" + found->status + "); ";
  return found;
}

bool require(bool cond, const std::string& what, std::string& why) {
  if (!cond) why += what + "; ";
  return cond;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  const VerifyConfig cfg;
  const auto& s = cfg.samples;

  const auto t0 = std::chrono::steady_clock::now();
  const VerificationReport rep = run_battery(cfg, false);
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const VerificationReport again = run_battery(cfg);
  const std::string first = dump_report(rep), second = dump_report(again);
  if (argc > 1) std::ofstream(std::string(argv[1]) + "/acceptance_report.json") << first;

  auto rec = [&](const std::string& id, std::string& why) { return once(rep, id, why); };
  auto secs = [&](std::initializer_list<const char*> ids) {
    double t = 0.0;
    for (const char* id : ids)
      if (const auto* r = rep.find(id)) t += r->seconds;
    return t;
  };

  const std::vector<Criterion> criteria{
      {1, "Poisson normalization", [&](std::string& why) {
         const auto* r = rec("outer.poisson_normalization", why);
         const double t = secs({"outer.poisson_normalization"});
         return r && r->pass && require(r->quantity <= 1e-10, "deviation " + num(r->quantity) + " > 1e-10", why) &&
                require(s.poisson >= 1000, "fewer than 1e3 points", why) &&
                require(t < 1.0, "runtime " + num(t) + " s", why);
       }},
      {2, "outer modulus ceiling", [&](std::string& why) {
         const auto* r = rec("outer.modulus_ceiling", why);
         const double t = secs({"outer.modulus_ceiling"});
         return r && r->pass && require(r->quantity <= 0.0, "Re h_n above the tail bound", why) &&
                require(s.ceiling >= 1000 && cfg.n_max >= 12, "sample counts below 1e3 per n <= 12", why) &&
                require(t < 10.0, "runtime " + num(t) + " s", why);
       }},
      {3, "C_n modulus bound and eps chain", [&](std::string& why) {
         const auto* a = rec("outer.complement_bound", why);
         const auto* b = rec("outer.eps_chain", why);
         const double t = secs({"outer.complement_bound", "outer.eps_chain"});
         return a && b && a->pass && b->pass && require(a->quantity <= 0.0, "log bound exceeded", why) &&
                require(b->quantity <= 1.0, "arithmetic chain exceeded", why) &&
                require(s.complement >= 1000 && s.complement_near >= 200 && cfg.trunc_n >= 8 && cfg.n_max >= 12,
                        "sample counts below the required ones", why) &&
                require(t < 60.0, "runtime " + num(t) + " s", why);
       }},
      {4, "boundary modulus", [&](std::string& why) {
         const auto* r = rec("outer.boundary_modulus", why);
         const double t = secs({"outer.boundary_modulus"});
         return r && r->pass && require(r->quantity <= 1e-6, "relative error " + num(r->quantity), why) &&
                require(s.boundary_theta >= 20 && cfg.trunc_n >= 8, "fewer than 20 angles per n <= 8", why) &&
                require(t < 30.0, "runtime " + num(t) + " s", why);
       }},
      {5, "diagonal identity", [&](std::string& why) {
         const auto* r = rec("operators.diagonal_identity", why);
         const double t = secs({"operators.quadrature", "operators.diagonal_identity"});
         return r && r->pass && require(r->quantity <= 1e-6, "residual " + num(r->quantity), why) &&
                require(cfg.trunc_n >= 8, "N < 8", why) && require(t < 60.0, "runtime " + num(t) + " s", why);
       }},
      {6, "off-diagonal moduli", [&](std::string& why) {
         const auto* r = rec("operators.offdiagonal_modulus", why);
         return r && r->pass && require(r->quantity <= 1.0 + 1e-6, "ratio " + num(r->quantity), why);
       }},
      {7, "ingredient bound", [&](std::string& why) {
         const auto* r = rec("operators.ingredient", why);
         return r && r->pass && require(r->quantity <= 0.125, "ratio " + num(r->quantity), why) &&
                require(cfg.trials >= 100, "fewer than 100 vectors", why);
       }},
      {8, "contraction", [&](std::string& why) {
         const auto* r = rec("operators.contraction", why);
         return r && r->pass &&
                require(r->quantity <= (1.0 + 1e-3) / 128.0, "ratio " + num(r->quantity) + " > 1.001/128", why) &&
                require(cfg.trunc_n == 8 && cfg.trials >= 100, "not N = 8 with 100 vectors", why);
       }},
      {9, "psi norm", [&](std::string& why) {
         const auto* r = rec("operators.psi_norm", why);
         return r && r->pass && require(r->quantity <= 1.0, "ratio to 3 p(a) " + num(r->quantity), why) &&
                require(s.psi >= 100000, "fewer than 1e5 points", why);
       }},
      {10, "Neumann inversion and projection", [&](std::string& why) {
         const auto* a = rec("operators.neumann_residual", why);
         const auto* b = rec("operators.neumann_terms", why);
         const auto* c = rec("operators.projection", why);
         return a && b && c && a->pass && b->pass && c->pass &&
                require(a->quantity < 1e-9, "residual " + num(a->quantity), why) &&
                require(b->quantity <= 6.0, "terms " + num(b->quantity), why) &&
                require(c->quantity < 1e-6, "idempotence " + num(c->quantity), why);
       }},
      {11, "dominating weight certificate", [&](std::string& why) {
         const auto* r = rec("weights.dominating_certificate", why);
         return r && r->pass && require(r->quantity <= 0.0, "violation " + num(r->quantity), why) &&
                require(s.dominating >= 10000, "fewer than 1e4 samples", why);
       }},
      {12, "restriction estimates", [&](std::string& why) {
         const auto* a = rec("product.restriction_reverse", why);
         const auto* b = rec("product.restriction_bound", why);
         return a && b && a->pass && b->pass && require(cfg.k_restriction >= 5, "k < 5", why);
       }},
      {13, "condition (M) witnesses", [&](std::string& why) {
         const auto* a = rec("product.condition_m_unbounded", why);
         const auto* b = rec("product.condition_m_boundary", why);
         return a && b && a->pass && b->pass && require(a->quantity > 10.0, "ratio " + num(a->quantity), why);
       }},
      {14, "determinism", [&](std::string& why) {
         return require(first == second, "reports differ between runs", why);
       }},
  };

  const std::map<int, std::vector<std::string>> shown{
      {1, {"outer.poisson_normalization"}},
      {2, {"outer.modulus_ceiling"}},
      {3, {"outer.complement_bound", "outer.eps_chain"}},
      {4, {"outer.boundary_modulus"}},
      {5, {"operators.diagonal_identity"}},
      {6, {"operators.offdiagonal_modulus"}},
      {7, {"operators.ingredient"}},
      {8, {"operators.contraction"}},
      {9, {"operators.psi_norm"}},
      {10, {"operators.neumann_residual", "operators.neumann_terms", "operators.projection"}},
      {11, {"weights.dominating_certificate"}},
      {12, {"product.restriction_reverse", "product.restriction_bound"}},
      {13, {"product.condition_m_unbounded", "product.condition_m_boundary"}}};

  int failed = 0;
  for (const auto& c : criteria) {
    std::string why;
    const bool ok = c.check(why);
    failed += !ok;
    std::string values;
    if (auto it = shown.find(c.number); it != shown.end())
      for (const auto& id : it->second)
        if (const auto* r = rep.find(id))
          values += " [" + id + ": " + num(r->quantity) + " " + r->relation + " " + num(r->bound) + "]";
    std::printf("criterion %2d %s: %s%s%s%s\n", c.number, ok ? "PASS" : "FAIL", c.title.c_str(), values.c_str(),
                ok ? "" : " -- ", ok ? "" : why.c_str());
  }
  const bool fast = total < 300.0;
  failed += !fast;
  std::printf("battery runtime %.2f s (target < 300 s): %s\n", total, fast ? "PASS" : "FAIL");
  std::printf("%d/%zu records passed\n", rep.passed(), rep.records.size());
  return failed == 0 ? 0 : 1;
}
