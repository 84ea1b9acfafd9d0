#pragma once

// Configuration, the verification battery and its JSON report, and CSV
// dumps for plotting.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hwil/io.hpp"
#include "hwil/outer.hpp"
#include "hwil/quadrature.hpp"

namespace hwil {

struct SampleCounts {
  int poisson = 1000;
  int ceiling = 1000;          // per n <= n_max
  int complement = 1000;       // per n <= trunc_n
  int complement_near = 200;   // of those, within 1e-3 of the disc boundary
  int boundary_theta = 20;     // per n <= trunc_n
  int kernel = 1000;
  int psi = 100000;
  int dominating = 10000;
  int dominating_disc = 1000;      // per D_n for the constancy check
  int restriction = 2000;
};

struct VerifyConfig {
  int n_max = 12;
  int trunc_n = 8;
  int k_max = 12;
  int k_restriction = 5;
  MCutPolicy m_cut;
  SampleCounts samples;
  int quad_levels = 24;
  int quad_points = 16;
  int trials = 100;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances = default_tolerances();
  std::string out_dir = ".";

  static std::map<std::string, double> default_tolerances();
};

/// Throws Error on the first invalid field. Tolerances must lie in [0, 1);
/// zero is accepted and makes the corresponding checks unreachable.
void validate(const VerifyConfig& cfg);

Json config_to_json(const VerifyConfig& cfg);
/// Fields missing from `j` keep their values from `base`; unknown keys are
/// rejected.
VerifyConfig config_from_json(const Json& j, VerifyConfig base = {});
VerifyConfig load_config(const std::string& path, VerifyConfig base = {});

/// FNV-1a of the canonical config JSON, as 16 hex digits.
std::string config_hash(const VerifyConfig& cfg);

enum class CheckKind { Certified, Sampled, Plumbing };
const char* to_string(CheckKind kind);

struct CheckRecord {
  std::string id;
  std::string anchor;     // the inequality being checked, or "plumbing"
  CheckKind kind = CheckKind::Plumbing;
  std::string relation;   // quantity <relation> bound
  double quantity = 0.0;
  double bound = 0.0;
  double margin = 0.0;    // positive when the relation holds
  bool pass = false;
  std::string status;     // "ok" or the failure reason
  std::string detail;
  double seconds = 0.0;   // wall time since the previous record of its group; not serialized
};

struct VerificationReport {
  Json config;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> records;

  int passed() const;
  int failed() const;
  bool all_passed() const { return failed() == 0; }
  const CheckRecord* find(const std::string& id) const;
};

Json report_to_json(const VerificationReport& report);
std::string dump_report(const VerificationReport& report);

/// Groups run on separate threads unless `concurrent` is false; the record
/// order is the same either way.
VerificationReport run_battery(const VerifyConfig& cfg, bool concurrent = true);

enum class DumpKind { Weight, Exponent, Matrix };
DumpKind parse_dump_kind(const std::string& name);

struct DumpRequest {
  DumpKind kind = DumpKind::Weight;
  int index = 1;  // k for weights, n for exponents; unused for the matrix
  int grid = 0;   // theta points, or points per polar axis; 0 = default
};

void dump_csv(const DumpRequest& req, const VerifyConfig& cfg, std::ostream& out);
/// Writes to `path`; I/O failures carry the path.
void dump_csv(const DumpRequest& req, const VerifyConfig& cfg, const std::string& path);

}  // namespace hwil
