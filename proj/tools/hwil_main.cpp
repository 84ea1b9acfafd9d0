// hwil: run the verification battery, dump CSV grids, show the resolved
// configuration.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hwil/error.hpp"
#include "hwil/verify.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  int n_max = 0;
  int trunc_n = 0;
  long long seed = -1;
  std::vector<std::string> tolerances;
  std::string out_dir;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_path, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--n-max", f.n_max, "number of materialized families");
  app->add_option("--trunc-N", f.trunc_n, "operator truncation N");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--tol", f.tolerances, "tolerance override <check>=<value>");
  app->add_option("--out", f.out_dir, "output directory");
}

hwil::VerifyConfig resolve(const CommonFlags& f) {
  hwil::VerifyConfig cfg;
  if (!f.config_path.empty()) cfg = hwil::load_config(f.config_path, cfg);
  if (f.n_max > 0) cfg.n_max = f.n_max;
  if (f.trunc_n > 0) cfg.trunc_n = f.trunc_n;
  if (f.seed >= 0) cfg.seed = static_cast<std::uint64_t>(f.seed);
  for (const std::string& t : f.tolerances) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw hwil::Error("--tol expects <check>=<value>, got '" + t + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size() - eq - 1) throw hwil::Error("--tol: bad number in '" + t + "'");
    cfg.tolerances[t.substr(0, eq)] = v;
  }
  if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
  hwil::validate(cfg);
  return cfg;
}

int run_verify(const CommonFlags& f, bool quiet) {
  const auto cfg = resolve(f);
  const auto report = hwil::run_battery(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = std::filesystem::path(cfg.out_dir) / "report.json";
  std::ofstream out(path);
  if (!out) throw hwil::Error("cannot open '" + path.string() + "' for writing");
  out << hwil::dump_report(report);
  if (!out) throw hwil::Error("write to '" + path.string() + "' failed");
  if (!quiet)
    for (const auto& r : report.records)
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << "  " << r.quantity << ' ' << r.relation << ' ' << r.bound
                << (r.pass ? "" : "  [" + r.status + "]") << '\n';
  std::cout << report.passed() << '/' << report.records.size() << " checks passed; report: " << path.string()
            << '\n';
  return report.all_passed() ? 0 : 1;
}

int run_dump(const CommonFlags& f, const std::string& what, int index, int grid, std::string file) {
  const auto cfg = resolve(f);
  hwil::DumpRequest req{hwil::parse_dump_kind(what), index, grid};
  if (file.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string stem = req.kind == hwil::DumpKind::Matrix ? what : what + "_" + std::to_string(index);
    file = (std::filesystem::path(cfg.out_dir) / (stem + ".csv")).string();
  }
  if (file == "-") {
    hwil::dump_csv(req, cfg, std::cout);
    return 0;
  }
  hwil::dump_csv(req, cfg, file);
  std::cout << "wrote " << file << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical certificates for the outer-function construction on the half annulus"};
  app.require_subcommand(1);

  CommonFlags verify_flags, dump_flags, show_flags;
  bool quiet = false;
  auto* verify = app.add_subcommand("verify", "run the verification battery and write report.json");
  add_common(verify, verify_flags);
  verify->add_flag("--quiet", quiet, "print only the summary line");

  std::string what, file;
  int index = 1, grid = 0;
  auto* dump = app.add_subcommand("dump", "write a CSV grid (weight, exponent or matrix)");
  add_common(dump, dump_flags);
  dump->add_option("what", what, "weight | exponent | matrix")->required()->check(
      CLI::IsMember({"weight", "exponent", "matrix"}));
  dump->add_option("--index", index, "k for weight, n for exponent");
  dump->add_option("--grid", grid, "grid size (0 = default)");
  dump->add_option("--file", file, "output path, - for stdout (default <out>/<what>_<index>.csv)");

  auto* show = app.add_subcommand("show-config", "print the resolved configuration as JSON");
  add_common(show, show_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return run_verify(verify_flags, quiet);
    if (dump->parsed()) return run_dump(dump_flags, what, index, grid, file);
    if (show->parsed()) {
      std::cout << hwil::config_to_json(resolve(show_flags)).dump(2) << '\n';
      return 0;
    }
  } catch (const hwil::Error& e) {
    std::cerr << "hwil: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hwil: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
