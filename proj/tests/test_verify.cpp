#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hwil/error.hpp"
#include "hwil/verify.hpp"

using namespace hwil;

namespace {

VerifyConfig small_config() {
  VerifyConfig cfg;
  cfg.n_max = 8;
  cfg.trunc_n = 4;
  cfg.k_max = 6;
  cfg.k_restriction = 3;
  auto& s = cfg.samples;
  s.poisson = 100;
  s.ceiling = 50;
  s.complement = 60;
  s.complement_near = 20;
  s.boundary_theta = 8;
  s.kernel = 100;
  s.psi = 500;
  s.dominating = 300;
  s.dominating_disc = 20;
  s.restriction = 50;
  cfg.trials = 10;
  return cfg;
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Config, JsonRoundTrip) {
  VerifyConfig cfg = small_config();
  cfg.seed = 77;
  cfg.tolerances["radial"] = 2e-6;
  const Json j = config_to_json(cfg);
  const VerifyConfig back = config_from_json(j);
  EXPECT_EQ(config_to_json(back), j);
  EXPECT_EQ(config_hash(back), config_hash(cfg));
  EXPECT_EQ(config_hash(cfg).size(), 16u);
  EXPECT_NE(config_hash(cfg), config_hash(VerifyConfig{}));
}

TEST(Config, PartialOverridesKeepBase) {
  const VerifyConfig cfg = config_from_json(Json{{"n_max", 10}, {"tolerances", {{"neumann", 1e-10}}}});
  EXPECT_EQ(cfg.n_max, 10);
  EXPECT_EQ(cfg.trunc_n, 8);
  EXPECT_EQ(cfg.tolerances.at("neumann"), 1e-10);
  EXPECT_EQ(cfg.tolerances.at("poisson"), 1e-10);
}

TEST(Config, Rejections) {
  EXPECT_THROW(config_from_json(Json{{"bogus", 1}}), Error);
  EXPECT_THROW(config_from_json(Json{{"samples", {{"bogus", 1}}}}), Error);
  EXPECT_THROW(config_from_json(Json{{"tolerances", {{"bogus", 0.1}}}}), Error);

  auto bad = [](auto mutate) {
    VerifyConfig cfg;
    mutate(cfg);
    EXPECT_THROW(validate(cfg), Error);
  };
  bad([](VerifyConfig& c) { c.n_max = 0; });
  bad([](VerifyConfig& c) { c.trunc_n = 13; });
  bad([](VerifyConfig& c) { c.k_max = 4; });
  bad([](VerifyConfig& c) { c.k_restriction = 12; });
  bad([](VerifyConfig& c) { c.samples.psi = 0; });
  bad([](VerifyConfig& c) { c.samples.complement_near = 2000; });
  bad([](VerifyConfig& c) { c.quad_levels = 1; });
  bad([](VerifyConfig& c) { c.tolerances["poisson"] = 1.0; });
  bad([](VerifyConfig& c) { c.tolerances["poisson"] = -1e-3; });

  VerifyConfig zero;
  zero.tolerances["poisson"] = 0.0;
  EXPECT_NO_THROW(validate(zero));
}

TEST(Config, LoadErrorsCarryPath) {
  try {
    load_config("/nonexistent/cfg.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/cfg.json"), std::string::npos);
  }
  const auto path = std::filesystem::temp_directory_path() / "hwil_bad_cfg.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_config(path.string()), Error);
  std::filesystem::remove(path);
}

TEST(Battery, SmallConfigDeterministic) {
  const VerifyConfig cfg = small_config();
  const auto a = run_battery(cfg);
  const auto b = run_battery(cfg, false);
  EXPECT_EQ(dump_report(a), dump_report(b));
  EXPECT_GE(a.records.size(), 20u);
  EXPECT_TRUE(a.all_passed()) << dump_report(a);

  std::set<std::string> ids;
  for (const auto& r : a.records) EXPECT_TRUE(ids.insert(r.id).second) << r.id;
  ASSERT_NE(a.find("operators.contraction"), nullptr);
  EXPECT_EQ(a.find("nope"), nullptr);

  const Json j = report_to_json(a);
  EXPECT_EQ(j.at("config"), config_to_json(cfg));
  EXPECT_EQ(j.at("summary").at("passed").get<int>(), a.passed());
  for (const auto& r : j.at("records")) {
    const std::string kind = r.at("kind");
    EXPECT_TRUE(kind == "certified" || kind == "sampled" || kind == "plumbing");
    EXPECT_FALSE(r.contains("seconds"));
  }
}

TEST(Battery, ZeroToleranceFailsExplicitly) {
  VerifyConfig cfg = small_config();
  cfg.tolerances["quadrature"] = 0.0;
  const auto rep = run_battery(cfg);
  EXPECT_FALSE(rep.all_passed());
  const auto* r = rep.find("operators.diagonal_identity");
  ASSERT_NE(r, nullptr);
  EXPECT_FALSE(r->pass);
  EXPECT_NE(r->status.find("tolerance unreachable"), std::string::npos);
  EXPECT_TRUE(rep.find("outer.poisson_normalization")->pass);
}

TEST(Dump, HeadersAndRowCounts) {
  const VerifyConfig cfg = small_config();
  std::ostringstream w, e, m;
  dump_csv({DumpKind::Weight, 2, 50}, cfg, w);
  dump_csv({DumpKind::Exponent, 1, 6}, cfg, e);
  dump_csv({DumpKind::Matrix, 1, 0}, cfg, m);
  EXPECT_EQ(w.str().substr(0, 12), "theta,value\n");
  EXPECT_EQ(count_lines(w.str()), 51);
  EXPECT_EQ(e.str().substr(0, 28), "r,theta,re_h,im_h,tail_bound");
  EXPECT_EQ(count_lines(e.str()), 37);
  EXPECT_EQ(m.str().substr(0, 13), "n,j,re,im,err");
  EXPECT_EQ(count_lines(m.str()), 1 + cfg.trunc_n * cfg.trunc_n);

  EXPECT_THROW(dump_csv({DumpKind::Weight, 0, 10}, cfg, w), Error);
  EXPECT_THROW(dump_csv({DumpKind::Exponent, 9, 10}, cfg, e), Error);
  EXPECT_THROW(parse_dump_kind("table"), Error);
  EXPECT_EQ(parse_dump_kind("matrix"), DumpKind::Matrix);
}

TEST(Dump, PathErrors) {
  try {
    dump_csv({DumpKind::Weight, 1, 10}, small_config(), std::string("/nonexistent/dir/w.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/w.csv"), std::string::npos);
  }
}
