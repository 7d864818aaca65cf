#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace hybridgrid::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = execute(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("hybridgrid_cli_" + name); }

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kUsage);
  EXPECT_EQ(run({"run", "--scenario"}).code, kUsage);
  EXPECT_EQ(run({"curves", "nope", "--out", "x.csv"}).code, kUsage);
  EXPECT_EQ(run({"--help"}).code, kOk);
}

TEST(Cli, ValidateMissingFile) {
  const Outcome o = run({"validate", "/nonexistent/missing.scn"});
  EXPECT_EQ(o.code, kFailure);
  EXPECT_NE(o.err.find("missing.scn"), std::string::npos);
}

TEST(Cli, ValidateReportsEveryError) {
  const fs::path p = temp_file("bad.scn");
  std::ofstream(p) << "[sim]\nduration = 1\n[supervisory]\nsoc_low = 96\nsoc_high = 95\n";
  const Outcome o = run({"validate", p.string()});
  EXPECT_EQ(o.code, kFailure);
  EXPECT_NE(o.err.find("supervisory: soc_low must be < soc_high"), std::string::npos);
  EXPECT_NE(o.err.find("profiles.wind.points: required key missing"), std::string::npos);
  fs::remove(p);
}

TEST(Cli, ValidateShippedScenario) {
  const Outcome o = run({"validate", std::string(HYBRIDGRID_SCENARIO_DIR) + "/fig12.scn"});
  EXPECT_EQ(o.code, kOk) << o.err;
  EXPECT_NE(o.out.find("ok (10000 steps)"), std::string::npos);
}

TEST(Cli, CpLambdaCurvePeak) {
  const fs::path p = temp_file("cp.csv");
  ASSERT_EQ(run({"curves", "cp-lambda", "--out", p.string(), "--lambda-step", "0.001"}).code, kOk);
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "lambda,cp");
  double best_l = 0.0;
  double best_cp = -1.0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double l = std::stod(line.substr(0, comma));
    const double cp = std::stod(line.substr(comma + 1));
    if (cp > best_cp) {
      best_cp = cp;
      best_l = l;
    }
  }
  EXPECT_NEAR(best_cp, 0.48, 0.005);
  EXPECT_NEAR(best_l, 8.1, 0.2);
  fs::remove(p);
}

TEST(Cli, MppOracle) {
  const Outcome o = run({"mpp-oracle", "--irradiance", "1000"});
  ASSERT_EQ(o.code, kOk) << o.err;
  EXPECT_EQ(o.out.rfind("irradiance,v_star,p_star\n1000,", 0), 0u) << o.out;
}

TEST(Cli, RunWritesCsvAndSummary) {
  const fs::path scn = temp_file("short.scn");
  const fs::path csv = temp_file("short.csv");
  std::ofstream(scn) << "[sim]\nduration = 0.2\n[profiles.wind]\npoints = 0:9\n"
                        "[profiles.irradiance]\npoints = 0:800\n[profiles.load]\npoints = 0:1000\n";
  const Outcome o = run({"run", "--scenario", scn.string(), "--out", csv.string(), "--summary"});
  ASSERT_EQ(o.code, kOk) << o.err;
  EXPECT_NE(o.out.find("balance_wh:"), std::string::npos);
  const std::string text = slurp(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 201);
  fs::remove(scn);
  fs::remove(csv);
}

}  // namespace
}  // namespace hybridgrid::cli
