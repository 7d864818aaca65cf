#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "hybridgrid/scenario.hpp"
#include "hybridgrid/scenario_io.hpp"

namespace hybridgrid {
namespace {

constexpr const char* kMinimal = R"(
[sim]
duration = 0.5

[profiles.wind]
points = 0:8

[profiles.irradiance]
points = 0:1000

[profiles.load]
points = 0:2000, 0.25:3000
)";

std::vector<std::string> errors_of(std::string_view text) {
  try {
    (void)parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.errors();
  }
  return {};
}

bool contains(const std::vector<std::string>& errors, std::string_view needle) {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

TEST(ParseScenario, MinimalDocumentTakesDefaults) {
  const Scenario sc = parse_scenario(kMinimal);
  EXPECT_EQ(sc.duration, 0.5);
  EXPECT_EQ(sc.dt, 1e-3);
  EXPECT_EQ(sc.step_count(), 500);
  EXPECT_EQ(sc.turbine, WindTurbineParams{});
  EXPECT_EQ(sc.initial_soc, 50.0);
  ASSERT_EQ(sc.load.points.size(), 2u);
  EXPECT_EQ(sc.load.points[1], (Breakpoint{0.25, 3000.0}));
  EXPECT_EQ(sc.wind.interpolation, Interpolation::Step);
  EXPECT_TRUE(sc.warnings.empty());
}

TEST(ParseScenario, CollectsEveryError) {
  const auto errors = errors_of(R"(
[sim]
dt = abc
bogus = 1
[nowhere]
[profiles.wind]
points = 0:8, 0:9
)");
  EXPECT_TRUE(contains(errors, "sim.dt: invalid number 'abc' (line 3)"));
  EXPECT_TRUE(contains(errors, "sim.bogus: unknown key (line 4)"));
  EXPECT_TRUE(contains(errors, "unknown section [nowhere]"));
  EXPECT_TRUE(contains(errors, "sim.duration: required key missing"));
  EXPECT_TRUE(contains(errors, "profiles.load.points: required key missing"));
  EXPECT_TRUE(contains(errors, "strictly increasing"));
  EXPECT_GE(errors.size(), 6u);
}

TEST(ParseScenario, SocOrderingError) {
  std::string text(kMinimal);
  text += "\n[supervisory]\nsoc_low = 96\nsoc_high = 95\n";
  const auto errors = errors_of(text);
  EXPECT_TRUE(contains(errors, "supervisory: soc_low must be < soc_high"));
}

TEST(ParseScenario, DitherTooFastForStep) {
  std::string text(kMinimal);
  text += "\n[esc]\ndither_freq = 200\nhpf_cutoff = 5\n";
  EXPECT_TRUE(contains(errors_of(text), "esc: sim.dt must be < 1/(10*dither_freq)"));
}

TEST(ParseScenario, TemperatureWarns) {
  std::string text(kMinimal);
  text += "\n[pv]\ntemperature = 40\n";
  const Scenario sc = parse_scenario(text);
  ASSERT_EQ(sc.warnings.size(), 1u);
  EXPECT_NE(sc.warnings[0].find("pv.temperature"), std::string::npos);
}

TEST(LoadScenario, MissingFile) {
  EXPECT_THROW(load_scenario("/nonexistent/none.scn"), std::runtime_error);
}

TEST(LoadScenario, ShippedScenariosParse) {
  for (const char* name : {"fig5", "fig6", "fig11", "fig12", "fig13", "fig14"}) {
    const Scenario sc = load_scenario(std::string(HYBRIDGRID_SCENARIO_DIR) + "/" + name + ".scn");
    EXPECT_TRUE(sc.violations().empty()) << name;
  }
  const Scenario fig12 = load_scenario(std::string(HYBRIDGRID_SCENARIO_DIR) + "/fig12.scn");
  EXPECT_EQ(fig12.duration, 10.0);
  EXPECT_EQ(sample_profile(fig12.wind, 4.999), 8.0);
  EXPECT_EQ(sample_profile(fig12.wind, 5.0), 9.0);
  EXPECT_EQ(sample_profile(fig12.load, 7.0), 5000.0);
}

TEST(SampleProfile, StepAndLinear) {
  Profile p{{{0.0, 10.0}, {2.0, 20.0}, {4.0, 0.0}}, Interpolation::Step};
  EXPECT_EQ(sample_profile(p, 0.0), 10.0);
  EXPECT_EQ(sample_profile(p, 1.999), 10.0);
  EXPECT_EQ(sample_profile(p, 2.0), 20.0);
  EXPECT_EQ(sample_profile(p, 100.0), 0.0);
  p.interpolation = Interpolation::Linear;
  EXPECT_DOUBLE_EQ(sample_profile(p, 1.0), 15.0);
  EXPECT_DOUBLE_EQ(sample_profile(p, 3.0), 10.0);
  EXPECT_EQ(sample_profile(p, 9.0), 0.0);
  EXPECT_THROW(sample_profile(p, -1.0), DomainError);
}

TEST(WriteScenario, RoundTripProperty) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    Scenario sc = parse_scenario(kMinimal);
    sc.duration = 0.1 + 30.0 * u(rng);
    sc.turbine.radius = 1.0 + 3.0 * u(rng);
    sc.turbine.inertia = 0.5 + 10.0 * u(rng);
    sc.battery.capacity_ah = 1.0 + 1000.0 * u(rng);
    sc.initial_soc = 100.0 * u(rng);
    sc.supervisory.dp_deadband = 200.0 * u(rng);
    sc.esc.gain = 0.1 * u(rng);
    sc.wind.interpolation = k % 2 ? Interpolation::Linear : Interpolation::Step;
    sc.wind.points.clear();
    double t = 0.0;
    for (int j = 0; j < 1 + k % 5; ++j) {
      sc.wind.points.push_back({t, 25.0 * u(rng)});
      t += 0.01 + u(rng);
    }
    const Scenario back = parse_scenario(write_scenario(sc));
    ASSERT_EQ(back, sc) << write_scenario(sc);
  }
}

TEST(WriteCsv, HeaderRowsAndDeterminism) {
  const Scenario sc = parse_scenario(kMinimal);
  const TimeSeries a = run_scenario(sc);
  const TimeSeries b = run_scenario(sc);
  std::ostringstream sa;
  std::ostringstream sb;
  write_csv(a, sa);
  write_csv(b, sb);
  EXPECT_EQ(sa.str(), sb.str());

  std::istringstream in(sa.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  long rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    ASSERT_EQ(std::count(line.begin(), line.end(), ','), 18) << line;
  }
  EXPECT_EQ(rows, sc.step_count());
}

TEST(RunScenario, InvalidScenarioThrowsBeforeStepping) {
  Scenario sc = parse_scenario(kMinimal);
  sc.supervisory.soc_low = 99.0;
  EXPECT_THROW(run_scenario(sc), ScenarioError);
}

}  // namespace
}  // namespace hybridgrid
