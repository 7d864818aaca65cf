#include <cmath>

#include <gtest/gtest.h>

#include "hybridgrid/scenario.hpp"
#include "hybridgrid/simcore.hpp"

namespace hybridgrid {
namespace {

SimConfig default_config() {
  SimConfig c;
  c.pv = fit_pv_model(PvDatasheet{});
  return c;
}

TEST(SimConfig, ControllerPeriodsInSteps) {
  SimConfig c;
  EXPECT_EQ(c.po_steps(), 50);
  EXPECT_EQ(c.supervisory_steps(), 100);
  c.dt = 0.003;
  EXPECT_THROW((void)c.po_steps(), DomainError);
}

TEST(FlagsToString, Joins) {
  EXPECT_EQ(flags_to_string(0), "");
  EXPECT_EQ(flags_to_string(kFlagClamp), "clamp");
  EXPECT_EQ(flags_to_string(kFlagClamp | kFlagCutout), "clamp|cutout");
  EXPECT_EQ(flags_to_string(kFlagClamp | kFlagUnserved | kFlagCutout), "clamp|unserved|cutout");
}

TEST(SimStep, ZeroInputs) {
  const SimConfig cfg = default_config();
  InitialConditions init;
  init.omega = 0.0;
  const SimState s0 = initial_state(cfg, init);
  const StepResult r = sim_step(s0, 0.0, 0.0, 0.0, cfg);
  EXPECT_EQ(r.record.p_wind, 0.0);
  EXPECT_EQ(r.record.p_solar, 0.0);
  EXPECT_EQ(r.record.p_battery, 0.0);
  EXPECT_EQ(r.record.p_dump, 0.0);
  EXPECT_EQ(r.record.soc, 50.0);
  EXPECT_EQ(r.record.omega, 0.0);
  EXPECT_NEAR(r.record.t, 1e-3, 1e-15);
  EXPECT_EQ(r.state.step, 1);
}

TEST(SimStep, RejectsBadInputs) {
  const SimConfig cfg = default_config();
  const SimState s0 = initial_state(cfg, {});
  EXPECT_THROW(sim_step(s0, -1.0, 0.0, 0.0, cfg), DomainError);
  EXPECT_THROW(sim_step(s0, 5.0, NAN, 0.0, cfg), DomainError);
}

TEST(SimStep, StationaryNearOptimum) {
  // Rotor held at the optimal speed and LFR at the nominal conductance: the
  // first-step powers match the model values.
  const SimConfig cfg = default_config();
  InitialConditions init;
  init.omega = 32.4;
  init.duty = 0.1787 * 32.4 / (8.0 * 1.2 * 1.2);
  init.g_hat = 0.16193;
  const StepResult r = sim_step(initial_state(cfg, init), 10.0, 1000.0, 0.0, cfg);
  EXPECT_NEAR(r.record.omega, 32.4, 0.01);
  EXPECT_NEAR(r.record.cp, 0.48, 0.002);
  EXPECT_NEAR(r.record.p_wind, 6079.0, 0.01 * 6079.0);
  EXPECT_NEAR(r.record.p_solar, 1800.0, 0.02 * 1800.0);
}

TEST(SimStep, ControllerCadence) {
  const SimConfig cfg = default_config();
  SimState s = initial_state(cfg, {});
  double duty = s.drivetrain.duty;
  int duty_changes = 0;
  for (int k = 0; k < 1000; ++k) {
    const StepResult r = sim_step(s, 9.0, 0.0, 0.0, cfg);
    if (r.state.drivetrain.duty != duty) {
      ++duty_changes;
      EXPECT_EQ((k + 1) % 50, 0) << k;
      duty = r.state.drivetrain.duty;
    }
    s = r.state;
  }
  EXPECT_GT(duty_changes, 0);
  EXPECT_LE(duty_changes, 20);
}

TEST(SimStep, CutoutParksRotor) {
  const SimConfig cfg = default_config();
  SimState s = initial_state(cfg, {});
  StepResult r = sim_step(s, 25.0, 0.0, 100.0, cfg);
  EXPECT_TRUE(r.record.flags & kFlagCutout);
  EXPECT_EQ(r.record.p_wind, 0.0);
  EXPECT_EQ(r.record.omega, 0.0);
  // 19 m/s is inside the re-arm margin: still parked.
  r = sim_step(r.state, 19.0, 0.0, 100.0, cfg);
  EXPECT_TRUE(r.record.flags & kFlagCutout);
  r = sim_step(r.state, 12.0, 0.0, 100.0, cfg);
  EXPECT_FALSE(r.record.flags & kFlagCutout);
}

TEST(SimStep, EnergyBalanceAndDeterminism) {
  const SimConfig cfg = default_config();
  SimState a = initial_state(cfg, {});
  SimState b = a;
  for (int k = 0; k < 3000; ++k) {
    const double v = k < 1500 ? 9.0 : 11.0;
    const double g = k < 1000 ? 900.0 : 400.0;
    const StepResult ra = sim_step(a, v, g, 3000.0, cfg);
    const StepResult rb = sim_step(b, v, g, 3000.0, cfg);
    ASSERT_EQ(ra.record, rb.record);
    const auto& r = ra.record;
    ASSERT_NEAR(r.p_solar + r.p_wind, r.p_load_served + r.p_battery + r.p_dump, 1e-12 * 3000.0);
    ASSERT_GE(r.soc, 0.0);
    ASSERT_LE(r.soc, 100.0);
    ASSERT_GE(r.omega, 0.0);
    a = ra.state;
    b = rb.state;
  }
}

TEST(TailMean, LastFraction) {
  std::vector<StepRecord> rec(10);
  for (std::size_t k = 0; k < rec.size(); ++k) rec[k].cp = static_cast<double>(k);
  EXPECT_DOUBLE_EQ(tail_mean(rec, 0, 10, 0.2, &StepRecord::cp), 8.5);
  EXPECT_DOUBLE_EQ(tail_mean(rec, 0, 5, 0.2, &StepRecord::cp), 4.0);
  EXPECT_DOUBLE_EQ(tail_mean(rec, 3, 3, 0.2, &StepRecord::cp), 0.0);
}

TEST(Summarize, SegmentsEnergyAndDwell) {
  TimeSeries ts;
  ts.dt = 0.5;
  for (int k = 0; k < 8; ++k) {
    StepRecord r;
    r.t = 0.5 * (k + 1);
    r.wind_speed = k < 4 ? 8.0 : 10.0;
    r.p_wind = 3600.0;
    r.p_battery = 3600.0;
    r.cp = k < 4 ? 0.4 : 0.48;
    r.mode = k < 6 ? OperatingMode::FeedAndCharge : OperatingMode::FeedWithDump;
    r.soc = 50.0 + k;
    r.p_load_served = 1.0;
    ts.records.push_back(r);
  }
  const Summary s = summarize(ts);
  EXPECT_DOUBLE_EQ(s.duration, 4.0);
  EXPECT_DOUBLE_EQ(s.wind_wh, 4.0);
  EXPECT_DOUBLE_EQ(s.battery_wh, 4.0);
  EXPECT_DOUBLE_EQ(s.mode_dwell_s[0], 3.0);
  EXPECT_DOUBLE_EQ(s.mode_dwell_s[1], 1.0);
  EXPECT_DOUBLE_EQ(s.final_soc, 57.0);
  ASSERT_EQ(s.wind_segments.size(), 2u);
  EXPECT_DOUBLE_EQ(s.wind_segments[0].start, 0.0);
  EXPECT_DOUBLE_EQ(s.wind_segments[0].end, 2.0);
  EXPECT_DOUBLE_EQ(s.wind_segments[1].mean_cp_tail, 0.48);
  EXPECT_THROW(summarize(TimeSeries{}), std::invalid_argument);
}

}  // namespace
}  // namespace hybridgrid
