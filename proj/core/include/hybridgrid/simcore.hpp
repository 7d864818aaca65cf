#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hybridgrid/controllers.hpp"
#include "hybridgrid/models.hpp"

namespace hybridgrid {

struct SimConfig {
  WindTurbineParams turbine;
  PvDiodeModel pv;
  BatteryParams battery;
  PoConfig po;
  EscConfig esc;
  SupervisoryConfig supervisory;
  double dt = 1e-3;
  double eta_wind = 1.0;   // bus-side efficiency of each branch
  double eta_solar = 1.0;

  // Controller periods expressed in steps; both must be whole multiples of dt.
  long po_steps() const;
  long supervisory_steps() const;
};

struct InitialConditions {
  double omega = 5.0;
  double duty = 0.3;
  double g_hat = 0.1;
  double soc = 50.0;
  OperatingMode mode = OperatingMode::FeedAndCharge;
};

enum StepFlag : std::uint8_t {
  kFlagClamp = 1u << 0,     // battery power or SOC saturated
  kFlagUnserved = 1u << 1,  // load shed for lack of discharge headroom
  kFlagCutout = 1u << 2,    // wind branch closed
};

std::string flags_to_string(std::uint8_t flags);

struct SimState {
  double time = 0.0;
  long step = 0;
  DrivetrainState drivetrain;
  PoState po;
  EscState esc;
  BatteryState battery;
  OperatingMode mode = OperatingMode::FeedAndCharge;
  bool wind_active = true;
  double last_pv_power = 0.0;  // panel-side, fed to the ESC on the next step

  bool operator==(const SimState&) const = default;
};

// One step covers [t, t + dt]. Fields hold the values over that interval and
// t is its end.
struct StepRecord {
  double t = 0.0;
  double wind_speed = 0.0;
  double irradiance = 0.0;
  double omega = 0.0;
  double lambda = 0.0;
  double cp = 0.0;
  double p_wind = 0.0;
  double duty = 0.0;
  double v_pv = 0.0;
  double i_pv = 0.0;
  double g1 = 0.0;
  double p_solar = 0.0;
  double delta_p = 0.0;
  OperatingMode mode = OperatingMode::FeedAndCharge;
  double soc = 0.0;
  double p_battery = 0.0;
  double p_load_served = 0.0;
  double p_dump = 0.0;
  std::uint8_t flags = 0;

  bool operator==(const StepRecord&) const = default;
};

struct TimeSeries {
  double dt = 1e-3;
  std::vector<StepRecord> records;
};

struct StepResult {
  SimState state;
  StepRecord record;
};

SimState initial_state(const SimConfig& config, const InitialConditions& init);

StepResult sim_step(const SimState& state, double wind_speed, double irradiance, double p_load_demand,
                    const SimConfig& config);

struct ConstantWindSegment {
  double start = 0.0;
  double end = 0.0;
  double wind_speed = 0.0;
  double mean_cp_tail = 0.0;      // mean Cp over the last 20% of the segment
  double mean_p_wind_tail = 0.0;  // same window, W
};

struct Summary {
  double duration = 0.0;
  double solar_wh = 0.0;
  double wind_wh = 0.0;
  double load_served_wh = 0.0;
  double battery_wh = 0.0;  // net, + charge
  double dump_wh = 0.0;
  double unserved_wh = 0.0;
  double final_soc = 0.0;
  std::array<double, 4> mode_dwell_s{};  // indexed by mode number - 1
  std::vector<ConstantWindSegment> wind_segments;

  double source_wh() const { return solar_wh + wind_wh; }
  double sink_wh() const { return load_served_wh + battery_wh + dump_wh; }
};

Summary summarize(const TimeSeries& series);

// Mean of `field` over the last `fraction` of records in [begin, end).
double tail_mean(const std::vector<StepRecord>& records, std::size_t begin, std::size_t end, double fraction,
                 double StepRecord::*field);

}  // namespace hybridgrid
