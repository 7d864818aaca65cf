#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hybridgrid/models.hpp"

namespace hybridgrid {

// ---------------------------------------------------------------------------
// Perturb-and-observe wind MPPT
//
// The duty command of the wind-side converter is nudged by +/- duty_step once
// per sample period. Raising the duty loads the generator harder and slows the
// rotor, so the next direction is read off the joint movement of power and
// shaft speed:
//
//   dP > 0, dw > 0  ->  -1        dP > 0, dw < 0  ->  +1
//   dP < 0, dw < 0  ->  -1        dP < 0, dw > 0  ->  +1
//
// i.e. sign = -sign(dP * dw). When either difference is exactly zero the
// previous direction is kept.
// ---------------------------------------------------------------------------

struct PoConfig {
  double sample_period = 0.05;  // s
  double duty_step = 0.005;
  double duty_min = 0.0;
  double duty_max = 1.0;

  std::vector<std::string> violations() const;

  bool operator==(const PoConfig&) const = default;
};

struct PoState {
  double prev_power = 0.0;  // W
  double prev_omega = 0.0;  // rad/s
  int prev_sign = +1;
  double duty = 0.3;

  bool operator==(const PoState&) const = default;
};

int perturbation_sign(double delta_power, double delta_omega, int prev_sign);

PoState po_step(const PoState& state, const PoConfig& config, double power, double omega);

// ---------------------------------------------------------------------------
// Extremum-seeking solar MPPT on the LFR conductance g1.
// ---------------------------------------------------------------------------

struct EscConfig {
  double dither_freq = 25.0;   // Hz
  double dither_amp = 0.004;   // S
  double hpf_cutoff = 5.0;     // Hz
  double gain = 0.05;          // S / (W s)
  double g_min = 0.01;         // S
  double g_max = 2.0;          // S

  std::vector<std::string> violations() const;

  bool operator==(const EscConfig&) const = default;
};

struct EscState {
  double g_hat = 0.1;
  double hpf_out = 0.0;      // W
  double hpf_prev_in = 0.0;  // W
  bool primed = false;
  double phase = 0.0;        // rad, kept in [0, 2pi)

  bool operator==(const EscState&) const = default;
};

struct EscOutput {
  double g1 = 0.0;  // conductance command, g_hat plus dither
  EscState state;
};

EscOutput esc_step(const EscState& state, const EscConfig& config, double measured_power, double dt);

// Command at the current phase without advancing the controller.
double esc_command(const EscState& state, const EscConfig& config);

// ---------------------------------------------------------------------------
// Supervisory dispatch
// ---------------------------------------------------------------------------

struct SupervisoryConfig {
  double soc_high = 95.0;
  double soc_low = 40.0;
  double soc_hysteresis = 1.0;
  double dp_deadband = 50.0;    // W
  double float_charge_w = 0.0;  // W
  double sample_period = 0.1;   // s

  std::vector<std::string> violations() const;

  bool operator==(const SupervisoryConfig&) const = default;
};

enum class OperatingMode : std::uint8_t {
  FeedAndCharge = 1,
  FeedWithDump = 2,
  ChargeOnlyLoadOff = 3,
  FeedWithDischarge = 4,
};

constexpr int mode_number(OperatingMode m) { return static_cast<int>(m); }
std::string_view mode_name(OperatingMode m);

struct BatteryLimits {
  double max_charge_w = 20000.0;
  double max_discharge_w = 20000.0;
};

struct PowerFlows {
  double p_load_served = 0.0;
  double p_battery = 0.0;  // + charge
  double p_dump = 0.0;
  bool battery_clamped = false;
  bool unserved = false;
};

double compute_delta_p(double p_solar, double p_wind, double p_load);

OperatingMode select_mode(double delta_p, double soc, const SupervisoryConfig& config, OperatingMode prev_mode);

PowerFlows dispatch(OperatingMode mode, double p_solar, double p_wind, double p_load_demand,
                    const BatteryLimits& limits, double float_charge_w = 0.0);

// Re-arm hysteresis below the cut-out speed.
inline constexpr double kCutoutRearmMargin = 2.0;  // m/s

bool wind_cutout(double wind_speed, const WindTurbineParams& params, bool currently_active);

}  // namespace hybridgrid
