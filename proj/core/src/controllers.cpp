#include "hybridgrid/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hybridgrid {

std::vector<std::string> PoConfig::violations() const {
  std::vector<std::string> out;
  if (!(sample_period > 0.0)) out.emplace_back("sample_period must be > 0");
  if (!(duty_step > 0.0)) out.emplace_back("duty_step must be > 0");
  if (!(duty_min >= 0.0 && duty_min < duty_max && duty_max <= 1.0)) {
    out.emplace_back("duty limits must satisfy 0 <= duty_min < duty_max <= 1");
  }
  return out;
}

int perturbation_sign(double delta_power, double delta_omega, int prev_sign) {
  if (delta_power == 0.0 || delta_omega == 0.0) return prev_sign;
  return (delta_power > 0.0) == (delta_omega > 0.0) ? -1 : +1;
}

PoState po_step(const PoState& state, const PoConfig& config, double power, double omega) {
  PoState next;
  next.prev_sign = perturbation_sign(power - state.prev_power, omega - state.prev_omega, state.prev_sign);
  next.duty = std::clamp(state.duty + next.prev_sign * config.duty_step, config.duty_min, config.duty_max);
  next.prev_power = power;
  next.prev_omega = omega;
  return next;
}

std::vector<std::string> EscConfig::violations() const {
  std::vector<std::string> out;
  if (!(dither_freq > 0.0)) out.emplace_back("dither_freq must be > 0");
  if (!(dither_amp > 0.0)) out.emplace_back("dither_amp must be > 0");
  if (!(hpf_cutoff > 0.0 && hpf_cutoff < dither_freq)) out.emplace_back("hpf_cutoff must satisfy 0 < hpf_cutoff < dither_freq");
  if (!(gain >= 0.0)) out.emplace_back("gain must be >= 0");
  if (!(g_min >= 0.0 && g_min < g_max)) out.emplace_back("g limits must satisfy 0 <= g_min < g_max");
  return out;
}

double esc_command(const EscState& state, const EscConfig& config) {
  return std::max(0.0, state.g_hat + config.dither_amp * std::sin(state.phase));
}

EscOutput esc_step(const EscState& state, const EscConfig& config, double measured_power, double dt) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  EscState s = state;

  // First-order high-pass, backward-Euler discretisation.
  if (!s.primed) {
    s.hpf_out = 0.0;
    s.primed = true;
  } else {
    const double alpha = 1.0 / (1.0 + kTwoPi * config.hpf_cutoff * dt);
    s.hpf_out = alpha * (s.hpf_out + measured_power - s.hpf_prev_in);
  }
  s.hpf_prev_in = measured_power;

  const double gradient = s.hpf_out * std::sin(s.phase);
  s.g_hat = std::clamp(s.g_hat + config.gain * gradient * dt, config.g_min, config.g_max);

  s.phase = std::fmod(s.phase + kTwoPi * config.dither_freq * dt, kTwoPi);
  return {esc_command(s, config), s};
}

std::vector<std::string> SupervisoryConfig::violations() const {
  std::vector<std::string> out;
  if (!(soc_low > 0.0)) out.emplace_back("soc_low must be > 0");
  if (!(soc_high < 100.0)) out.emplace_back("soc_high must be < 100");
  if (!(soc_low < soc_high)) out.emplace_back("soc_low must be < soc_high");
  if (!(soc_hysteresis >= 0.0)) out.emplace_back("soc_hysteresis must be >= 0");
  if (!(dp_deadband >= 0.0)) out.emplace_back("dp_deadband must be >= 0");
  if (!(float_charge_w >= 0.0)) out.emplace_back("float_charge_w must be >= 0");
  if (!(sample_period > 0.0)) out.emplace_back("sample_period must be > 0");
  return out;
}

std::string_view mode_name(OperatingMode m) {
  switch (m) {
    case OperatingMode::FeedAndCharge: return "feed-and-charge";
    case OperatingMode::FeedWithDump: return "feed-with-dump";
    case OperatingMode::ChargeOnlyLoadOff: return "charge-only-load-off";
    case OperatingMode::FeedWithDischarge: return "feed-with-discharge";
  }
  return "unknown";
}

double compute_delta_p(double p_solar, double p_wind, double p_load) { return p_solar + p_wind - p_load; }

OperatingMode select_mode(double delta_p, double soc, const SupervisoryConfig& cfg, OperatingMode prev) {
  const bool surplus = delta_p >= 0.0 || std::abs(delta_p) < cfg.dp_deadband;
  if (surplus) {
    if (soc > cfg.soc_high) return OperatingMode::FeedWithDump;
    if (prev == OperatingMode::FeedWithDump && soc >= cfg.soc_high - cfg.soc_hysteresis) {
      return OperatingMode::FeedWithDump;
    }
    return OperatingMode::FeedAndCharge;
  }
  if (soc < cfg.soc_low) return OperatingMode::ChargeOnlyLoadOff;
  if (prev == OperatingMode::ChargeOnlyLoadOff && soc <= cfg.soc_low + cfg.soc_hysteresis) {
    return OperatingMode::ChargeOnlyLoadOff;
  }
  return OperatingMode::FeedWithDischarge;
}

namespace {

// Load off; everything harvested goes to the battery up to its charge limit.
PowerFlows shed_load(double generation, const BatteryLimits& limits) {
  PowerFlows f;
  f.p_load_served = 0.0;
  f.p_battery = std::min(generation, limits.max_charge_w);
  f.battery_clamped = f.p_battery < generation;
  f.p_dump = generation - f.p_load_served - f.p_battery;
  return f;
}

// Load served; the battery takes `wanted` (signed) within its limits. A charge
// overflow goes to the dump load, a discharge shortfall sheds the load.
PowerFlows serve_load(double generation, double demand, double wanted, const BatteryLimits& limits) {
  if (wanted < -limits.max_discharge_w) {
    PowerFlows f = shed_load(generation, limits);
    f.unserved = true;
    return f;
  }
  PowerFlows f;
  f.p_load_served = demand;
  f.p_battery = std::min(wanted, limits.max_charge_w);
  f.battery_clamped = f.p_battery < wanted;
  f.p_dump = generation - f.p_load_served - f.p_battery;
  return f;
}

}  // namespace

PowerFlows dispatch(OperatingMode mode, double p_solar, double p_wind, double p_load_demand,
                    const BatteryLimits& limits, double float_charge_w) {
  const double generation = p_solar + p_wind;
  const double delta_p = generation - p_load_demand;
  switch (mode) {
    case OperatingMode::FeedAndCharge:
    case OperatingMode::FeedWithDischarge:
      return serve_load(generation, p_load_demand, delta_p, limits);
    case OperatingMode::FeedWithDump:
      // Battery is full: at most the float charge, the rest is dumped.
      return serve_load(generation, p_load_demand, std::min(delta_p, float_charge_w), limits);
    case OperatingMode::ChargeOnlyLoadOff:
      return shed_load(generation, limits);
  }
  return shed_load(generation, limits);
}

bool wind_cutout(double wind_speed, const WindTurbineParams& params, bool currently_active) {
  if (wind_speed > params.cut_out) return false;
  if (currently_active) return true;
  return wind_speed < params.cut_out - kCutoutRearmMargin;
}

}  // namespace hybridgrid
