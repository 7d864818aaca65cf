#include "hybridgrid/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace hybridgrid {

namespace {

long period_in_steps(double period, double dt, const char* what) {
  const double ratio = period / dt;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
    throw DomainError(fmt::format("{} period {} s is not a whole multiple of dt {} s", what, period, dt));
  }
  return n;
}

}  // namespace

long SimConfig::po_steps() const { return period_in_steps(po.sample_period, dt, "P&O"); }

long SimConfig::supervisory_steps() const { return period_in_steps(supervisory.sample_period, dt, "supervisory"); }

std::string flags_to_string(std::uint8_t flags) {
  std::string out;
  auto add = [&](std::uint8_t bit, const char* name) {
    if (!(flags & bit)) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(kFlagClamp, "clamp");
  add(kFlagUnserved, "unserved");
  add(kFlagCutout, "cutout");
  return out;
}

SimState initial_state(const SimConfig& config, const InitialConditions& init) {
  SimState s;
  s.drivetrain.omega = init.omega;
  s.drivetrain.duty = std::clamp(init.duty, config.po.duty_min, config.po.duty_max);
  s.po.duty = s.drivetrain.duty;
  s.po.prev_omega = init.omega;
  s.esc.g_hat = std::clamp(init.g_hat, config.esc.g_min, config.esc.g_max);
  s.battery.soc = init.soc;
  s.mode = init.mode;
  s.wind_active = true;
  return s;
}

StepResult sim_step(const SimState& state, double wind_speed, double irradiance, double p_load_demand,
                    const SimConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw DomainError("sim_step: dt must be > 0");
  if (!(wind_speed >= 0.0) || !(irradiance >= 0.0) || !(p_load_demand >= 0.0) || !std::isfinite(wind_speed) ||
      !std::isfinite(irradiance) || !std::isfinite(p_load_demand)) {
    throw DomainError(fmt::format("sim_step: exogenous inputs must be finite and >= 0 (t={})", state.time));
  }

  SimState s = state;
  StepRecord r;
  const double dt = cfg.dt;
  const double t_start = static_cast<double>(s.step) * dt;

  // 1. cut-out
  s.wind_active = wind_cutout(wind_speed, cfg.turbine, s.wind_active);
  if (!s.wind_active) {
    s.drivetrain = {};
    s.po.duty = 0.0;
    s.po.prev_power = 0.0;
    s.po.prev_omega = 0.0;
    r.flags |= kFlagCutout;
  }

  // 2. drivetrain
  const double duty = s.drivetrain.duty;
  double shaft_power = 0.0;
  if (s.wind_active) {
    s.drivetrain = drivetrain_step(
        s.drivetrain,
        [&](double w) {
          return aero_torque_power(wind_speed, w, cfg.turbine).torque - electrical_torque(duty, w, cfg.turbine);
        },
        dt, cfg.turbine);
    shaft_power = aero_torque_power(wind_speed, s.drivetrain.omega, cfg.turbine).power;
  }
  const double omega = s.drivetrain.omega;
  const double p_wind = cfg.eta_wind * electrical_torque(duty, omega, cfg.turbine) * omega;

  // 3. solar: the ESC sees the panel power measured on the previous step
  double g1 = esc_command(s.esc, cfg.esc);
  if (s.step > 0) {
    const EscOutput esc = esc_step(s.esc, cfg.esc, s.last_pv_power, dt);
    s.esc = esc.state;
    g1 = esc.g1;
  }
  PvPoint pv;
  try {
    pv = pv_operating_point(g1, irradiance, cfg.pv);
  } catch (const NumericalError& e) {
    throw NumericalError(fmt::format("{} (step {}, t={} s)", e.what(), s.step, t_start));
  }
  s.last_pv_power = g1 * pv.v * pv.v;
  const double p_solar = cfg.eta_solar * s.last_pv_power;

  // 4. P&O at the end of each sample period; the new duty applies from the next step
  if (s.wind_active && (s.step + 1) % cfg.po_steps() == 0) {
    s.po = po_step(s.po, cfg.po, shaft_power, omega);
    s.drivetrain.duty = s.po.duty;
  }

  // 5. supervisory: mode sampled at period boundaries, dispatch every step
  const double delta_p = compute_delta_p(p_solar, p_wind, p_load_demand);
  if (s.step % cfg.supervisory_steps() == 0) {
    s.mode = select_mode(delta_p, s.battery.soc, cfg.supervisory, s.mode);
  }
  const BatteryLimits limits{cfg.battery.max_charge_w, cfg.battery.max_discharge_w};
  const PowerFlows flows = dispatch(s.mode, p_solar, p_wind, p_load_demand, limits, cfg.supervisory.float_charge_w);

  // 6. battery
  const BatteryStep batt = battery_step(s.battery, flows.p_battery, dt, cfg.battery);
  s.battery = batt.state;
  if (batt.clamped || flows.battery_clamped) r.flags |= kFlagClamp;
  if (flows.unserved) r.flags |= kFlagUnserved;

  // 7. record
  s.step += 1;
  s.time = static_cast<double>(s.step) * dt;

  r.t = s.time;
  r.wind_speed = wind_speed;
  r.irradiance = irradiance;
  r.omega = omega;
  r.lambda = wind_speed > 0.0 ? tip_speed_ratio(omega, wind_speed, cfg.turbine.radius) : 0.0;
  r.cp = power_coefficient(r.lambda, cfg.turbine.beta, cfg.turbine);
  r.p_wind = p_wind;
  r.duty = duty;
  r.v_pv = pv.v;
  r.i_pv = pv.i;
  r.g1 = g1;
  r.p_solar = p_solar;
  r.delta_p = delta_p;
  r.mode = s.mode;
  r.soc = s.battery.soc;
  r.p_battery = flows.p_battery;
  r.p_load_served = flows.p_load_served;
  r.p_dump = flows.p_dump;
  return {s, r};
}

double tail_mean(const std::vector<StepRecord>& records, std::size_t begin, std::size_t end, double fraction,
                 double StepRecord::*field) {
  if (end <= begin) return 0.0;
  const auto n = end - begin;
  auto tail = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  tail = std::clamp<std::size_t>(tail, 1, n);
  double sum = 0.0;
  for (std::size_t k = end - tail; k < end; ++k) sum += records[k].*field;
  return sum / static_cast<double>(tail);
}

Summary summarize(const TimeSeries& series) {
  const auto& rec = series.records;
  if (rec.empty()) throw std::invalid_argument("summarize: empty series");
  const double h = series.dt / 3600.0;

  Summary s;
  s.duration = static_cast<double>(rec.size()) * series.dt;
  for (const auto& r : rec) {
    s.solar_wh += r.p_solar * h;
    s.wind_wh += r.p_wind * h;
    s.load_served_wh += r.p_load_served * h;
    s.battery_wh += r.p_battery * h;
    s.dump_wh += r.p_dump * h;
    if (r.p_load_served == 0.0) {
      const double demand = r.p_solar + r.p_wind - r.delta_p;
      if (demand > 0.0) s.unserved_wh += demand * h;
    }
    s.mode_dwell_s[static_cast<std::size_t>(mode_number(r.mode) - 1)] += series.dt;
  }
  s.final_soc = rec.back().soc;

  std::size_t begin = 0;
  for (std::size_t k = 1; k <= rec.size(); ++k) {
    if (k < rec.size() && rec[k].wind_speed == rec[begin].wind_speed) continue;
    ConstantWindSegment seg;
    seg.start = rec[begin].t - series.dt;
    seg.end = rec[k - 1].t;
    seg.wind_speed = rec[begin].wind_speed;
    seg.mean_cp_tail = tail_mean(rec, begin, k, 0.2, &StepRecord::cp);
    seg.mean_p_wind_tail = tail_mean(rec, begin, k, 0.2, &StepRecord::p_wind);
    s.wind_segments.push_back(seg);
    begin = k;
  }
  return s;
}

}  // namespace hybridgrid
