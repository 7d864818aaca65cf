#include "hybridgrid/scenario.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace hybridgrid {

std::vector<std::string> Profile::violations() const {
  std::vector<std::string> out;
  if (points.empty()) {
    out.emplace_back("at least one breakpoint is required");
    return out;
  }
  if (points.front().time != 0.0) out.emplace_back("first breakpoint time must be 0");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!std::isfinite(points[k].time) || !std::isfinite(points[k].value)) {
      out.push_back(fmt::format("breakpoint {} is not finite", k));
    } else if (points[k].value < 0.0) {
      out.push_back(fmt::format("breakpoint {} value must be >= 0", k));
    }
    if (k > 0 && !(points[k].time > points[k - 1].time)) {
      out.push_back(fmt::format("breakpoint times must be strictly increasing (at index {})", k));
    }
  }
  return out;
}

double sample_profile(const Profile& profile, double t) {
  if (!(t >= 0.0)) throw DomainError("sample_profile: t must be >= 0");
  if (profile.points.empty()) throw DomainError("sample_profile: empty profile");
  const auto& pts = profile.points;
  // First breakpoint strictly after t; the one before it is active.
  auto after = std::upper_bound(pts.begin(), pts.end(), t, [](double x, const Breakpoint& b) { return x < b.time; });
  if (after == pts.begin()) return pts.front().value;
  if (after == pts.end()) return pts.back().value;
  const Breakpoint& lo = *(after - 1);
  if (profile.interpolation == Interpolation::Step) return lo.value;
  const Breakpoint& hi = *after;
  return lo.value + (hi.value - lo.value) * (t - lo.time) / (hi.time - lo.time);
}

long Scenario::step_count() const {
  return static_cast<long>(std::floor(duration / dt + 1e-9));
}

std::vector<std::string> Scenario::violations() const {
  std::vector<std::string> out;
  auto add = [&](const char* section, const std::vector<std::string>& msgs) {
    for (const auto& m : msgs) out.push_back(fmt::format("{}: {}", section, m));
  };

  std::vector<std::string> sim;
  if (!(duration > 0.0)) sim.emplace_back("duration must be > 0");
  if (!(dt > 0.0)) sim.emplace_back("dt must be > 0");
  if (!(eta_wind > 0.0 && eta_wind <= 1.0)) sim.emplace_back("eta_wind must be in (0, 1]");
  if (!(eta_solar > 0.0 && eta_solar <= 1.0)) sim.emplace_back("eta_solar must be in (0, 1]");
  if (dt > 0.0 && duration > 0.0 && step_count() < 1) sim.emplace_back("duration must cover at least one step");
  add("sim", sim);

  auto turbine_msgs = turbine.violations();
  if (!(omega0 >= 0.0)) turbine_msgs.emplace_back("omega0 must be >= 0");
  add("turbine", turbine_msgs);

  add("pv", pv.violations());

  auto battery_msgs = battery.violations();
  if (!(initial_soc >= 0.0 && initial_soc <= 100.0)) battery_msgs.emplace_back("initial_soc must be in [0, 100]");
  add("battery", battery_msgs);

  auto po_msgs = po.violations();
  if (!(duty0 >= po.duty_min && duty0 <= po.duty_max)) po_msgs.emplace_back("duty0 must lie within the duty limits");
  add("po", po_msgs);

  auto esc_msgs = esc.violations();
  if (!(g0 >= esc.g_min && g0 <= esc.g_max)) esc_msgs.emplace_back("g0 must lie within [g_min, g_max]");
  if (dt > 0.0 && esc.dither_freq > 0.0 && !(dt < 1.0 / (10.0 * esc.dither_freq))) {
    esc_msgs.emplace_back("sim.dt must be < 1/(10*dither_freq)");
  }
  add("esc", esc_msgs);

  add("supervisory", supervisory.violations());

  if (dt > 0.0) {
    SimConfig probe;
    probe.dt = dt;
    probe.po = po;
    probe.supervisory = supervisory;
    if (po.sample_period > 0.0) {
      try {
        (void)probe.po_steps();
      } catch (const DomainError&) {
        out.emplace_back("po: sample_period must be a whole multiple of sim.dt");
      }
    }
    if (supervisory.sample_period > 0.0) {
      try {
        (void)probe.supervisory_steps();
      } catch (const DomainError&) {
        out.emplace_back("supervisory: sample_period must be a whole multiple of sim.dt");
      }
    }
  }

  add("profiles.wind", wind.violations());
  add("profiles.irradiance", irradiance.violations());
  add("profiles.load", load.violations());
  return out;
}

SimConfig make_sim_config(const Scenario& sc) {
  SimConfig c;
  c.turbine = sc.turbine;
  c.pv = fit_pv_model(sc.pv);
  c.battery = sc.battery;
  c.po = sc.po;
  c.esc = sc.esc;
  c.supervisory = sc.supervisory;
  c.dt = sc.dt;
  c.eta_wind = sc.eta_wind;
  c.eta_solar = sc.eta_solar;
  return c;
}

InitialConditions make_initial_conditions(const Scenario& sc) {
  InitialConditions init;
  init.omega = sc.omega0;
  init.duty = sc.duty0;
  init.g_hat = sc.g0;
  init.soc = sc.initial_soc;
  return init;
}

TimeSeries run_scenario(const Scenario& scenario) {
  auto errors = scenario.violations();
  SimConfig config;
  if (errors.empty()) {
    try {
      config = make_sim_config(scenario);
    } catch (const FitError& e) {
      errors.push_back(fmt::format("pv: {}", e.what()));
    }
  }
  if (!errors.empty()) throw ScenarioError(std::move(errors));

  TimeSeries series;
  series.dt = scenario.dt;
  const long n = scenario.step_count();
  series.records.reserve(static_cast<std::size_t>(n));

  SimState state = initial_state(config, make_initial_conditions(scenario));
  for (long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;
    auto step = sim_step(state, sample_profile(scenario.wind, t), sample_profile(scenario.irradiance, t),
                         sample_profile(scenario.load, t), config);
    state = step.state;
    series.records.push_back(step.record);
  }
  return series;
}

}  // namespace hybridgrid
