#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hybridgrid/controllers.hpp"
#include "hybridgrid/models.hpp"
#include "hybridgrid/simcore.hpp"

namespace hybridgrid {

enum class Interpolation { Step, Linear };

struct Breakpoint {
  double time = 0.0;
  double value = 0.0;

  bool operator==(const Breakpoint&) const = default;
};

// Piecewise exogenous input. Times strictly increasing and starting at 0.
struct Profile {
  std::vector<Breakpoint> points;
  Interpolation interpolation = Interpolation::Step;

  std::vector<std::string> violations() const;

  bool operator==(const Profile&) const = default;
};

double sample_profile(const Profile& profile, double t);

struct Scenario {
  double duration = 0.0;
  double dt = 1e-3;
  double eta_wind = 1.0;
  double eta_solar = 1.0;

  Profile wind;
  Profile irradiance;
  Profile load;

  WindTurbineParams turbine;
  double omega0 = 5.0;

  PvDatasheet pv;
  std::optional<double> temperature;  // accepted, not modelled

  BatteryParams battery;
  double initial_soc = 50.0;

  PoConfig po;
  double duty0 = 0.3;

  EscConfig esc;
  double g0 = 0.1;

  SupervisoryConfig supervisory;

  // Non-fatal notes produced while reading (e.g. ignored temperature).
  std::vector<std::string> warnings;

  // Number of simulation steps: floor(duration / dt).
  long step_count() const;

  // Invariant violations as "section: message" strings.
  std::vector<std::string> violations() const;

  bool operator==(const Scenario&) const = default;
};

SimConfig make_sim_config(const Scenario& scenario);
InitialConditions make_initial_conditions(const Scenario& scenario);

// Runs from t = 0 to duration. Throws ScenarioError before the first step if
// the scenario is invalid.
TimeSeries run_scenario(const Scenario& scenario);

}  // namespace hybridgrid
