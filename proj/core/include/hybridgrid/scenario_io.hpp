#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "hybridgrid/scenario.hpp"
#include "hybridgrid/simcore.hpp"

namespace hybridgrid {

// Sectioned key-value document:
//
//   # comment
//   [sim]
//   duration = 20
//   [profiles.wind]
//   interpolation = step
//   points = 0:8, 10:10
//
// Sections: sim, turbine, pv, battery, po, esc, supervisory, profiles.wind,
// profiles.irradiance, profiles.load. Omitted keys take their defaults; the
// three profiles and sim.duration are required. All problems are reported
// together through ScenarioError.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::string& path);

// Canonical form: every key written, shortest round-trip number format.
std::string write_scenario(const Scenario& scenario);

inline constexpr std::string_view kCsvHeader =
    "t,wind_speed,irradiance,omega,lambda,cp,p_wind,duty,v_pv,i_pv,g1,p_solar,delta_p,mode,soc,p_battery,"
    "p_load_served,p_dump,flags";

// Header plus one row per record; numbers with 9 significant digits.
void write_csv(const TimeSeries& series, std::ostream& sink);

}  // namespace hybridgrid
