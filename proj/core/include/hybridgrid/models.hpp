#pragma once

#include <array>
#include <string>
#include <vector>

#include "hybridgrid/errors.hpp"

namespace hybridgrid {

// Betz limit; upper clamp for the power coefficient.
inline constexpr double kBetzLimit = 0.593;

// Fixed-pitch turbine with a lumped drivetrain. The generator, rectifier and
// SEPIC stage are folded into a load conductance scaled by the duty command.
struct WindTurbineParams {
  double rho = 1.29;     // kg/m^3
  double radius = 2.5;   // m
  double beta = 0.0;     // pitch, degrees
  std::array<double, 6> c = {0.5176, 116.0, 0.4, 5.0, 21.0, 0.0068};
  double inertia = 5.0;  // kg m^2
  double kv = 1.2;       // V s/rad
  double g_max = 8.0;    // S
  double cut_out = 20.0; // m/s

  double swept_area() const;
  std::vector<std::string> violations() const;

  bool operator==(const WindTurbineParams&) const = default;
};

struct DrivetrainState {
  double omega = 0.0;  // rad/s
  double duty = 0.0;   // [0, 1]

  bool operator==(const DrivetrainState&) const = default;
};

struct PvDatasheet {
  double voc = 129.0;
  double isc = 19.2;
  double vm = 105.6;
  double im = 17.1;
  double pm = 1800.0;
  double rs = 0.2;
  double t_ref = 25.0;
  double g_ref = 1000.0;

  std::vector<std::string> violations() const;

  bool operator==(const PvDatasheet&) const = default;
};

// Single-diode panel without shunt resistance:
//   i = iph(G) - i0 * (exp((v + i*rs) / a) - 1),   iph(G) = iph_ref * G / g_ref
struct PvDiodeModel {
  double iph_ref = 0.0;
  double i0 = 0.0;
  double a = 0.0;  // n * Ns * Vt, volts
  double rs = 0.0;
  double g_ref = 1000.0;
  double voc_ref = 0.0;

  double photo_current(double irradiance) const;
  // Exact for this law: at i = 0 the series drop vanishes.
  double open_circuit_voltage(double irradiance) const;
};

struct BatteryParams {
  double capacity_ah = 900.0;
  double v_nominal = 120.0;
  double max_charge_w = 20000.0;
  double max_discharge_w = 20000.0;

  double energy_wh() const { return capacity_ah * v_nominal; }
  std::vector<std::string> violations() const;

  bool operator==(const BatteryParams&) const = default;
};

struct BatteryState {
  double soc = 50.0;  // percent

  bool operator==(const BatteryState&) const = default;
};

struct BatteryStep {
  BatteryState state;
  bool clamped = false;
};

struct AeroOutput {
  double power = 0.0;   // W
  double torque = 0.0;  // N m
};

struct PvPoint {
  double v = 0.0;
  double i = 0.0;
  double power() const { return v * i; }
};

struct MppPoint {
  double v = 0.0;
  double p = 0.0;
};

// --- wind ---

double tip_speed_ratio(double omega, double wind_speed, double radius);

// Cp(lambda, beta), clamped to [0, Betz].
double power_coefficient(double lambda, double beta, const WindTurbineParams& params);

// Same law without the clamp; exposed for curve sweeps and tests.
double power_coefficient_raw(double lambda, double beta, const WindTurbineParams& params);

AeroOutput aero_torque_power(double wind_speed, double omega, const WindTurbineParams& params);

// K such that P = K w^3 and T = K w^2 along the optimal-lambda locus.
double optimal_k(const WindTurbineParams& params, double cp_max, double lambda_opt);

double electrical_torque(double duty, double omega, const WindTurbineParams& params);

// One RK4 step of J dw/dt = net_torque(w). The callable sees w clamped at 0.
template <class NetTorque>
DrivetrainState drivetrain_step(DrivetrainState state, NetTorque&& net_torque, double dt,
                                const WindTurbineParams& params) {
  if (!(dt > 0.0)) throw DomainError("drivetrain_step: dt must be > 0");
  auto f = [&](double w) { return net_torque(w < 0.0 ? 0.0 : w) / params.inertia; };
  const double w = state.omega;
  const double k1 = f(w);
  const double k2 = f(w + 0.5 * dt * k1);
  const double k3 = f(w + 0.5 * dt * k2);
  const double k4 = f(w + dt * k3);
  const double next = w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  state.omega = next < 0.0 ? 0.0 : next;
  return state;
}

// Constant-torque form: torques held over the step.
DrivetrainState drivetrain_step(DrivetrainState state, double t_aero, double t_elec, double dt,
                                const WindTurbineParams& params);

// --- solar ---

PvDiodeModel fit_pv_model(const PvDatasheet& datasheet);

double pv_current(double v, double irradiance, const PvDiodeModel& model);

// Intersection of the I-V curve with the LFR load line i = g1 * v.
PvPoint pv_operating_point(double g1, double irradiance, const PvDiodeModel& model);

// Brute-force maximum power point. Ground truth for tests and the CLI only.
MppPoint pv_mpp_oracle(double irradiance, const PvDiodeModel& model);

// --- storage ---

// power > 0 charges.
BatteryStep battery_step(BatteryState state, double power, double dt, const BatteryParams& params);

}  // namespace hybridgrid
