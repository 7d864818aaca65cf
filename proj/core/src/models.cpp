#include "hybridgrid/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace hybridgrid {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kDiodeTolerance = 1e-9;  // A
constexpr double kOmegaEpsilon = 1e-6;    // rad/s, below this use the starting-torque limit

// Bracketed Newton on a decreasing residual with f(lo) > 0 > f(hi).
// Falls back to bisection whenever a Newton step leaves the bracket.
template <class Residual>
double solve_decreasing(Residual&& residual, double lo, double hi, double tol, const char* what) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxIterations; ++it) {
    const auto [f, df] = residual(x);
    if (std::abs(f) < tol) return x;
    if (f > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = (df < 0.0) ? x - f / df : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) return x;
    x = next;
  }
  throw NumericalError(fmt::format("{}: no convergence after {} iterations", what, kMaxIterations));
}

}  // namespace

double WindTurbineParams::swept_area() const { return std::numbers::pi * radius * radius; }

std::vector<std::string> WindTurbineParams::violations() const {
  std::vector<std::string> out;
  if (!(rho > 0.0)) out.emplace_back("rho must be > 0");
  if (!(radius > 0.0)) out.emplace_back("radius must be > 0");
  if (!(beta >= 0.0)) out.emplace_back("beta must be >= 0");
  if (!(inertia > 0.0)) out.emplace_back("inertia must be > 0");
  if (!(kv > 0.0)) out.emplace_back("kv must be > 0");
  if (!(g_max > 0.0)) out.emplace_back("g_max must be > 0");
  if (!(cut_out > 2.0)) out.emplace_back("cut_out must be > 2 (re-arm hysteresis is 2 m/s)");
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!std::isfinite(c[k])) out.push_back(fmt::format("c{} must be finite", k + 1));
  }
  return out;
}

std::vector<std::string> PvDatasheet::violations() const {
  std::vector<std::string> out;
  if (!(vm > 0.0 && vm < voc)) out.emplace_back("vm must satisfy 0 < vm < voc");
  if (!(im > 0.0 && im < isc)) out.emplace_back("im must satisfy 0 < im < isc");
  if (!(pm > 0.0) || std::abs(vm * im - pm) > 0.01 * pm) out.emplace_back("pm must equal vm*im within 1%");
  if (!(rs >= 0.0)) out.emplace_back("rs must be >= 0");
  if (!(g_ref > 0.0)) out.emplace_back("g_ref must be > 0");
  if (!std::isfinite(t_ref)) out.emplace_back("t_ref must be finite");
  return out;
}

std::vector<std::string> BatteryParams::violations() const {
  std::vector<std::string> out;
  if (!(capacity_ah > 0.0)) out.emplace_back("capacity must be > 0");
  if (!(v_nominal > 0.0)) out.emplace_back("v_nominal must be > 0");
  if (!(max_charge_w >= 0.0)) out.emplace_back("max_charge_w must be >= 0");
  if (!(max_discharge_w >= 0.0)) out.emplace_back("max_discharge_w must be >= 0");
  return out;
}

double PvDiodeModel::photo_current(double irradiance) const { return iph_ref * irradiance / g_ref; }

double PvDiodeModel::open_circuit_voltage(double irradiance) const {
  const double iph = photo_current(irradiance);
  if (iph <= 0.0) return 0.0;
  return a * std::log1p(iph / i0);
}

double tip_speed_ratio(double omega, double wind_speed, double radius) {
  if (!(wind_speed > 0.0)) throw DomainError(fmt::format("tip_speed_ratio: wind speed {} must be > 0", wind_speed));
  if (omega < 0.0) throw DomainError("tip_speed_ratio: omega must be >= 0");
  return omega * radius / wind_speed;
}

double power_coefficient_raw(double lambda, double beta, const WindTurbineParams& p) {
  if (lambda < 0.0) throw DomainError("power_coefficient: lambda must be >= 0");
  if (lambda == 0.0) return 0.0;
  const auto& c = p.c;
  const double inv_li = 1.0 / (lambda + 0.08 * beta) - 0.035 / (beta * beta * beta + 1.0);
  return c[0] * (c[1] * inv_li - c[2] * beta - c[3]) * std::exp(-c[4] * inv_li) + c[5] * lambda;
}

double power_coefficient(double lambda, double beta, const WindTurbineParams& p) {
  return std::clamp(power_coefficient_raw(lambda, beta, p), 0.0, kBetzLimit);
}

AeroOutput aero_torque_power(double wind_speed, double omega, const WindTurbineParams& p) {
  if (wind_speed < 0.0 || omega < 0.0) throw DomainError("aero_torque_power: negative wind speed or omega");
  if (wind_speed == 0.0) return {};
  const double available = 0.5 * p.rho * p.swept_area() * wind_speed * wind_speed * wind_speed;
  if (omega <= kOmegaEpsilon) {
    // Cp ~ c6*lambda near standstill, so T = P/w tends to a finite value.
    const double torque = 0.5 * p.rho * std::numbers::pi * p.radius * p.radius * p.radius * wind_speed *
                          wind_speed * p.c[5];
    return {torque * omega, torque};
  }
  const double cp = power_coefficient(tip_speed_ratio(omega, wind_speed, p.radius), p.beta, p);
  const double power = available * cp;
  return {power, power / omega};
}

double optimal_k(const WindTurbineParams& p, double cp_max, double lambda_opt) {
  if (!(lambda_opt > 0.0)) throw DomainError("optimal_k: lambda_opt must be > 0");
  const double r3 = p.radius * p.radius * p.radius;
  return 0.5 * p.rho * p.swept_area() * cp_max * r3 / (lambda_opt * lambda_opt * lambda_opt);
}

double electrical_torque(double duty, double omega, const WindTurbineParams& p) {
  if (duty < 0.0 || duty > 1.0) throw DomainError("electrical_torque: duty must be in [0, 1]");
  if (omega < 0.0) throw DomainError("electrical_torque: omega must be >= 0");
  return duty * p.g_max * p.kv * p.kv * omega;
}

DrivetrainState drivetrain_step(DrivetrainState state, double t_aero, double t_elec, double dt,
                                const WindTurbineParams& params) {
  return drivetrain_step(state, [=](double) { return t_aero - t_elec; }, dt, params);
}

PvDiodeModel fit_pv_model(const PvDatasheet& ds) {
  if (auto v = ds.violations(); !v.empty()) throw FitError("fit_pv_model: " + v.front());

  auto i0_of = [&](double a) { return ds.isc / std::expm1(ds.voc / a); };
  auto residual = [&](double a) { return ds.isc - i0_of(a) * std::expm1((ds.vm + ds.im * ds.rs) / a) - ds.im; };

  double lo = 1.0;
  double hi = 50.0;
  double r_lo = residual(lo);
  const double r_hi = residual(hi);
  if (!(r_lo * r_hi < 0.0)) {
    throw FitError(fmt::format("fit_pv_model: residual has no sign change on a in [{}, {}] V", lo, hi));
  }
  for (int it = 0; it < kMaxIterations && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double r_mid = residual(mid);
    if ((r_mid > 0.0) == (r_lo > 0.0)) {
      lo = mid;
      r_lo = r_mid;
    } else {
      hi = mid;
    }
  }
  const double a = 0.5 * (lo + hi);

  PvDiodeModel m;
  m.iph_ref = ds.isc;
  m.i0 = i0_of(a);
  m.a = a;
  m.rs = ds.rs;
  m.g_ref = ds.g_ref;
  m.voc_ref = ds.voc;
  return m;
}

double pv_current(double v, double irradiance, const PvDiodeModel& m) {
  if (v < 0.0 || irradiance < 0.0) throw DomainError("pv_current: v and irradiance must be >= 0");
  const double iph = m.photo_current(irradiance);
  auto residual = [&](double i) {
    const double e = std::exp((v + i * m.rs) / m.a);
    return std::pair{iph - m.i0 * (e - 1.0) - i, -m.i0 * m.rs / m.a * e - 1.0};
  };
  if (residual(0.0).first <= 0.0) return 0.0;  // at or beyond open circuit
  try {
    return std::max(0.0, solve_decreasing(residual, 0.0, iph, kDiodeTolerance, "pv_current"));
  } catch (const NumericalError&) {
    throw NumericalError(fmt::format("pv_current: no convergence at v={} V, G={} W/m^2", v, irradiance));
  }
}

PvPoint pv_operating_point(double g1, double irradiance, const PvDiodeModel& m) {
  if (!(g1 >= 0.0)) throw DomainError("pv_operating_point: g1 must be >= 0");
  if (irradiance < 0.0) throw DomainError("pv_operating_point: irradiance must be >= 0");
  const double iph = m.photo_current(irradiance);
  if (iph <= 0.0) return {};
  const double voc = m.open_circuit_voltage(irradiance);
  if (g1 == 0.0) return {voc, 0.0};

  // With i = g1*v substituted the diode law becomes a decreasing function of v alone.
  const double slope = 1.0 + g1 * m.rs;
  auto residual = [&](double v) {
    const double e = std::exp(v * slope / m.a);
    return std::pair{iph - m.i0 * (e - 1.0) - g1 * v, -m.i0 * slope / m.a * e - g1};
  };
  try {
    const double v = solve_decreasing(residual, 0.0, voc, kDiodeTolerance, "pv_operating_point");
    return {v, g1 * v};
  } catch (const NumericalError&) {
    throw NumericalError(
        fmt::format("pv_operating_point: no convergence at g1={} S, G={} W/m^2", g1, irradiance));
  }
}

MppPoint pv_mpp_oracle(double irradiance, const PvDiodeModel& m) {
  if (!(irradiance > 0.0)) throw DomainError("pv_mpp_oracle: irradiance must be > 0");
  const double voc = m.open_circuit_voltage(irradiance);
  constexpr double kStep = 1e-3;
  const auto n = static_cast<long>(std::floor(voc / kStep));
  auto power = [&](double v) { return v * pv_current(v, irradiance, m); };

  long best = 0;
  double best_p = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double p = power(static_cast<double>(k) * kStep);
    if (p > best_p) {
      best_p = p;
      best = k;
    }
  }
  // P(v) is unimodal; polish inside the neighbouring grid cells.
  double lo = std::max(0.0, static_cast<double>(best - 1) * kStep);
  double hi = std::min(voc, static_cast<double>(best + 1) * kStep);
  for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (power(m1) < power(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  const double v = 0.5 * (lo + hi);
  const double p = power(v);
  if (p > best_p) return {v, p};
  return {static_cast<double>(best) * kStep, best_p};
}

BatteryStep battery_step(BatteryState state, double power, double dt, const BatteryParams& params) {
  if (!(dt > 0.0)) throw DomainError("battery_step: dt must be > 0");
  const double next = state.soc + 100.0 * (power * dt / 3600.0) / (params.capacity_ah * params.v_nominal);
  BatteryStep out;
  out.state.soc = std::clamp(next, 0.0, 100.0);
  out.clamped = out.state.soc != next;
  return out;
}

}  // namespace hybridgrid
