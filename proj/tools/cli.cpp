#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "hybridgrid/models.hpp"
#include "hybridgrid/scenario.hpp"
#include "hybridgrid/scenario_io.hpp"
#include "hybridgrid/simcore.hpp"

namespace hybridgrid::cli {

namespace {

struct RunOptions {
  std::string scenario;
  std::string out;
  bool summary = false;
};

struct CurveOptions {
  std::string kind;
  std::string out;
  std::string scenario;
  double beta = 0.0;
  double lambda_max = 13.0;
  double lambda_step = 0.01;
  double irradiance = 1000.0;
  double v_step = 0.1;
  std::vector<double> wind{6.0, 8.0, 10.0, 12.0};
  double omega_max = 80.0;
  double omega_step = 0.1;
};

struct OracleOptions {
  double irradiance = 1000.0;
  std::string scenario;
};

void write_summary(const Summary& s, std::ostream& out) {
  fmt::print(out, "duration_s: {:.9g}\n", s.duration);
  fmt::print(out, "energy_wh: solar={:.6f} wind={:.6f} load_served={:.6f} battery={:.6f} dump={:.6f} unserved={:.6f}\n",
             s.solar_wh, s.wind_wh, s.load_served_wh, s.battery_wh, s.dump_wh, s.unserved_wh);
  fmt::print(out, "balance_wh: sources={:.6f} sinks={:.6f}\n", s.source_wh(), s.sink_wh());
  fmt::print(out, "final_soc: {:.6f}\n", s.final_soc);
  fmt::print(out, "mode_dwell_s: 1={:.3f} 2={:.3f} 3={:.3f} 4={:.3f}\n", s.mode_dwell_s[0], s.mode_dwell_s[1],
             s.mode_dwell_s[2], s.mode_dwell_s[3]);
  for (const auto& seg : s.wind_segments) {
    fmt::print(out, "wind_segment: [{:.3f}, {:.3f}] s wind={:.9g} m/s mean_cp={:.4f} mean_p_wind={:.1f} W\n",
               seg.start, seg.end, seg.wind_speed, seg.mean_cp_tail, seg.mean_p_wind_tail);
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error(fmt::format("cannot open output file '{}'", path));
  return f;
}

PvDatasheet datasheet_from(const std::string& scenario_path, std::ostream& err) {
  if (scenario_path.empty()) return {};
  Scenario sc = load_scenario(scenario_path);
  for (const auto& w : sc.warnings) err << "warning: " << w << '\n';
  return sc.pv;
}

int do_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  const Scenario sc = load_scenario(opt.scenario);
  for (const auto& w : sc.warnings) err << "warning: " << w << '\n';
  const TimeSeries series = run_scenario(sc);
  auto f = open_output(opt.out);
  write_csv(series, f);
  f.close();
  if (!f) throw std::runtime_error(fmt::format("failed writing '{}'", opt.out));
  if (opt.summary) write_summary(summarize(series), out);
  return kOk;
}

int do_curves(const CurveOptions& opt, std::ostream& err) {
  std::string buf;
  auto it = std::back_inserter(buf);
  if (opt.kind == "cp-lambda") {
    const WindTurbineParams turbine;
    fmt::format_to(it, "lambda,cp\n");
    const auto n = static_cast<long>(std::floor(opt.lambda_max / opt.lambda_step + 1e-9));
    for (long k = 0; k <= n; ++k) {
      const double lambda = static_cast<double>(k) * opt.lambda_step;
      fmt::format_to(it, "{:.9g},{:.9g}\n", lambda, power_coefficient(lambda, opt.beta, turbine));
    }
  } else if (opt.kind == "pv") {
    const PvDiodeModel model = fit_pv_model(datasheet_from(opt.scenario, err));
    const double voc = model.open_circuit_voltage(opt.irradiance);
    fmt::format_to(it, "v,i,p\n");
    const auto n = static_cast<long>(std::floor(voc / opt.v_step));
    for (long k = 0; k <= n; ++k) {
      const double v = static_cast<double>(k) * opt.v_step;
      const double i = pv_current(v, opt.irradiance, model);
      fmt::format_to(it, "{:.9g},{:.9g},{:.9g}\n", v, i, v * i);
    }
    fmt::format_to(it, "{:.9g},{:.9g},{:.9g}\n", voc, 0.0, 0.0);
  } else {
    WindTurbineParams turbine;
    turbine.beta = opt.beta;
    fmt::format_to(it, "wind_speed,omega,power\n");
    const auto n = static_cast<long>(std::floor(opt.omega_max / opt.omega_step + 1e-9));
    for (double v : opt.wind) {
      for (long k = 0; k <= n; ++k) {
        const double w = static_cast<double>(k) * opt.omega_step;
        fmt::format_to(it, "{:.9g},{:.9g},{:.9g}\n", v, w, aero_torque_power(v, w, turbine).power);
      }
    }
  }
  auto f = open_output(opt.out);
  f << buf;
  f.close();
  if (!f) throw std::runtime_error(fmt::format("failed writing '{}'", opt.out));
  return kOk;
}

int do_oracle(const OracleOptions& opt, std::ostream& out, std::ostream& err) {
  const PvDiodeModel model = fit_pv_model(datasheet_from(opt.scenario, err));
  const MppPoint mpp = pv_mpp_oracle(opt.irradiance, model);
  fmt::print(out, "irradiance,v_star,p_star\n{:.9g},{:.9g},{:.9g}\n", opt.irradiance, mpp.v, mpp.p);
  return kOk;
}

int do_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  const Scenario sc = load_scenario(path);
  for (const auto& w : sc.warnings) err << "warning: " << w << '\n';
  // Also catches datasheets that satisfy the invariants but cannot be fitted.
  (void)make_sim_config(sc);
  fmt::print(out, "{}: ok ({} steps)\n", path, sc.step_count());
  return kOk;
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid wind/solar/battery DC bus simulator", "hybridsim"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario file and write the per-step CSV");
  run_cmd->add_option("--scenario", run.scenario, "Scenario file")->required();
  run_cmd->add_option("--out", run.out, "CSV output path")->required();
  run_cmd->add_flag("--summary", run.summary, "Print an energy/mode summary to stdout");

  CurveOptions curves;
  auto* curves_cmd = app.add_subcommand("curves", "Sweep a model characteristic into a CSV");
  curves_cmd->add_option("kind", curves.kind, "cp-lambda | pv | turbine-power")
      ->required()
      ->check(CLI::IsMember({"cp-lambda", "pv", "turbine-power"}));
  curves_cmd->add_option("--out", curves.out, "CSV output path")->required();
  curves_cmd->add_option("--beta", curves.beta, "Pitch angle, degrees")->check(CLI::Range(0.0, 30.0));
  curves_cmd->add_option("--lambda-max", curves.lambda_max, "Upper tip-speed ratio")->check(CLI::Range(0.01, 50.0));
  curves_cmd->add_option("--lambda-step", curves.lambda_step, "Tip-speed ratio step")->check(CLI::PositiveNumber);
  curves_cmd->add_option("--irradiance", curves.irradiance, "Irradiance, W/m^2")->check(CLI::PositiveNumber);
  curves_cmd->add_option("--v-step", curves.v_step, "Voltage step for pv, V")->check(CLI::PositiveNumber);
  curves_cmd->add_option("--wind", curves.wind, "Wind speeds for turbine-power, comma list")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  curves_cmd->add_option("--omega-max", curves.omega_max, "Upper rotor speed, rad/s")->check(CLI::PositiveNumber);
  curves_cmd->add_option("--omega-step", curves.omega_step, "Rotor speed step, rad/s")->check(CLI::PositiveNumber);
  curves_cmd->add_option("--scenario", curves.scenario, "Take the PV datasheet from this scenario");

  OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("mpp-oracle", "Brute-force PV maximum power point");
  oracle_cmd->add_option("--irradiance", oracle.irradiance, "Irradiance, W/m^2")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--scenario", oracle.scenario, "Take the PV datasheet from this scenario");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file and report every problem");
  validate_cmd->add_option("scenario", validate_path, "Scenario file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*run_cmd) return do_run(run, out, err);
    if (*curves_cmd) return do_curves(curves, err);
    if (*oracle_cmd) return do_oracle(oracle, out, err);
    if (*validate_cmd) return do_validate(validate_path, out, err);
  } catch (const ScenarioError& e) {
    for (const auto& msg : e.errors()) err << "error: " << msg << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace hybridgrid::cli
