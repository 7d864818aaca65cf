#include "hybridgrid/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace hybridgrid {

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : std::runtime_error(errors.empty() ? std::string("invalid scenario")
                                        : fmt::format("invalid scenario: {}", fmt::join(errors, "; "))),
      errors_(std::move(errors)) {}

namespace {

struct Binding {
  std::string_view section;
  std::string_view key;
  double* value;
};

// Every plain numeric key, in canonical write order.
std::vector<Binding> bindings(Scenario& s) {
  auto& t = s.turbine;
  auto& pv = s.pv;
  auto& b = s.battery;
  auto& po = s.po;
  auto& e = s.esc;
  auto& sup = s.supervisory;
  return {
      {"sim", "duration", &s.duration},
      {"sim", "dt", &s.dt},
      {"sim", "eta_wind", &s.eta_wind},
      {"sim", "eta_solar", &s.eta_solar},
      {"turbine", "rho", &t.rho},
      {"turbine", "radius", &t.radius},
      {"turbine", "beta", &t.beta},
      {"turbine", "c1", &t.c[0]},
      {"turbine", "c2", &t.c[1]},
      {"turbine", "c3", &t.c[2]},
      {"turbine", "c4", &t.c[3]},
      {"turbine", "c5", &t.c[4]},
      {"turbine", "c6", &t.c[5]},
      {"turbine", "inertia", &t.inertia},
      {"turbine", "kv", &t.kv},
      {"turbine", "g_max", &t.g_max},
      {"turbine", "cut_out", &t.cut_out},
      {"turbine", "omega0", &s.omega0},
      {"pv", "voc", &pv.voc},
      {"pv", "isc", &pv.isc},
      {"pv", "vm", &pv.vm},
      {"pv", "im", &pv.im},
      {"pv", "pm", &pv.pm},
      {"pv", "rs", &pv.rs},
      {"pv", "t_ref", &pv.t_ref},
      {"pv", "g_ref", &pv.g_ref},
      {"battery", "capacity", &b.capacity_ah},
      {"battery", "v_nominal", &b.v_nominal},
      {"battery", "max_charge_w", &b.max_charge_w},
      {"battery", "max_discharge_w", &b.max_discharge_w},
      {"battery", "initial_soc", &s.initial_soc},
      {"po", "sample_period", &po.sample_period},
      {"po", "duty_step", &po.duty_step},
      {"po", "duty_min", &po.duty_min},
      {"po", "duty_max", &po.duty_max},
      {"po", "duty0", &s.duty0},
      {"esc", "dither_freq", &e.dither_freq},
      {"esc", "dither_amp", &e.dither_amp},
      {"esc", "hpf_cutoff", &e.hpf_cutoff},
      {"esc", "gain", &e.gain},
      {"esc", "g_min", &e.g_min},
      {"esc", "g_max", &e.g_max},
      {"esc", "g0", &s.g0},
      {"supervisory", "soc_high", &sup.soc_high},
      {"supervisory", "soc_low", &sup.soc_low},
      {"supervisory", "soc_hysteresis", &sup.soc_hysteresis},
      {"supervisory", "dp_deadband", &sup.dp_deadband},
      {"supervisory", "float_charge_w", &sup.float_charge_w},
      {"supervisory", "sample_period", &sup.sample_period},
  };
}

constexpr std::string_view kSections[] = {"sim", "turbine", "pv", "battery", "po", "esc", "supervisory"};
constexpr std::string_view kProfileSections[] = {"profiles.wind", "profiles.irradiance", "profiles.load"};

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool parse_number(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return false;
  out = v;
  return true;
}

bool parse_points(std::string_view text, std::vector<Breakpoint>& out, std::string& bad) {
  out.clear();
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    const auto colon = item.find(':');
    Breakpoint bp;
    if (colon == std::string_view::npos || !parse_number(item.substr(0, colon), bp.time) ||
        !parse_number(item.substr(colon + 1), bp.value)) {
      bad = std::string(item);
      return false;
    }
    out.push_back(bp);
    if (comma == std::string_view::npos) return true;
    text.remove_prefix(comma + 1);
  }
}

Profile* profile_for(Scenario& s, std::string_view section) {
  if (section == "profiles.wind") return &s.wind;
  if (section == "profiles.irradiance") return &s.irradiance;
  if (section == "profiles.load") return &s.load;
  return nullptr;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::vector<std::string> errors;
  const auto table = bindings(s);
  std::map<std::pair<std::string, std::string>, double*> lookup;
  for (const auto& b : table) lookup[{std::string(b.section), std::string(b.key)}] = b.value;

  std::set<std::string> seen_keys;
  std::set<std::string> seen_sections;
  std::string section;
  bool section_known = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(fmt::format("line {}: syntax error: unterminated section header", line_no));
        section_known = false;
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      section_known = std::find(std::begin(kSections), std::end(kSections), section) != std::end(kSections) ||
                      std::find(std::begin(kProfileSections), std::end(kProfileSections), section) !=
                          std::end(kProfileSections);
      if (!section_known) {
        errors.push_back(fmt::format("line {}: unknown section [{}]", line_no, section));
      } else if (!seen_sections.insert(section).second) {
        errors.push_back(fmt::format("line {}: duplicate section [{}]", line_no, section));
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(fmt::format("line {}: syntax error: expected 'key = value' or '[section]'", line_no));
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      errors.push_back(fmt::format("line {}: syntax error: empty key", line_no));
      continue;
    }
    if (section.empty()) {
      errors.push_back(fmt::format("line {}: key '{}' outside of any section", line_no, key));
      continue;
    }
    if (!section_known) continue;  // already reported

    const std::string path = section + "." + key;
    if (!seen_keys.insert(path).second) {
      errors.push_back(fmt::format("{}: duplicate key (line {})", path, line_no));
      continue;
    }

    if (Profile* profile = profile_for(s, section)) {
      if (key == "interpolation") {
        if (value == "step") {
          profile->interpolation = Interpolation::Step;
        } else if (value == "linear") {
          profile->interpolation = Interpolation::Linear;
        } else {
          errors.push_back(fmt::format("{}: expected 'step' or 'linear', got '{}' (line {})", path, value, line_no));
        }
      } else if (key == "points") {
        std::string bad;
        if (!parse_points(value, profile->points, bad)) {
          errors.push_back(fmt::format("{}: malformed breakpoint '{}', expected time:value (line {})", path, bad,
                                       line_no));
        }
      } else {
        errors.push_back(fmt::format("{}: unknown key (line {})", path, line_no));
      }
      continue;
    }

    if (section == "pv" && key == "temperature") {
      double v = 0.0;
      if (!parse_number(value, v)) {
        errors.push_back(fmt::format("{}: invalid number '{}' (line {})", path, value, line_no));
      } else {
        s.temperature = v;
      }
      continue;
    }

    const auto it = lookup.find({section, key});
    if (it == lookup.end()) {
      errors.push_back(fmt::format("{}: unknown key (line {})", path, line_no));
      continue;
    }
    if (!parse_number(value, *it->second)) {
      errors.push_back(fmt::format("{}: invalid number '{}' (line {})", path, value, line_no));
    }
  }

  const bool has_duration = seen_keys.count("sim.duration") > 0;
  if (!has_duration) errors.emplace_back("sim.duration: required key missing");
  std::set<std::string> missing_profiles;
  for (const auto sec : kProfileSections) {
    const std::string name(sec);
    if (!seen_keys.count(name + ".points")) {
      errors.push_back(fmt::format("{}.points: required key missing", name));
      missing_profiles.insert(name);
    }
  }

  for (auto& v : s.violations()) {
    // Avoid restating a missing key as an invariant failure.
    if (!has_duration && v.rfind("sim: duration", 0) == 0) continue;
    if (v.rfind("sim: duration must cover", 0) == 0 && !has_duration) continue;
    bool from_missing_profile = false;
    for (const auto& p : missing_profiles) from_missing_profile |= v.rfind(p + ":", 0) == 0;
    if (from_missing_profile) continue;
    errors.push_back(std::move(v));
  }

  if (!errors.empty()) throw ScenarioError(std::move(errors));

  if (s.temperature && *s.temperature != s.pv.t_ref) {
    s.warnings.push_back(fmt::format("pv.temperature: {} degC ignored; the panel model runs at t_ref = {} degC",
                                     *s.temperature, s.pv.t_ref));
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open scenario file '{}': file not found or unreadable", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string write_scenario(const Scenario& scenario) {
  Scenario copy = scenario;
  std::string out;
  auto it = std::back_inserter(out);
  std::string_view current;
  for (const auto& b : bindings(copy)) {
    if (b.section != current) {
      if (!current.empty()) fmt::format_to(it, "\n");
      fmt::format_to(it, "[{}]\n", b.section);
      current = b.section;
    }
    fmt::format_to(it, "{} = {}\n", b.key, *b.value);
    if (b.section == "pv" && b.key == "g_ref" && copy.temperature) {
      fmt::format_to(it, "temperature = {}\n", *copy.temperature);
    }
  }
  for (const auto sec : kProfileSections) {
    const Profile& p = *profile_for(copy, sec);
    fmt::format_to(it, "\n[{}]\ninterpolation = {}\npoints = ", sec,
                   p.interpolation == Interpolation::Step ? "step" : "linear");
    for (std::size_t k = 0; k < p.points.size(); ++k) {
      fmt::format_to(it, "{}{}:{}", k ? ", " : "", p.points[k].time, p.points[k].value);
    }
    fmt::format_to(it, "\n");
  }
  return out;
}

void write_csv(const TimeSeries& series, std::ostream& sink) {
  std::string buf;
  buf.reserve(256);
  sink << kCsvHeader << '\n';
  for (const auto& r : series.records) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf),
                   "{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{},"
                   "{:.9g},{:.9g},{:.9g},{:.9g},{}\n",
                   r.t, r.wind_speed, r.irradiance, r.omega, r.lambda, r.cp, r.p_wind, r.duty, r.v_pv, r.i_pv, r.g1,
                   r.p_solar, r.delta_p, mode_number(r.mode), r.soc, r.p_battery, r.p_load_served, r.p_dump,
                   flags_to_string(r.flags));
    sink << buf;
  }
  if (!sink) throw std::runtime_error("write_csv: write to sink failed");
}

}  // namespace hybridgrid
