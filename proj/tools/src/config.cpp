#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include "geophase/error.hpp"

namespace geophase::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorKind::kConfig, "config: " + msg); }

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ", ") + p;
  return out;
}

std::string child_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// Rejects unknown keys and reports every missing required key at once.
void check_keys(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed,
                const std::vector<std::string>& required) {
  if (!node.IsMap()) config_error((path.empty() ? std::string("document") : path) + ": expected a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.contains(key)) config_error(child_path(path, key) + ": unknown key '" + key + "'");
  }
  std::vector<std::string> missing;
  for (const auto& key : required)
    if (!node[key]) missing.push_back(child_path(path, key));
  if (!missing.empty()) config_error("missing required fields: " + join(missing));
}

std::string scalar(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) config_error(path + ": expected a scalar");
  return n.Scalar();
}

double to_number(const YAML::Node& n, const std::string& path) {
  const std::string s = scalar(n, path);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    config_error(path + ": '" + s + "' is not a finite number");
  }
}

double get_number(const YAML::Node& parent, const std::string& key, const std::string& path, double fallback) {
  const YAML::Node n = parent[key];
  return n ? to_number(n, child_path(path, key)) : fallback;
}

double get_angle(const YAML::Node& parent, const std::string& key, const std::string& path, double fallback) {
  const YAML::Node n = parent[key];
  if (!n) return fallback;
  const std::string p = child_path(path, key);
  try {
    return parse_angle(scalar(n, p));
  } catch (const Error&) {
    config_error(p + ": '" + n.Scalar() + "' is not an angle (number or multiple of pi)");
  }
}

std::size_t get_count(const YAML::Node& parent, const std::string& key, const std::string& path,
                      std::size_t fallback, std::size_t min_value) {
  const YAML::Node n = parent[key];
  if (!n) return fallback;
  const std::string p = child_path(path, key);
  const double v = to_number(n, p);
  if (v != std::floor(v) || v < static_cast<double>(min_value) || v > 1e9)
    config_error(p + ": expected an integer >= " + std::to_string(min_value));
  return static_cast<std::size_t>(v);
}

bool get_bool(const YAML::Node& parent, const std::string& key, const std::string& path, bool fallback) {
  const YAML::Node n = parent[key];
  if (!n) return fallback;
  const std::string s = scalar(n, child_path(path, key));
  if (s == "true") return true;
  if (s == "false") return false;
  config_error(child_path(path, key) + ": expected true or false");
}

std::string get_choice(const YAML::Node& parent, const std::string& key, const std::string& path,
                       const std::vector<std::string>& choices, const std::string& fallback) {
  const YAML::Node n = parent[key];
  if (!n) return fallback;
  const std::string s = scalar(n, child_path(path, key));
  for (const auto& c : choices)
    if (s == c) return s;
  config_error(child_path(path, key) + ": '" + s + "' is not one of " + join(choices));
}

std::vector<double> get_list(const YAML::Node& parent, const std::string& key, const std::string& path,
                             const std::vector<double>& fallback) {
  const YAML::Node n = parent[key];
  if (!n) return fallback;
  const std::string p = child_path(path, key);
  if (!n.IsSequence() || n.size() == 0) config_error(p + ": expected a non-empty list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(to_number(n[i], p + "[" + std::to_string(i) + "]"));
  return out;
}

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) config_error(path + ": must be > 0");
}

void parse_physical(const YAML::Node& n, RunConfig& cfg) {
  const bool dimensionless = cfg.units == Units::kDimensionless;
  std::vector<std::string> required{"delta", "omega", "kappa"};
  if (!dimensionless) required.insert(required.begin(), "g");
  check_keys(n, "physical", {"g", "delta", "omega", "kappa", "gamma", "phi1", "phi2"}, required);
  const double s = cfg.angular_scale();
  const double g = get_number(n, "g", "physical", 1.0);
  if (dimensionless && g != 1.0) config_error("physical.g: must be 1 (or omitted) when units are dimensionless");
  PhysicalParams& p = cfg.physical;
  p.g = s * g;
  p.delta = s * get_number(n, "delta", "physical", 0.0);
  cfg.omega_total = s * get_number(n, "omega", "physical", 0.0);
  p.kappa = s * get_number(n, "kappa", "physical", 0.0);
  p.gamma = s * get_number(n, "gamma", "physical", 0.0);
  p.phi1 = get_angle(n, "phi1", "physical", 0.0);
  p.phi2 = get_angle(n, "phi2", "physical", 0.0);
  require_positive(p.g, "physical.g");
  require_positive(p.delta, "physical.delta");
  require_positive(cfg.omega_total, "physical.omega");
  require_positive(p.kappa, "physical.kappa");
  if (p.gamma < 0.0) config_error("physical.gamma: must be >= 0");
}

void parse_schedule(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "schedule", {"theta", "phi_dot", "phi_dot_unit", "cycles"}, {"theta", "phi_dot"});
  ScheduleSpec& s = cfg.schedule;
  s.theta = get_angle(n, "theta", "schedule", 0.0);
  if (s.theta < 0.0 || s.theta > std::numbers::pi) config_error("schedule.theta: must lie in [0, pi]");
  s.phi_dot = get_number(n, "phi_dot", "schedule", 0.0);
  s.phi_dot_unit =
      get_choice(n, "phi_dot_unit", "schedule", {"Gamma", "absolute"}, "Gamma") == "Gamma" ? PhiDotUnit::kGamma
                                                                                          : PhiDotUnit::kAbsolute;
  s.cycles = static_cast<int>(get_count(n, "cycles", "schedule", 1, 1));
}

void parse_integrator(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "integrator", {"method", "abs_tol", "rel_tol", "step", "max_steps", "samples", "frame"}, {});
  IntegratorConfig& ic = cfg.integrator;
  ic.method = get_choice(n, "method", "integrator", {"dp45", "rk4"}, "dp45") == "dp45"
                  ? IntegratorMethod::kDormandPrince45
                  : IntegratorMethod::kRungeKutta4;
  ic.abs_tol = get_number(n, "abs_tol", "integrator", ic.abs_tol);
  ic.rel_tol = get_number(n, "rel_tol", "integrator", ic.rel_tol);
  ic.step = get_number(n, "step", "integrator", 0.0);
  ic.max_steps = get_count(n, "max_steps", "integrator", ic.max_steps, 1);
  require_positive(ic.abs_tol, "integrator.abs_tol");
  require_positive(ic.rel_tol, "integrator.rel_tol");
  if (ic.step < 0.0) config_error("integrator.step: must be >= 0 (0 selects the default)");
  cfg.samples = get_count(n, "samples", "integrator", cfg.samples, 1);
  cfg.frame = get_choice(n, "frame", "integrator", {"lab", "rotating"}, "lab") == "lab" ? Frame::kLab
                                                                                         : Frame::kRotating;
}

void parse_output(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "output", {"prefix", "svg", "trajectory"}, {});
  if (n["prefix"]) cfg.output.prefix = scalar(n["prefix"], "output.prefix");
  if (cfg.output.prefix.find('/') != std::string::npos) config_error("output.prefix: must not contain '/'");
  cfg.output.svg = get_bool(n, "svg", "output", true);
  cfg.output.trajectory = get_bool(n, "trajectory", "output", false);
}

void parse_sweep(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "sweep", {"kind", "parameter", "start", "stop", "count"}, {"parameter", "start", "stop", "count"});
  SweepSpec s;
  s.kind = get_choice(n, "kind", "sweep", {"cycle", "ramsey"}, "cycle") == "cycle" ? SweepKind::kCycle
                                                                                  : SweepKind::kRamsey;
  s.parameter = get_choice(n, "parameter", "sweep", {"theta", "phi_dot"}, "theta") == "theta"
                    ? SweepParameter::kTheta
                    : SweepParameter::kPhiDot;
  if (s.parameter == SweepParameter::kTheta) {
    s.start = get_angle(n, "start", "sweep", 0.0);
    s.stop = get_angle(n, "stop", "sweep", 0.0);
    for (double v : {s.start, s.stop})
      if (v < 0.0 || v > std::numbers::pi) config_error("sweep.start/stop: theta must lie in [0, pi]");
  } else {
    s.start = get_number(n, "start", "sweep", 0.0);
    s.stop = get_number(n, "stop", "sweep", 0.0);
    if (s.start < 0.0 || s.stop < 0.0) config_error("sweep.start/stop: phi_dot must be >= 0");
  }
  s.count = get_count(n, "count", "sweep", 1, 1);
  cfg.sweep = s;
}

void parse_ramsey(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "ramsey", {"fringe_points"}, {});
  cfg.ramsey.fringe_points = get_count(n, "fringe_points", "ramsey", cfg.ramsey.fringe_points, 2);
}

void parse_validation(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "validation",
             {"theta", "phi_dot_over_Gamma", "delta_over_g", "omega_over_g", "kappa_over_lambda", "n_max", "samples",
              "full_delta_over_g", "full_horizon_lambda", "full_n_max", "full_samples"},
             {});
  ValidationSpec& v = cfg.validation;
  const std::string P = "validation";
  v.theta = get_angle(n, "theta", P, v.theta);
  if (v.theta < 0.0 || v.theta > std::numbers::pi) config_error("validation.theta: must lie in [0, pi]");
  v.phi_dot_over_gamma = get_number(n, "phi_dot_over_Gamma", P, v.phi_dot_over_gamma);
  v.delta_over_g = get_number(n, "delta_over_g", P, v.delta_over_g);
  v.omega_over_g = get_number(n, "omega_over_g", P, v.omega_over_g);
  v.kappa_over_lambda = get_list(n, "kappa_over_lambda", P, v.kappa_over_lambda);
  v.n_max = get_count(n, "n_max", P, v.n_max, 1);
  v.samples = get_count(n, "samples", P, v.samples, 1);
  v.full_delta_over_g = get_list(n, "full_delta_over_g", P, v.full_delta_over_g);
  v.full_horizon_lambda = get_number(n, "full_horizon_lambda", P, v.full_horizon_lambda);
  v.full_n_max = get_count(n, "full_n_max", P, v.full_n_max, 1);
  v.full_samples = get_count(n, "full_samples", P, v.full_samples, 1);
  require_positive(v.phi_dot_over_gamma, "validation.phi_dot_over_Gamma");
  require_positive(v.delta_over_g, "validation.delta_over_g");
  require_positive(v.omega_over_g, "validation.omega_over_g");
  require_positive(v.full_horizon_lambda, "validation.full_horizon_lambda");
  for (double k : v.kappa_over_lambda) require_positive(k, "validation.kappa_over_lambda");
  for (double d : v.full_delta_over_g) require_positive(d, "validation.full_delta_over_g");
}

}  // namespace

double parse_angle(const std::string& text) {
  static const std::regex number(R"(^\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*$)");
  static const std::regex multiple(R"(^\s*([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*\*)?\s*(-)?pi\s*(/\s*(\d+\.?\d*))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, number)) return std::stod(text);
  if (std::regex_match(text, m, multiple)) {
    double v = std::numbers::pi;
    if (m[1].matched) v *= std::stod(m[1].str().substr(0, m[1].str().find('*')));
    if (m[4].matched) v = -v;
    if (m[5].matched) {
      const double den = std::stod(m[6].str());
      if (den == 0.0) fail(ErrorKind::kConfig, "angle: division by zero in '" + text + "'");
      v /= den;
    }
    return v;
  }
  fail(ErrorKind::kConfig, "angle: cannot parse '" + text + "'");
}

double RunConfig::angular_scale() const { return units == Units::kMHz ? 2.0 * std::numbers::pi : 1.0; }

PhysicalParams RunConfig::physical_at(double theta) const {
  return PhysicalParams::from_total_rabi(physical.g, physical.delta, omega_total, theta, physical.kappa,
                                         physical.gamma, physical.phi1, physical.phi2);
}

double RunConfig::phi_dot_at(double raw, const ReservoirParams& r) const {
  return schedule.phi_dot_unit == PhiDotUnit::kGamma ? raw * r.gamma_rate : raw * angular_scale();
}

double RunConfig::phi_dot(const ReservoirParams& r) const { return phi_dot_at(schedule.phi_dot, r); }

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    config_error(source + ": YAML parse error: " + e.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);

  RunConfig cfg;
  cfg.source = source;
  check_keys(root, "",
             {"units", "physical", "schedule", "integrator", "output", "sweep", "ramsey", "validation"},
             {"units", "physical", "schedule"});
  cfg.units = get_choice(root, "units", "", {"MHz", "dimensionless"}, "") == "MHz" ? Units::kMHz
                                                                                  : Units::kDimensionless;
  parse_physical(root["physical"], cfg);
  parse_schedule(root["schedule"], cfg);
  if (root["integrator"]) parse_integrator(root["integrator"], cfg);
  if (root["output"]) parse_output(root["output"], cfg);
  if (root["sweep"]) parse_sweep(root["sweep"], cfg);
  if (root["ramsey"]) parse_ramsey(root["ramsey"], cfg);
  if (root["validation"]) parse_validation(root["validation"], cfg);

  cfg.physical = cfg.physical_at(cfg.schedule.theta);
  try {
    cfg.physical.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
  cfg.warnings = hierarchy(cfg.physical).warnings();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace geophase::cli
