#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "geophase/analytic.hpp"
#include "geophase/cavity.hpp"
#include "geophase/dynamics.hpp"
#include "geophase/error.hpp"
#include "geophase/model.hpp"
#include "geophase/ramsey.hpp"
#include "parallel.hpp"

namespace geophase::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

const char* units_name(Units u) { return u == Units::kMHz ? "MHz" : "dimensionless"; }

// Frequencies appear both as angular rates and as linear frequencies (angular / 2 pi).
Json frequency(double angular) {
  Json j;
  j.set("angular", angular);
  j.set("linear", angular / kTwoPi);
  return j;
}

Json complex_json(cplx z) {
  Json j;
  j.set("re", z.real());
  j.set("im", z.imag());
  return j;
}

std::string frequency_convention(const RunConfig& cfg) {
  return cfg.units == Units::kMHz ? "angular in rad/us, linear in MHz, times in us"
                                  : "angular in units of g (g = 1), linear = angular / (2 pi), times in 1/g";
}

double phi0_of(const RunConfig& cfg) { return cfg.physical.phi1 - cfg.physical.phi2; }

// A non-moving reservoir is held for cycles * 2 pi / Gamma so that frozen runs still have a finite duration.
SteeringSchedule schedule_for(const RunConfig& cfg, double theta, double phi_dot, double gamma_rate) {
  if (phi_dot == 0.0)
    return SteeringSchedule::frozen(theta, phi0_of(cfg), cfg.schedule.cycles * kTwoPi / gamma_rate);
  return SteeringSchedule::constant_theta_linear_phi(theta, phi_dot, phi0_of(cfg), cfg.schedule.cycles);
}

CycleOptions cycle_options(const RunConfig& cfg, bool keep_trajectory = false) {
  CycleOptions o;
  o.frame = cfg.frame;
  o.integrator = cfg.integrator;
  o.samples = cfg.samples;
  o.keep_trajectory = keep_trajectory;
  return o;
}

DensityMatrix dfs_superposition(double theta, double phi0) {
  const CVector d = dfs_basis(theta, phi0).dark.amplitudes();
  CVector psi{d[0], d[1], 1.0};
  return DensityMatrix::pure(PureState::normalized(std::move(psi)));
}

// Closed-form rho_dg(T) / rho_dg(0) after all cycles, from the exact coherence solution.
cplx exact_coherence_ratio(double gamma_rate, double theta, double phi_dot, int cycles) {
  if (phi_dot == 0.0) return 1.0;
  const double T = cycles * kTwoPi / std::abs(phi_dot);
  const cplx x = coherence_exact(T, 1.0, gamma_rate, theta, phi_dot).rho_eg;
  // rho'_eg = e^{i phi/2} rho_dg; phi advances by 2 pi per cycle.
  return (cycles % 2 == 0 ? 1.0 : -1.0) * x;
}

double first_order_damping(double gamma_rate, double theta, double phi_dot, int cycles) {
  const double s = std::sin(theta);
  return std::exp(-0.5 * kPi * s * s * std::abs(phi_dot) / gamma_rate * cycles);
}

void note_regime(double phi_dot, double gamma_rate, std::vector<std::string>& warnings) {
  const double r = std::abs(phi_dot) / gamma_rate;
  if (r > kFirstOrderRegimeLimit) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "|phi_dot|/Gamma = %.4g > %.2g: first-order predictions are unreliable", r,
                  kFirstOrderRegimeLimit);
    warnings.emplace_back(buf);
  }
}

Json warnings_json(const std::vector<std::string>& w) {
  Json a = Json::array();
  for (const auto& s : w) a.push(s);
  return a;
}

Json params_json(const RunConfig& cfg) {
  const PhysicalParams& p = cfg.physical;
  Json j;
  j.set("units", units_name(cfg.units));
  j.set("frequency_convention", frequency_convention(cfg));
  j.set("g", frequency(p.g));
  j.set("delta", frequency(p.delta));
  j.set("omega", frequency(cfg.omega_total));
  j.set("omega1", frequency(p.omega1));
  j.set("omega2", frequency(p.omega2));
  j.set("kappa", frequency(p.kappa));
  j.set("gamma", frequency(p.gamma));
  j.set("phi1", p.phi1);
  j.set("phi2", p.phi2);
  j.set("theta", cfg.schedule.theta);
  j.set("cycles", cfg.schedule.cycles);
  return j;
}

void describe_csv(const RunConfig& cfg, CsvTable& t) {
  const PhysicalParams& p = cfg.physical;
  t.comment("units", units_name(cfg.units));
  t.comment("frequency_convention", frequency_convention(cfg));
  t.comment("g_angular", p.g);
  t.comment("delta_angular", p.delta);
  t.comment("omega_angular", cfg.omega_total);
  t.comment("kappa_angular", p.kappa);
  t.comment("gamma_angular", p.gamma);
  t.comment("phi1", p.phi1);
  t.comment("phi2", p.phi2);
  t.comment("cycles", std::to_string(cfg.schedule.cycles));
  t.comment("frame", cfg.frame == Frame::kLab ? "lab" : "rotating");
}

std::vector<double> grid(double start, double stop, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t k = 0; k < count; ++k)
    v[k] = count == 1 ? start : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1);
  return v;
}

struct CyclePoint {
  double theta, phi_dot_over_gamma, beta_an, beta_num, damping_an, damping_num, leak;
};

CyclePoint cycle_point(const RunConfig& cfg, double theta, double raw_phi_dot) {
  const PhysicalParams p = cfg.physical_at(theta);
  const ReservoirParams r = derive_reservoir(p);
  const double phi_dot = cfg.phi_dot_at(raw_phi_dot, r);
  const CycleResult c =
      run_cycle(r, schedule_for(cfg, theta, phi_dot, r.gamma_rate), dfs_superposition(theta, phi0_of(cfg)),
                cycle_options(cfg));
  CyclePoint pt;
  pt.theta = theta;
  pt.phi_dot_over_gamma = phi_dot / r.gamma_rate;
  pt.beta_an = wrap_phase(cfg.schedule.cycles * loop_phase(theta, phi_dot));
  pt.beta_num = c.beta_num;
  pt.damping_an = first_order_damping(r.gamma_rate, theta, phi_dot, cfg.schedule.cycles);
  pt.damping_num = c.damping;
  pt.leak = c.leak_to_g;
  return pt;
}

struct RamseyPoint {
  double theta, phi_dot_over_gamma;
  RamseyOutcome analytic, numeric;
};

RamseyPoint ramsey_point(const RunConfig& cfg, double theta, double raw_phi_dot) {
  if (phi0_of(cfg) != 0.0) fail(ErrorKind::kConfig, "config: ramsey requires physical.phi1 == physical.phi2 (phi(0) = 0)");
  if (cfg.schedule.cycles != 1) fail(ErrorKind::kConfig, "config: ramsey requires schedule.cycles = 1");
  const ReservoirParams r = derive_reservoir(cfg.physical_at(theta));
  const double phi_dot = cfg.phi_dot_at(raw_phi_dot, r);
  RamseyPoint pt;
  pt.theta = theta;
  pt.phi_dot_over_gamma = phi_dot / r.gamma_rate;
  pt.analytic = ramsey_analytic(r.gamma_rate, theta, phi_dot);
  CycleOptions o = cycle_options(cfg);
  o.frame = Frame::kLab;
  pt.numeric = run_ramsey_numeric(r, schedule_for(cfg, theta, phi_dot, r.gamma_rate), o);
  return pt;
}

Json outcome_json(const RamseyOutcome& o) {
  Json j;
  j.set("mode", std::string(to_string(o.mode)));
  j.set("P_g", o.P_g);
  j.set("P_e", o.P_e);
  j.set("P_f", o.P_f);
  j.set("V", o.V);
  j.set("beta", o.beta_used);
  j.set("alpha", o.alpha);
  return j;
}

std::string path_in(const CommandContext& ctx, const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(ctx.out_dir) / (cfg.output.prefix + name)).string();
}

}  // namespace

Json derive_report(const RunConfig& cfg) {
  const ReservoirParams r = derive_reservoir(cfg.physical);
  const HierarchyReport h = hierarchy(cfg.physical);
  Json j;
  j.set("subcommand", "derive");
  j.set("params", params_json(cfg));
  Json& res = j.set("reservoir", Json::object());
  res.set("Gamma", frequency(r.gamma_rate));
  res.set("lambda", frequency(r.lambda));
  res.set("lambda1", frequency(r.lambda1));
  res.set("lambda2", frequency(r.lambda2));
  res.set("theta", r.theta);
  res.set("phi", r.phi);
  Json& hj = j.set("hierarchy", Json::object());
  hj.set("delta_over_omega", h.delta_over_omega);
  hj.set("delta_over_g", h.delta_over_g);
  hj.set("kappa_over_stark", h.kappa_over_stark);
  hj.set("kappa_over_lambda", h.kappa_over_lambda);
  j.set("warnings", warnings_json(h.warnings()));
  return j;
}

Json analytic_report(const RunConfig& cfg) {
  const ReservoirParams r = derive_reservoir(cfg.physical);
  const double theta = cfg.schedule.theta;
  const double phi_dot = cfg.phi_dot(r);
  const double G = r.gamma_rate;
  std::vector<std::string> warnings = cfg.warnings;
  note_regime(phi_dot, G, warnings);

  Json j;
  j.set("subcommand", "analytic");
  j.set("params", params_json(cfg));
  j.set("Gamma", frequency(G));
  j.set("phi_dot", frequency(phi_dot));
  j.set("phi_dot_over_Gamma", phi_dot / G);
  const BerryPhase bp = berry_phase_and_solid_angle(theta);
  j.set("beta", bp.beta);
  j.set("solid_angle", bp.solid_angle);
  const EigenPair ev = lambdas(G, theta, phi_dot);
  Json& lj = j.set("lambdas", Json::object());
  lj.set("lambda_plus", complex_json(ev.lambda_plus));
  lj.set("lambda_minus", complex_json(ev.lambda_minus));
  lj.set("confluent", ev.confluent);

  const double V = visibility(theta, phi_dot, G);
  const double s = std::sin(theta);
  const double x = kPi * s * s * std::abs(phi_dot) / G;
  Json& fo = j.set("first_order", Json::object());
  fo.set("excited_depletion_factor", 1.0 - x);
  fo.set("coherence_damping", std::exp(-0.5 * x));
  fo.set("visibility", V);

  if (phi_dot != 0.0) {
    const cplx ratio = exact_coherence_ratio(G, theta, phi_dot, 1);
    Json& ex = j.set("exact_cycle", Json::object());
    ex.set("T", kTwoPi / std::abs(phi_dot));
    ex.set("beta", std::arg(ratio));
    ex.set("damping", std::abs(ratio));

    const PenaltyReport pen = spontaneous_penalty(cfg.physical, theta, phi_dot);
    Json& pj = j.set("spontaneous_emission", Json::object());
    pj.set("P_b", pen.P_b);
    pj.set("gamma_e", frequency(pen.gamma_e));
    pj.set("gamma_e_T", pen.gamma_e * pen.T);
    pj.set("V_prime", pen.V_prime);
  }
  const RamseyOutcome ro = ramsey_analytic(G, theta, phi_dot);
  j.set("ramsey", outcome_json(ro));
  j.set("warnings", warnings_json(warnings));
  return j;
}

namespace {

// Lab-frame populations along the run, with dark/bright populations in the instantaneous basis.
CsvTable trajectory_table(const RunConfig& cfg, const SteeringSchedule& sched, const CycleResult& c) {
  CsvTable t({"sample", "t", "phi", "rho_ee", "rho_ff", "rho_gg", "P_dark", "P_bright", "abs_rho_dg", "arg_rho_dg"});
  describe_csv(cfg, t);
  for (std::size_t k = 0; k < c.trajectory.size(); ++k) {
    const Sample& s = c.trajectory[k];
    const double phi = sched.phi(s.t);
    const CycleElements el = dfs_elements(s.rho, sched.theta(s.t), phi);
    t.row(k, {s.t, phi, s.rho(level::kE, level::kE).real(), s.rho(level::kF, level::kF).real(),
              s.rho(level::kG, level::kG).real(), el.aa.real(), el.bb.real(), std::abs(el.ag), std::arg(el.ag)});
  }
  return t;
}

Json cycle_report_impl(const RunConfig& cfg, CsvTable* trajectory) {
  const ReservoirParams r = derive_reservoir(cfg.physical);
  const double theta = cfg.schedule.theta;
  const double phi_dot = cfg.phi_dot(r);
  const double G = r.gamma_rate;
  std::vector<std::string> warnings = cfg.warnings;
  note_regime(phi_dot, G, warnings);

  const SteeringSchedule sched = schedule_for(cfg, theta, phi_dot, G);
  const CycleResult c =
      run_cycle(r, sched, dfs_superposition(theta, phi0_of(cfg)), cycle_options(cfg, trajectory != nullptr));
  if (trajectory != nullptr) *trajectory = trajectory_table(cfg, sched, c);
  const double beta_an = wrap_phase(cfg.schedule.cycles * loop_phase(theta, phi_dot));
  const double damp_an = first_order_damping(G, theta, phi_dot, cfg.schedule.cycles);
  const cplx exact = exact_coherence_ratio(G, theta, phi_dot, cfg.schedule.cycles);

  Json j;
  j.set("subcommand", "cycle");
  j.set("params", params_json(cfg));
  j.set("Gamma", frequency(G));
  j.set("phi_dot", frequency(phi_dot));
  j.set("phi_dot_over_Gamma", phi_dot / G);
  j.set("duration", sched.duration());
  j.set("frame", cfg.frame == Frame::kLab ? "lab" : "rotating");
  Json& num = j.set("numeric", Json::object());
  num.set("beta", c.beta_num);
  num.set("damping", c.damping);
  num.set("leak_to_g", c.leak_to_g);
  Json& an = j.set("first_order", Json::object());
  an.set("beta", beta_an);
  an.set("damping", damp_an);
  Json& ex = j.set("exact", Json::object());
  ex.set("beta", std::arg(exact));
  ex.set("damping", std::abs(exact));
  Json& dev = j.set("deviation", Json::object());
  dev.set("abs_err_beta_first_order", std::abs(wrap_phase(c.beta_num - beta_an)));
  dev.set("abs_err_beta_exact", std::abs(wrap_phase(c.beta_num - std::arg(exact))));
  dev.set("abs_err_damping_first_order", std::abs(c.damping - damp_an));
  dev.set("rel_err_damping_first_order", std::abs(c.damping - damp_an) / damp_an);
  dev.set("abs_err_damping_exact", std::abs(c.damping - std::abs(exact)));
  Json& st = j.set("integrator", Json::object());
  st.set("accepted_steps", c.stats.accepted);
  st.set("rejected_steps", c.stats.rejected);
  st.set("rhs_evaluations", c.stats.rhs_evals);
  j.set("warnings", warnings_json(warnings));
  return j;
}

}  // namespace

Json cycle_report(const RunConfig& cfg) { return cycle_report_impl(cfg, nullptr); }

Json ramsey_report(const RunConfig& cfg) {
  const RamseyPoint pt = ramsey_point(cfg, cfg.schedule.theta, cfg.schedule.phi_dot);
  const ReservoirParams r = derive_reservoir(cfg.physical);
  std::vector<std::string> warnings = cfg.warnings;
  note_regime(pt.phi_dot_over_gamma * r.gamma_rate, r.gamma_rate, warnings);
  Json j;
  j.set("subcommand", "ramsey");
  j.set("params", params_json(cfg));
  j.set("Gamma", frequency(r.gamma_rate));
  j.set("phi_dot_over_Gamma", pt.phi_dot_over_gamma);
  j.set("analytic", outcome_json(pt.analytic));
  j.set("numeric", outcome_json(pt.numeric));
  Json& dev = j.set("deviation", Json::object());
  dev.set("abs_err_P_g", std::abs(pt.numeric.P_g - pt.analytic.P_g));
  dev.set("abs_err_P_e", std::abs(pt.numeric.P_e - pt.analytic.P_e));
  dev.set("probability_sum_minus_one", pt.numeric.P_g + pt.numeric.P_e + pt.numeric.P_f - 1.0);
  j.set("warnings", warnings_json(warnings));
  return j;
}

CsvTable ramsey_fringe_table(const RunConfig& cfg, unsigned jobs, FringeCurve* curve) {
  const std::vector<double> thetas = grid(0.0, kPi, cfg.ramsey.fringe_points);
  const auto points =
      parallel_map(thetas.size(), jobs, [&](std::size_t k) { return ramsey_point(cfg, thetas[k], cfg.schedule.phi_dot); });
  CsvTable t({"grid_index", "theta", "phi_dot_over_Gamma", "beta_analytic", "visibility_analytic", "P_g_analytic",
              "P_g_numeric", "P_e_numeric", "P_f_numeric", "abs_err_P_g"});
  describe_csv(cfg, t);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const RamseyPoint& p = points[k];
    t.row(k, {p.theta, p.phi_dot_over_gamma, p.analytic.beta_used, p.analytic.V, p.analytic.P_g, p.numeric.P_g,
              p.numeric.P_e, p.numeric.P_f, std::abs(p.numeric.P_g - p.analytic.P_g)});
  }
  if (curve != nullptr) {
    const ReservoirParams r = derive_reservoir(cfg.physical);
    const double phi_dot = cfg.phi_dot(r);
    *curve = {};
    for (double th : grid(0.0, kPi, 181)) {
      curve->theta_analytic.push_back(th);
      curve->p_analytic.push_back(ramsey_analytic(r.gamma_rate, th, phi_dot).P_g);
    }
    for (const auto& p : points) {
      curve->theta_numeric.push_back(p.theta);
      curve->p_numeric.push_back(p.numeric.P_g);
    }
  }
  return t;
}

CsvTable sweep_table(const RunConfig& cfg, unsigned jobs) {
  if (!cfg.sweep) fail(ErrorKind::kConfig, "config: the sweep subcommand needs a 'sweep' section");
  const SweepSpec& s = *cfg.sweep;
  const std::vector<double> values = grid(s.start, s.stop, s.count);
  auto theta_of = [&](std::size_t k) { return s.parameter == SweepParameter::kTheta ? values[k] : cfg.schedule.theta; };
  auto phi_dot_of = [&](std::size_t k) {
    return s.parameter == SweepParameter::kPhiDot ? values[k] : cfg.schedule.phi_dot;
  };

  if (s.kind == SweepKind::kCycle) {
    const auto pts =
        parallel_map(values.size(), jobs, [&](std::size_t k) { return cycle_point(cfg, theta_of(k), phi_dot_of(k)); });
    CsvTable t({"grid_index", "theta", "phi_dot_over_Gamma", "beta_analytic", "beta_numeric", "damping_analytic",
                "damping_numeric", "abs_err_beta", "leak_to_g"});
    describe_csv(cfg, t);
    t.comment("sweep", "cycle");
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const CyclePoint& p = pts[k];
      t.row(k, {p.theta, p.phi_dot_over_gamma, p.beta_an, p.beta_num, p.damping_an, p.damping_num,
                std::abs(wrap_phase(p.beta_num - p.beta_an)), p.leak});
    }
    return t;
  }
  const auto pts =
      parallel_map(values.size(), jobs, [&](std::size_t k) { return ramsey_point(cfg, theta_of(k), phi_dot_of(k)); });
  CsvTable t({"grid_index", "theta", "phi_dot_over_Gamma", "P_g_analytic", "P_g_numeric", "P_e_numeric",
              "P_f_numeric", "abs_err_P_g"});
  describe_csv(cfg, t);
  t.comment("sweep", "ramsey");
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const RamseyPoint& p = pts[k];
    t.row(k, {p.theta, p.phi_dot_over_gamma, p.analytic.P_g, p.numeric.P_g, p.numeric.P_e, p.numeric.P_f,
              std::abs(p.numeric.P_g - p.analytic.P_g)});
  }
  return t;
}

Json validate_report(const RunConfig& cfg, unsigned jobs, std::ostream* log) {
  const ValidationSpec& v = cfg.validation;
  Json j;
  j.set("subcommand", "validate");
  j.set("units", "dimensionless (g = 1)");

  // Cavity elimination ladder.
  const auto elim = parallel_map(v.kappa_over_lambda.size(), jobs, [&](std::size_t k) {
    const double lambda = v.omega_over_g / v.delta_over_g;
    const PhysicalParams p =
        PhysicalParams::from_total_rabi(1.0, v.delta_over_g, v.omega_over_g, v.theta, v.kappa_over_lambda[k] * lambda, 0.0);
    const ReservoirParams r = derive_reservoir(p);
    const SteeringSchedule sched =
        SteeringSchedule::constant_theta_linear_phi(v.theta, v.phi_dot_over_gamma * r.gamma_rate);
    EliminationOptions o;
    o.integrator = cfg.integrator;
    o.samples = v.samples;
    FockConfig f;
    f.n_max = v.n_max;
    return validate_elimination(p, sched, f, o);
  });
  Json& ej = j.set("elimination", Json::object());
  ej.set("theta", v.theta);
  ej.set("phi_dot_over_Gamma", v.phi_dot_over_gamma);
  ej.set("delta_over_g", v.delta_over_g);
  ej.set("omega_over_g", v.omega_over_g);
  ej.set("n_max", v.n_max);
  Json& rows = ej.set("runs", Json::array());
  std::vector<double> ratios, distances;
  for (const auto& e : elim) {
    Json row;
    row.set("kappa_over_lambda", e.ratio_kappa_lambda);
    row.set("max_trace_distance", e.max_trace_distance);
    row.set("max_trace_distance_times_kappa_over_lambda", e.max_trace_distance * e.ratio_kappa_lambda);
    row.set("fitted_Gamma", e.fitted_Gamma);
    row.set("predicted_Gamma", e.predicted_Gamma);
    row.set("fitted_over_predicted_Gamma", e.fitted_Gamma / e.predicted_Gamma);
    row.set("max_photon_number", e.max_photon_number);
    row.set("photon_number_within_0.05", e.max_photon_number <= 0.05);
    row.set("truncation_change", e.truncation_change);
    rows.push(std::move(row));
    ratios.push_back(e.ratio_kappa_lambda);
    distances.push_back(e.max_trace_distance);
  }
  // Trace distance ~ (kappa/lambda)^(-p); report p.
  if (ratios.size() >= 2) ej.set("scaling_exponent", -scaling_exponent(ratios, distances));
  if (log != nullptr) *log << "validate: cavity elimination done (" << elim.size() << " runs)\n";

  // |r> elimination against the explicit time-dependent Hamiltonian: atom in |e>, one photon, Omega2 = 0.
  const auto full = parallel_map(v.full_delta_over_g.size(), jobs, [&](std::size_t k) {
    const double delta = v.full_delta_over_g[k];
    const PhysicalParams p = PhysicalParams::from_total_rabi(1.0, delta, v.omega_over_g, kPi, 1.0, 0.0);
    FockConfig f;
    f.n_max = v.full_n_max;
    f.atom_dim = 4;
    CVector psi0(3 * f.fock_dim());
    psi0[product_index(level::kE, 1, f.n_max)] = 1.0;
    const double lambda = v.omega_over_g / delta;
    return validate_full_hamiltonian(p, f, psi0, v.full_horizon_lambda / lambda, v.full_samples,
                                     IntegratorConfig::adaptive(1e-12, 1e-12));
  });
  Json& fj = j.set("full_hamiltonian", Json::object());
  fj.set("omega_over_g", v.omega_over_g);
  fj.set("n_max", v.full_n_max);
  fj.set("horizon_lambda", v.full_horizon_lambda);
  Json& frows = fj.set("runs", Json::array());
  std::vector<double> deltas, dist, deficit;
  for (std::size_t k = 0; k < full.size(); ++k) {
    const FullModelReport& f = full[k];
    const double x = v.omega_over_g / v.full_delta_over_g[k];
    Json row;
    row.set("delta_over_g", v.full_delta_over_g[k]);
    row.set("max_r_population", f.max_r_population);
    row.set("r_population_over_ratio_squared", f.max_r_population / (x * x));
    row.set("max_state_distance", f.max_state_distance);
    row.set("state_distance_over_ratio", f.max_state_distance / x);
    row.set("max_overlap_deficit", f.max_overlap_deficit);
    const double pf = estimate_period(f.times, f.excited_full);
    const double pe = estimate_period(f.times, f.excited_effective);
    if (std::isfinite(pf) && std::isfinite(pe)) {
      row.set("rabi_period_full", pf);
      row.set("rabi_period_effective", pe);
      row.set("rabi_period_rel_diff", std::abs(pf - pe) / pe);
    }
    frows.push(std::move(row));
    deltas.push_back(v.full_delta_over_g[k]);
    dist.push_back(f.max_state_distance);
    deficit.push_back(f.max_overlap_deficit);
  }
  if (deltas.size() >= 2) {
    fj.set("state_distance_exponent", -scaling_exponent(deltas, dist));
    fj.set("overlap_deficit_exponent", -scaling_exponent(deltas, deficit));
  }
  if (log != nullptr) *log << "validate: full Hamiltonian done (" << full.size() << " runs)\n";
  return j;
}

std::vector<std::string> run_subcommand(const std::string& name, const RunConfig& cfg, const CommandContext& ctx) {
  std::vector<std::string> written;
  auto emit = [&](const std::string& file, const std::string& content) {
    const std::string path = path_in(ctx, cfg, file);
    write_file(path, content);
    written.push_back(path);
  };
  if (ctx.log != nullptr) {
    std::vector<std::string> warnings = cfg.warnings;
    if (name != "derive" && name != "validate") {
      const ReservoirParams r = derive_reservoir(cfg.physical);
      note_regime(cfg.phi_dot(r), r.gamma_rate, warnings);
    }
    for (const auto& w : warnings) *ctx.log << "warning: " << w << "\n";
  }

  if (name == "derive") {
    emit("derive.json", derive_report(cfg).dump());
  } else if (name == "analytic") {
    emit("analytic.json", analytic_report(cfg).dump());
  } else if (name == "cycle") {
    if (cfg.output.trajectory) {
      CsvTable traj({});
      const Json report = cycle_report_impl(cfg, &traj);
      emit("cycle.json", report.dump());
      emit("cycle_trajectory.csv", traj.str());
    } else {
      emit("cycle.json", cycle_report(cfg).dump());
    }
  } else if (name == "ramsey") {
    const Json report = ramsey_report(cfg);
    FringeCurve curve;
    const CsvTable table = ramsey_fringe_table(cfg, ctx.jobs, cfg.output.svg ? &curve : nullptr);
    emit("ramsey.json", report.dump());
    emit("ramsey_fringe.csv", table.str());
    if (cfg.output.svg) emit("ramsey_fringe.svg", fringe_svg(curve, "Ramsey fringe: P_g against theta"));
  } else if (name == "sweep") {
    emit("sweep.csv", sweep_table(cfg, ctx.jobs).str());
  } else if (name == "validate") {
    emit("validate.json", validate_report(cfg, ctx.jobs, ctx.log).dump());
  } else {
    fail(ErrorKind::kConfig, "unknown subcommand '" + name + "'");
  }
  return written;
}

}  // namespace geophase::cli
