#include "geophase/ramsey.hpp"

#include <cmath>
#include <numbers>

#include "geophase/analytic.hpp"
#include "geophase/error.hpp"

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

std::string_view to_string(RamseyMode mode) { return mode == RamseyMode::kAnalytic ? "analytic" : "numeric"; }

DensityMatrix initial_superposition(double theta) {
  const CVector d = dfs_basis(theta, 0.0).dark.amplitudes();
  CVector psi(3);
  for (std::size_t i = 0; i < 3; ++i) psi[i] = kInvSqrt2 * d[i];
  psi[level::kG] += kInvSqrt2;
  return DensityMatrix::pure(PureState::normalized(std::move(psi)));
}

RamseyPulses build_pulses(double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  // Columns are the images of e, f, g.
  CMatrix U1{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}};
  CMatrix U2{{kInvSqrt2, 0.0, kInvSqrt2}, {0.0, 1.0, 0.0}, {-kInvSqrt2, 0.0, kInvSqrt2}};
  return {std::move(U1), std::move(U2)};
}

RamseyStates ramsey_states(double gamma_rate, double theta, double phi_dot) {
  require(gamma_rate > 0.0, "ramsey_states: Gamma must be > 0");
  const double s = std::sin(theta);
  const double r = phi_dot / gamma_rate;
  const double x = kPi * s * s * std::abs(r);
  const double V = 1.0 - 0.5 * x;
  const double beta = loop_phase(theta, phi_dot);
  const double alpha = (std::cos(theta) + 1.5) * kPi;
  const double leak = 0.5 * s * r;
  const double norm = 1.0 / std::sqrt(2.0 + leak * leak);

  const DfsBasis basis = dfs_basis(theta, 0.0);
  const CVector& d = basis.dark.amplitudes();
  const CVector& b = basis.bright.amplitudes();
  const CVector g{0.0, 0.0, 1.0};

  RamseyStates out;
  out.phi.assign(3, 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    out.phi[i] = norm * (std::exp(kI * beta) * d[i] + g[i] + leak * std::exp(kI * alpha) * b[i]);
  out.after_cycle = V * outer(out.phi, out.phi) + (0.75 * x) * outer(g, g) - (0.25 * x) * outer(d, d);

  const RamseyPulses p = build_pulses(theta);
  const CMatrix W = p.U2 * p.U1;
  out.phi_prime = W * out.phi;
  out.after_pulses = W * out.after_cycle * W.adjoint();
  return out;
}

RamseyOutcome ramsey_analytic(double gamma_rate, double theta, double phi_dot) {
  RamseyOutcome o;
  o.mode = RamseyMode::kAnalytic;
  o.V = visibility(theta, phi_dot, gamma_rate);
  o.beta_used = loop_phase(theta, phi_dot);
  o.alpha = (std::cos(theta) + 1.5) * kPi;
  const double fringe = o.V * std::cos(o.beta_used);
  o.P_g = 0.5 * (1.0 - fringe);
  o.P_e = 0.5 * (1.0 + fringe);
  o.P_f = 1.0 - o.P_g - o.P_e;
  return o;
}

RamseyOutcome run_ramsey_numeric(const ReservoirParams& r, const SteeringSchedule& schedule,
                                 const CycleOptions& options) {
  require(std::abs(schedule.phi(0.0)) <= 1e-12, "run_ramsey_numeric: schedule must start at phi = 0");
  const double theta = schedule.theta(0.0);
  const DensityMatrix rho0 = initial_superposition(theta);
  CycleOptions opts = options;
  opts.extract_phase = true;
  const CycleResult cyc = run_cycle(r, schedule, rho0, opts);

  const CMatrix& rhoT = cyc.final_state.matrix();
  const CycleElements el = dfs_elements(rhoT, theta, 0.0);
  const RamseyPulses p = build_pulses(theta);
  const CMatrix W = p.U2 * p.U1;
  const CMatrix out = W * rhoT * W.adjoint();

  RamseyOutcome o;
  o.mode = RamseyMode::kNumeric;
  o.P_e = out(level::kE, level::kE).real();
  o.P_f = out(level::kF, level::kF).real();
  o.P_g = out(level::kG, level::kG).real();
  o.V = 2.0 * std::abs(el.ag);
  o.beta_used = cyc.beta_num;
  o.alpha = std::abs(el.bg) > 0.0 ? std::arg(el.bg) : 0.0;
  return o;
}

}  // namespace geophase
