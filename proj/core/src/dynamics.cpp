#include "geophase/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "geophase/error.hpp"

namespace geophase {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_phase(double x) {
  double y = std::remainder(x, kTwoPi);  // [-pi, pi]
  if (y <= -std::numbers::pi) y += kTwoPi;
  return y;
}

SteeringSchedule::SteeringSchedule(Fn theta, Fn theta_dot, Fn phi, Fn phi_dot, double duration)
    : theta_(std::move(theta)),
      theta_dot_(std::move(theta_dot)),
      phi_(std::move(phi)),
      phi_dot_(std::move(phi_dot)),
      duration_(duration) {
  require(theta_ && theta_dot_ && phi_ && phi_dot_, "SteeringSchedule: all four functions are required");
  require(duration_ > 0.0 && std::isfinite(duration_), "SteeringSchedule: duration must be positive and finite");
}

SteeringSchedule SteeringSchedule::constant_theta_linear_phi(double theta, double phi_dot, double phi0,
                                                             int cycles) {
  require(phi_dot != 0.0 && std::isfinite(phi_dot), "constant_theta_linear_phi: phi_dot must be non-zero");
  require(cycles >= 1, "constant_theta_linear_phi: cycles must be >= 1");
  require(theta >= 0.0 && theta <= std::numbers::pi, "constant_theta_linear_phi: theta must lie in [0, pi]");
  const double T = static_cast<double>(cycles) * kTwoPi / std::abs(phi_dot);
  return SteeringSchedule([theta](double) { return theta; }, [](double) { return 0.0; },
                          [phi0, phi_dot](double t) { return phi0 + phi_dot * t; },
                          [phi_dot](double) { return phi_dot; }, T);
}

SteeringSchedule SteeringSchedule::frozen(double theta, double phi, double duration) {
  require(theta >= 0.0 && theta <= std::numbers::pi, "frozen: theta must lie in [0, pi]");
  return SteeringSchedule([theta](double) { return theta; }, [](double) { return 0.0; },
                          [phi](double) { return phi; }, [](double) { return 0.0; }, duration);
}

bool SteeringSchedule::cyclic() const {
  const double dtheta = theta_(duration_) - theta_(0.0);
  const double dphi = phi_(duration_) - phi_(0.0);
  const double turns = dphi / kTwoPi;
  return std::abs(dtheta) <= 1e-12 && std::abs(turns - std::round(turns)) <= 1e-12 * std::max(1.0, std::abs(turns));
}

double SteeringSchedule::max_rate() const {
  double m = 0.0;
  constexpr int kProbes = 256;
  for (int i = 0; i <= kProbes; ++i) {
    const double t = duration_ * i / kProbes;
    m = std::max({m, std::abs(theta_dot_(t)), std::abs(phi_dot_(t))});
  }
  return m;
}

bool SteeringSchedule::derivatives_consistent(double rel_tol, int probes) const {
  const double h = 1e-6 * duration_;
  for (int i = 1; i <= probes; ++i) {
    const double t = duration_ * i / (probes + 1.0);
    const double fd_theta = (theta_(t + h) - theta_(t - h)) / (2.0 * h);
    const double fd_phi = (phi_(t + h) - phi_(t - h)) / (2.0 * h);
    const double scale_t = std::max(std::abs(theta_dot_(t)), 1.0 / duration_);
    const double scale_p = std::max(std::abs(phi_dot_(t)), 1.0 / duration_);
    if (std::abs(fd_theta - theta_dot_(t)) > rel_tol * scale_t) return false;
    if (std::abs(fd_phi - phi_dot_(t)) > rel_tol * scale_p) return false;
  }
  return true;
}

double default_fixed_step(const ReservoirParams& r, const SteeringSchedule& s) {
  return 1e-2 / std::max(r.gamma_rate, s.max_rate());
}

PhaseAndDamping extract_phase_and_damping(const DensityMatrix& rho0, const DensityMatrix& rhoT, double theta,
                                          double phi0) {
  require(rho0.dim() == 3 && rhoT.dim() == 3, "extract_phase_and_damping: 3-level states required");
  const CVector dark = dfs_basis(theta, phi0).dark.amplitudes();
  const CVector g{0.0, 0.0, 1.0};
  const cplx c0 = expectation(rho0.matrix(), dark, g);
  const cplx cT = expectation(rhoT.matrix(), dark, g);
  if (std::abs(c0) < Tolerances::kCoherenceFloor) {
    std::ostringstream os;
    os << "extract_phase_and_damping: initial coherence |<psi_d|rho0|g>| = " << std::abs(c0)
       << " is below " << Tolerances::kCoherenceFloor << "; phase undefined";
    fail(ErrorKind::kInvalidArgument, os.str());
  }
  return {wrap_phase(std::arg(cT) - std::arg(c0)), std::abs(cT) / std::abs(c0)};
}

CycleResult run_cycle(const ReservoirParams& r_base, const SteeringSchedule& schedule, const DensityMatrix& rho0,
                      const CycleOptions& options) {
  require(rho0.dim() == 3, "run_cycle: initial state must be 3x3");
  require(r_base.gamma_rate > 0.0, "run_cycle: Gamma must be > 0");
  const double theta0 = schedule.theta(0.0), phi0 = schedule.phi(0.0);
  if (options.extract_phase) {
    require(schedule.cyclic(), "run_cycle: phase extraction requires a cyclic schedule");
    const CVector dark = dfs_basis(theta0, phi0).dark.amplitudes();
    const double c0 = std::abs(expectation(rho0.matrix(), dark, CVector{0.0, 0.0, 1.0}));
    if (c0 < Tolerances::kCoherenceFloor) {
      std::ostringstream os;
      os << "run_cycle: initial coherence " << c0 << " below " << Tolerances::kCoherenceFloor << "; phase undefined";
      fail(ErrorKind::kInvalidArgument, os.str());
    }
  }

  IntegratorConfig cfg = options.integrator;
  if (cfg.method == IntegratorMethod::kRungeKutta4 && cfg.step == 0.0) cfg.step = default_fixed_step(r_base, schedule);

  const double T = schedule.duration();
  const double gamma_rate = r_base.gamma_rate;
  std::vector<Sample> trajectory;
  IntegrationStats stats;

  DensityGenerator gen;
  DensityMatrix start = rho0;
  if (options.frame == Frame::kLab) {
    gen = [&schedule, gamma_rate](double t, const CMatrix& rho) {
      return lindblad_rhs(rho, lindblad_op(gamma_rate, schedule.theta(t), schedule.phi(t)));
    };
  } else {
    const CMatrix U0 = frame_unitary(theta0, phi0);
    start = DensityMatrix(U0 * rho0.matrix() * U0.adjoint(), DensityTolerance{1e-10, 1e-10, 1e-9});
    gen = [&schedule, r_base](double t, const CMatrix& rho_p) {
      return rotating_rhs(rho_p, r_base.with_angles(schedule.theta(t), schedule.phi(t)), schedule.theta_dot(t),
                          schedule.phi_dot(t));
    };
  }

  auto to_lab = [&](double t, const CMatrix& m) {
    if (options.frame == Frame::kLab) return m;
    const CMatrix U = frame_unitary(schedule.theta(t), schedule.phi(t));
    return U.adjoint() * m * U;
  };

  std::function<void(double, const CMatrix&)> observer;
  if (options.keep_trajectory) {
    observer = [&](double t, const CMatrix& m) { trajectory.push_back({t, to_lab(t, m)}); };
  } else {
    observer = [](double, const CMatrix&) {};
  }

  const DensityMatrix end =
      integrate_sampled(gen, start, 0.0, T, std::max<std::size_t>(options.samples, 1), cfg, observer, &stats);
  DensityTolerance tol{Tolerances::kIntegratorHermitian, Tolerances::kIntegratorTraceDrift, Tolerances::kIntegratorPsd};
  CycleResult result{0.0, 0.0, 0.0, DensityMatrix(to_lab(T, end.matrix()), tol), std::move(trajectory), stats};

  using level::kG;
  result.leak_to_g = (result.final_state(kG, kG) - rho0(kG, kG)).real();
  if (options.extract_phase) {
    const PhaseAndDamping pd = extract_phase_and_damping(rho0, result.final_state, theta0, phi0);
    result.beta_num = pd.beta_num;
    result.damping = pd.damping;
  }
  return result;
}

}  // namespace geophase
