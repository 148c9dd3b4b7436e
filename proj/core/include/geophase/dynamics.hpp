#pragma once

// Steering schedules, full-cycle integration of the 3-level master equation
// in the lab or rotating frame, and extraction of the acquired phase.

#include <functional>
#include <optional>
#include <vector>

#include "geophase/integrator.hpp"
#include "geophase/model.hpp"
#include "geophase/numlin.hpp"

namespace geophase {

/// Time-dependent reservoir angles (theta(t), phi(t)) with analytic derivatives.
class SteeringSchedule {
 public:
  using Fn = std::function<double(double)>;

  SteeringSchedule(Fn theta, Fn theta_dot, Fn phi, Fn phi_dot, double duration);

  /// theta fixed, phi = phi0 + phi_dot t, duration = cycles * 2 pi / phi_dot.
  static SteeringSchedule constant_theta_linear_phi(double theta, double phi_dot, double phi0 = 0.0,
                                                    int cycles = 1);
  /// Reservoir held still for `duration`.
  static SteeringSchedule frozen(double theta, double phi, double duration);

  double theta(double t) const { return theta_(t); }
  double theta_dot(double t) const { return theta_dot_(t); }
  double phi(double t) const { return phi_(t); }
  double phi_dot(double t) const { return phi_dot_(t); }
  double duration() const noexcept { return duration_; }

  /// theta returns to its start and phi advances by a multiple of 2 pi.
  bool cyclic() const;

  /// Largest |theta_dot| or |phi_dot| over 257 probe points.
  double max_rate() const;

  /// Central finite differences agree with the analytic derivatives at interior probes.
  bool derivatives_consistent(double rel_tol = 1e-6, int probes = 16) const;

 private:
  Fn theta_, theta_dot_, phi_, phi_dot_;
  double duration_;
};

enum class Frame { kLab, kRotating };

struct CycleResult {
  double beta_num = 0.0;   // (-pi, pi]
  double damping = 0.0;    // |rho_dg(T)| / |rho_dg(0)|
  double leak_to_g = 0.0;  // rho_gg(T) - rho_gg(0)
  DensityMatrix final_state;
  std::vector<Sample> trajectory;  // lab-frame states, filled when requested
  IntegrationStats stats;
};

struct CycleOptions {
  Frame frame = Frame::kLab;
  IntegratorConfig integrator{};
  /// Number of trajectory intervals; states are checked at every sample.
  std::size_t samples = 512;
  bool keep_trajectory = false;
  /// Skip phase extraction (allows non-cyclic schedules / zero coherence).
  bool extract_phase = true;
};

/// Default fixed RK4 step: 1e-2 / max(Gamma, |phi_dot|, |theta_dot|).
double default_fixed_step(const ReservoirParams& r, const SteeringSchedule& s);

/// Integrates one steering run of the 3-level master equation. Gamma comes from
/// `r_base`; theta and phi follow the schedule. The returned final state is in the lab frame.
CycleResult run_cycle(const ReservoirParams& r_base, const SteeringSchedule& schedule,
                      const DensityMatrix& rho0, const CycleOptions& options = {});

struct PhaseAndDamping {
  double beta_num = 0.0;
  double damping = 0.0;
};

/// Phase and magnitude change of <psi_d(theta, phi0)| rho |g>.
PhaseAndDamping extract_phase_and_damping(const DensityMatrix& rho0, const DensityMatrix& rhoT, double theta,
                                          double phi0);

/// Wraps an angle to (-pi, pi].
double wrap_phase(double x);

}  // namespace geophase
