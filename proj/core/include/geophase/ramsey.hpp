#pragma once

// Ramsey readout of the geometric phase: prepare (psi_d + g)/sqrt(2), steer the
// reservoir around one loop, apply two instantaneous pulses, read populations.

#include <string_view>

#include "geophase/dynamics.hpp"
#include "geophase/numlin.hpp"

namespace geophase {

enum class RamseyMode { kAnalytic, kNumeric };

std::string_view to_string(RamseyMode mode);

struct RamseyOutcome {
  double P_g = 0.0;
  double P_e = 0.0;
  double P_f = 0.0;
  double V = 1.0;          // fringe visibility (numeric: 2 |rho_dg(T)|)
  double beta_used = 0.0;  // phase entering the fringe (numeric: arg rho_dg(T) - arg rho_dg(0))
  double alpha = 0.0;      // phase of the bright-state admixture (numeric: arg <psi_b|rho(T)|g>)
  RamseyMode mode = RamseyMode::kAnalytic;
};

/// Pure state (psi_d(theta, 0) + g) / sqrt(2).
DensityMatrix initial_superposition(double theta);

struct RamseyPulses {
  CMatrix U1;  // e -> cos e + sin f, f -> cos f - sin e (half-angle), g fixed
  CMatrix U2;  // g -> (g + e)/sqrt(2), e -> (e - g)/sqrt(2), f fixed
};

RamseyPulses build_pulses(double theta);

/// First-order predictions for every stage of the protocol, all in the {e, f, g} basis.
/// The mixtures are expansions, not validated density matrices.
struct RamseyStates {
  CMatrix after_cycle;     // V |phi><phi| + (3x/4) |g><g| - (x/4) |psi_d><psi_d|
  CVector phi;             // N [e^{i beta} psi_d + g + (s r / 2) e^{i alpha} psi_b]
  CMatrix after_pulses;    // the same mixture after U2 U1
  CVector phi_prime;       // U2 U1 phi
};

RamseyStates ramsey_states(double gamma_rate, double theta, double phi_dot);

/// P_{g,e} = [1 -+ V cos(beta)] / 2 with beta = (cos(theta) - 1) pi. Throws ErrorKind::kRegime if V <= 0.
RamseyOutcome ramsey_analytic(double gamma_rate, double theta, double phi_dot);

/// Full protocol with a lab-frame numeric cycle. The schedule must be cyclic and start at phi = 0.
RamseyOutcome run_ramsey_numeric(const ReservoirParams& r, const SteeringSchedule& schedule,
                                 const CycleOptions& options = {});

}  // namespace geophase
