#pragma once

// Closed-form results for a cyclic steering run at constant theta and phi_dot:
// exact coherence evolution, first-order cycle maps, the geometric phase,
// fringe visibility and the spontaneous-emission penalty.

#include "geophase/model.hpp"
#include "geophase/numlin.hpp"

namespace geophase {

/// phi_dot / Gamma above which the first-order maps are flagged as out of regime.
inline constexpr double kFirstOrderRegimeLimit = 0.3;

/// Eigenvalues of the 2x2 coherence system (rho'_eg, rho'_fg).
struct EigenPair {
  cplx lambda_plus;   // slow mode, -> 0 as phi_dot -> 0
  cplx lambda_minus;  // fast mode, -> -Gamma
  bool confluent = false;  // discriminant vanishes, lambda_plus == lambda_minus
};

/// lambda_{+-} = (-Gamma +- sqrt(Gamma^2 + 2 i Gamma cos(theta) phi_dot - phi_dot^2)) / 2, principal root.
EigenPair lambdas(double gamma_rate, double theta, double phi_dot);

struct CoherencePair {
  cplx rho_eg;
  cplx rho_fg;
};

/// Exact rotating-frame coherences at time t for constant theta, phi_dot and rho'_fg(0) = 0.
CoherencePair coherence_exact(double t, cplx rho_eg0, double gamma_rate, double theta, double phi_dot);

/// Six independent elements of a 3x3 density matrix in a basis {a, b, g}.
/// In the rotating frame (a, b) = (e', f'); in the original frame (a, b) = (psi_d, psi_b).
/// First-order tables are not guaranteed to be positive, so they are not DensityMatrix values.
struct CycleElements {
  cplx aa, bb, gg, ab, ag, bg;
  /// Set when phi_dot / Gamma exceeds kFirstOrderRegimeLimit.
  bool beyond_regime = false;

  cplx trace() const { return aa + bb + gg; }
  /// Hermitian 3x3 matrix with the elements placed in (a, b, g) order.
  CMatrix to_matrix() const;
  /// Elements read directly from a matrix in (a, b, g) order.
  static CycleElements from_matrix(const CMatrix& m);
};

/// Elements <psi_j| rho |psi_k> of a lab-frame state in the {psi_d(theta, phi), psi_b(theta, phi), g} basis.
CycleElements dfs_elements(const CMatrix& rho, double theta, double phi);

/// Rotating-frame elements after one cycle T = 2 pi / |phi_dot|, to first order in phi_dot / Gamma.
/// Population left in f' is moved to g so the map preserves the trace exactly.
CycleElements cycle_first_order(const CycleElements& rot0, double gamma_rate, double theta, double phi_dot);

/// Original-frame (dark, bright, g) elements after one cycle, to first order in phi_dot / Gamma.
CycleElements original_frame_cycle(const CycleElements& dfs0, double gamma_rate, double theta, double phi_dot);

struct BerryPhase {
  double beta = 0.0;         // (cos(theta) - 1) pi
  double solid_angle = 0.0;  // 2 pi (1 - cos(theta))
};

BerryPhase berry_phase_and_solid_angle(double theta);

/// Phase acquired by rho_dg over one loop: beta for phi_dot > 0, -beta for a reversed loop,
/// 0 when the reservoir is not moved.
double loop_phase(double theta, double phi_dot);

/// Fringe visibility V = 1 - pi sin^2(theta) |phi_dot| / (2 Gamma). Throws ErrorKind::kRegime if V <= 0.
double visibility(double theta, double phi_dot, double gamma_rate);

struct PenaltyReport {
  double P_b = 0.0;      // sin^2(theta) phi_dot^2 / (8 Gamma^2)
  double gamma_e = 0.0;  // gamma P_b Omega^2 / Delta^2
  double V_prime = 1.0;  // exp(-gamma_e T)
  double T = 0.0;        // 2 pi / |phi_dot|
};

/// Spontaneous-emission estimate through the bright state; Omega = sqrt(Omega1^2 + Omega2^2).
PenaltyReport spontaneous_penalty(const PhysicalParams& p, double theta, double phi_dot);

}  // namespace geophase
