#pragma once

// Operators of the engineered-reservoir model: Raman rates, the collapse
// operator L(theta, phi), its dark/bright pair, the rotating frame U and its
// generator, master-equation right-hand sides and the atom-cavity Hamiltonian.

#include <cstddef>
#include <string>
#include <vector>

#include "geophase/numlin.hpp"

namespace geophase {

/// Ground-level ordering {|e>, |f>, |g>}; |r> (full model only) is index 3.
namespace level {
inline constexpr std::size_t kE = 0;
inline constexpr std::size_t kF = 1;
inline constexpr std::size_t kG = 2;
inline constexpr std::size_t kR = 3;
}  // namespace level

/// Lab-level rates, all angular frequencies (rad per time unit).
struct PhysicalParams {
  double g = 0.0;       // atom-cavity coupling
  double delta = 0.0;   // detuning of |r>
  double omega1 = 0.0;  // Rabi frequency on |e> -> |r>
  double omega2 = 0.0;  // Rabi frequency on |f> -> |r>
  double phi1 = 0.0;    // laser phases (rad)
  double phi2 = 0.0;
  double kappa = 0.0;   // cavity decay rate
  double gamma = 0.0;   // atomic spontaneous emission rate

  /// Throws ErrorKind::kInvalidArgument naming the offending field.
  void validate() const;

  /// Omega1 = omega sin(theta/2), Omega2 = omega cos(theta/2).
  static PhysicalParams from_total_rabi(double g, double delta, double omega_total, double theta,
                                        double kappa, double gamma, double phi1 = 0.0,
                                        double phi2 = 0.0);

  double omega_total() const;
};

/// Ratios behind the two adiabatic eliminations.
struct HierarchyReport {
  double delta_over_omega = 0.0;   // Delta / max(Omega1, Omega2)
  double delta_over_g = 0.0;
  double kappa_over_stark = 0.0;   // kappa / (g^2 / Delta)
  double kappa_over_lambda = 0.0;  // kappa / max(lambda1, lambda2)

  /// Human-readable warnings for Delta/Omega < 20 or kappa/lambda < 10.
  std::vector<std::string> warnings() const;
};

HierarchyReport hierarchy(const PhysicalParams& p);

/// Parameters of the engineered dissipator.
struct ReservoirParams {
  double gamma_rate = 0.0;  // Gamma
  double theta = 0.0;       // mixing angle in [0, pi]
  double phi = 0.0;         // relative phase, never wrapped internally
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda = 0.0;

  /// Reservoir given directly by (Gamma, theta, phi), e.g. in units where Gamma = 1.
  static ReservoirParams direct(double gamma_rate, double theta, double phi);

  ReservoirParams with_angles(double theta_new, double phi_new) const;
};

/// lambda_j = Omega_j g / Delta, Gamma = lambda^2 / kappa, sin(theta/2) = lambda1 / lambda,
/// phi = phi1 - phi2.
ReservoirParams derive_reservoir(const PhysicalParams& p);

/// L = sqrt(Gamma) (sin(theta/2) |g><e| + e^{-i phi} cos(theta/2) |g><f|).
CMatrix lindblad_op(const ReservoirParams& r);
CMatrix lindblad_op(double gamma_rate, double theta, double phi);

struct DfsBasis {
  PureState dark;
  PureState bright;
};

/// dark = (cos(theta/2), -e^{i phi} sin(theta/2), 0), bright = (e^{-i phi} sin(theta/2), cos(theta/2), 0).
DfsBasis dfs_basis(double theta, double phi);

/// Frame change U(theta, phi). Depends on phi/2, so it is 4 pi periodic in phi.
CMatrix frame_unitary(double theta, double phi);

/// A = dU/dt U^dagger for a trajectory with the given parametric rates.
CMatrix frame_generator(double theta, double phi, double theta_dot, double phi_dot);

/// 2 L rho L^dagger - rho L^dagger L - L^dagger L rho.
CMatrix lindblad_rhs(const CMatrix& rho, const CMatrix& L);
CMatrix lindblad_rhs(const DensityMatrix& rho, const CMatrix& L);

/// Rotating-frame right-hand side for rho' = U rho U^dagger:
/// 2 L' rho' L'^dagger - {L'^dagger L', rho'} + A rho' + rho' A^dagger with L' = U L U^dagger.
CMatrix rotating_rhs(const CMatrix& rho_p, const ReservoirParams& r, double theta_dot, double phi_dot);
CMatrix rotating_rhs(const DensityMatrix& rho_p, const ReservoirParams& r, double theta_dot,
                     double phi_dot);

/// Index of |atom, n> in the atom (x) Fock product basis.
inline std::size_t product_index(std::size_t atom, std::size_t photons, std::size_t n_max) {
  return atom * (n_max + 1) + photons;
}

/// Effective atom-cavity Hamiltonian
///   H_e = (g^2/Delta) a^dagger a |g><g|
///       + [lambda1 e^{-i phi1} a |e><g| + lambda2 e^{-i phi2} a |f><g|] + H.c.
/// on {e, f, g} (x) {0..n_max}.
CMatrix hamiltonian_effective(const PhysicalParams& p, std::size_t n_max);

}  // namespace geophase
