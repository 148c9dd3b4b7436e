#pragma once

// Higher-fidelity models behind the effective dissipator: the atom (x) cavity
// master equation with the effective Hamiltonian and cavity loss, and the
// time-dependent Hamiltonian with the excited level |r> kept explicitly.

#include <cstddef>
#include <vector>

#include "geophase/dynamics.hpp"
#include "geophase/integrator.hpp"
#include "geophase/model.hpp"
#include "geophase/numlin.hpp"

namespace geophase {

struct FockConfig {
  std::size_t n_max = 3;     // photon-number truncation
  std::size_t atom_dim = 3;  // 3: {e, f, g}; 4: {e, f, g, r}

  std::size_t fock_dim() const noexcept { return n_max + 1; }
  std::size_t dim() const noexcept { return atom_dim * fock_dim(); }
  void validate() const;
};

/// Right-hand side of the atom (x) cavity master equation
///   -i [H_e(t), rho] + kappa (2 a rho a^dagger - {a^dagger a, rho}),
/// where the schedule drives theta(t) (lambda1 = lambda sin(theta/2), lambda2 = lambda cos(theta/2))
/// and phi2(t) = phi1 - phi(t). lambda = sqrt(lambda1^2 + lambda2^2) is taken from the params.
class CompositeModel {
 public:
  CompositeModel(const PhysicalParams& p, SteeringSchedule schedule, FockConfig fock);

  const FockConfig& fock() const noexcept { return fock_; }
  std::size_t dim() const noexcept { return fock_.dim(); }

  /// In-place form on a row-major vectorized density matrix.
  void rhs(double t, std::span<const cplx> rho, std::span<cplx> out) const;

  CMatrix operator()(double t, const CMatrix& rho) const;

  /// H_e at time t on the composite space.
  CMatrix hamiltonian(double t) const;

 private:
  struct Entry {
    std::size_t row, col;
    cplx value;
  };
  void fill_hamiltonian(double t, std::vector<Entry>& h) const;

  PhysicalParams p_;
  SteeringSchedule schedule_;
  FockConfig fock_;
  double lambda_;
  double stark_;
};

CompositeModel build_composite_generator(const PhysicalParams& p, const SteeringSchedule& schedule,
                                         const FockConfig& fock = {});

/// rho_atom (x) |0><0|.
DensityMatrix with_cavity_vacuum(const DensityMatrix& atom, std::size_t n_max);

/// Mean photon number tr(rho a^dagger a) of a composite state.
double mean_photon_number(const CMatrix& rho, std::size_t atom_dim, std::size_t n_max);

struct CompositeTrajectory {
  std::vector<double> times;
  std::vector<CMatrix> reduced;        // atom states
  std::vector<double> photon_number;
  IntegrationStats stats;
};

/// Integrates the composite model from atom0 (x) vacuum over [0, duration] with `samples` intervals.
CompositeTrajectory run_composite(const CompositeModel& model, const DensityMatrix& atom0, double duration,
                                  std::size_t samples, const IntegratorConfig& cfg);

struct EliminationReport {
  double max_trace_distance = 0.0;  // reduced composite vs 3-level master equation, over samples
  double fitted_Gamma = 0.0;        // from bright-state decay with the reservoir frozen
  double predicted_Gamma = 0.0;     // lambda^2 / kappa
  double ratio_kappa_lambda = 0.0;
  double max_photon_number = 0.0;
  double truncation_change = 0.0;   // metric change when n_max -> n_max + 1
};

struct EliminationOptions {
  IntegratorConfig integrator{};
  std::size_t samples = 256;
  bool check_truncation = true;
  /// Threshold on truncation_change beyond which validation fails.
  double truncation_tol = 1e-6;
};

/// Runs the composite and 3-level models on the same schedule from atom0 and compares them.
/// Throws ErrorKind::kNumeric if the truncation re-check at n_max + 1 moves the metrics by >= truncation_tol.
EliminationReport validate_elimination(const PhysicalParams& p, const SteeringSchedule& schedule,
                                       const FockConfig& fock, const DensityMatrix& atom0,
                                       const EliminationOptions& options = {});

/// As above, starting from default_probe_state(theta(0), phi(0)).
EliminationReport validate_elimination(const PhysicalParams& p, const SteeringSchedule& schedule,
                                       const FockConfig& fock, const EliminationOptions& options = {});

/// (2 psi_d + psi_b + 3 g) / sqrt(14): populates the dark state, the bright state and |g>,
/// so every coherence the cavity elimination touches is exercised.
DensityMatrix default_probe_state(double theta, double phi);

/// Least-squares slope of log(y) against log(x): the exponent p in y ~ x^p.
double scaling_exponent(const std::vector<double>& x, const std::vector<double>& y);

/// Gamma from a least-squares fit of log P_b(t) = c - 2 Gamma t for the bright state
/// psi_b(theta, phi) (x) |0> in the composite model with the reservoir frozen, t in [0, 1/Gamma_pred].
double fit_bright_decay(const PhysicalParams& p, double theta, double phi, const FockConfig& fock,
                        const IntegratorConfig& cfg = {}, std::size_t samples = 200);

/// Time-dependent interaction-picture Hamiltonian with |r> explicit, on {e, f, g, r} (x) Fock:
///   g a e^{i Delta t} |r><g| + Omega_j [e^{i(Delta t + phi_j)} + e^{i(-Delta t + phi_j)}] |r><j| + H.c.
CMatrix hamiltonian_full(double t, const PhysicalParams& p, const FockConfig& fock);

struct FullModelReport {
  double max_r_population = 0.0;
  double max_overlap_deficit = 0.0;  // 1 - |<psi_eff|psi_full>|
  double max_state_distance = 0.0;   // sqrt(1 - |<psi_eff|psi_full>|^2), the pure-state trace distance
  double max_norm_drift = 0.0;
  std::vector<double> times;
  std::vector<double> excited_full;       // population of |e> (all photon numbers)
  std::vector<double> excited_effective;
  IntegrationStats stats;
};

/// Integrates the Schroedinger equation of hamiltonian_full from psi0 (3-level (x) Fock amplitudes,
/// embedded with zero |r> amplitude) and compares with the effective evolution. Elimination of |r>
/// yields the effective Hamiltonian with the opposite overall sign, so the reference is exp(+i H_e t) psi0.
FullModelReport validate_full_hamiltonian(const PhysicalParams& p, const FockConfig& fock, const CVector& psi0,
                                          double horizon, std::size_t samples, const IntegratorConfig& cfg = {});

/// Mean spacing of the major peaks of an oscillating trace, using hysteresis thresholds at
/// 25% and 75% of its range. Returns NaN when fewer than two peaks are found.
double estimate_period(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace geophase
