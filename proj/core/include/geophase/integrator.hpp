#pragma once

// Explicit Runge-Kutta integration of complex linear ODE systems
// (master equations on vectorized density matrices, Schroedinger equations).

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "geophase/numlin.hpp"

namespace geophase {

enum class IntegratorMethod {
  kRungeKutta4,       // classic fixed step
  kDormandPrince45,   // adaptive embedded 5(4) pair
};

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::kDormandPrince45;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  /// Fixed step for kRungeKutta4. Zero means "use the caller's default".
  double step = 0.0;
  /// Upper bound on adaptive step size; infinity means unbounded.
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 200'000'000;

  void validate() const;

  static IntegratorConfig fixed(double step);
  static IntegratorConfig adaptive(double abs_tol, double rel_tol);
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

/// dy/dt = f(t, y). Must write every entry of `dydt`.
using OdeRhs = std::function<void(double t, std::span<const cplx> y, std::span<cplx> dydt)>;

/// Stateful stepper; successive `advance` calls reuse the last accepted step size.
class OdeIntegrator {
 public:
  OdeIntegrator(OdeRhs rhs, std::size_t dim, IntegratorConfig cfg);

  /// Integrates y from t0 to t1 in place. Throws ErrorKind::kNumeric when the step
  /// budget is exhausted or the step size underflows.
  void advance(std::span<cplx> y, double t0, double t1);

  const IntegrationStats& stats() const noexcept { return stats_; }
  const IntegratorConfig& config() const noexcept { return cfg_; }

 private:
  void advance_rk4(std::span<cplx> y, double t0, double t1);
  void advance_dp45(std::span<cplx> y, double t0, double t1);
  double initial_step(std::span<const cplx> y, double t0, double t1);
  void eval(double t, std::span<const cplx> y, std::span<cplx> dy);
  void charge_step();

  OdeRhs rhs_;
  std::size_t dim_;
  IntegratorConfig cfg_;
  IntegrationStats stats_;
  double h_ = 0.0;       // last accepted adaptive step
  bool fsal_valid_ = false;
  double fsal_t_ = 0.0;
  std::vector<std::vector<cplx>> k_;
  std::vector<cplx> tmp_, y5_;
};

/// Right-hand side for density matrices.
using DensityGenerator = std::function<CMatrix(double t, const CMatrix& rho)>;

/// Invariant drift of a trajectory state; see Tolerances::kIntegrator*.
struct StateCheck {
  double trace_drift = 0.0;
  double hermitian_defect = 0.0;
  double min_eigenvalue = 0.0;
};

StateCheck check_state(const CMatrix& rho);

/// Throws ErrorKind::kNumeric listing drift magnitudes when `rho` breaks the
/// integrator tolerances. No renormalization is ever applied.
void assert_state(const CMatrix& rho, double t);

/// Integrates rho from t0 to t1 and re-validates the result.
DensityMatrix integrate(const DensityGenerator& rhs, const DensityMatrix& rho0, double t0, double t1,
                        const IntegratorConfig& cfg);

struct Sample {
  double t;
  CMatrix rho;
};

/// As `integrate`, calling `observer` at n_samples + 1 evenly spaced times
/// (t0 included) after validating each sampled state.
DensityMatrix integrate_sampled(const DensityGenerator& rhs, const DensityMatrix& rho0, double t0,
                                double t1, std::size_t n_samples, const IntegratorConfig& cfg,
                                const std::function<void(double, const CMatrix&)>& observer,
                                IntegrationStats* stats = nullptr);

/// As `integrate_sampled` for a right-hand side acting in place on the row-major vectorized matrix.
DensityMatrix integrate_vectorized(const OdeRhs& rhs, const DensityMatrix& rho0, double t0, double t1,
                                   std::size_t n_samples, const IntegratorConfig& cfg,
                                   const std::function<void(double, const CMatrix&)>& observer,
                                   IntegrationStats* stats = nullptr);

}  // namespace geophase
