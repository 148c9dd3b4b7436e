#include "geophase/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geophase/error.hpp"

namespace geophase {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920, kE5 = -17253.0 / 339200,
                 kE6 = 22.0 / 525, kE7 = -1.0 / 40;

double scaled_rms(std::span<const cplx> v, std::span<const cplx> y0, std::span<const cplx> y1,
                  double atol, double rtol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    acc += std::norm(v[i]) / (sc * sc);
  }
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

void IntegratorConfig::validate() const {
  if (method == IntegratorMethod::kDormandPrince45) {
    require(abs_tol > 0.0 && rel_tol > 0.0, "IntegratorConfig: tolerances must be > 0");
  } else {
    require(step >= 0.0 && std::isfinite(step), "IntegratorConfig: fixed step must be finite and >= 0");
  }
  require(max_step > 0.0, "IntegratorConfig: max_step must be > 0");
  require(max_steps > 0, "IntegratorConfig: max_steps must be > 0");
}

IntegratorConfig IntegratorConfig::fixed(double step) {
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::kRungeKutta4;
  cfg.step = step;
  return cfg;
}

IntegratorConfig IntegratorConfig::adaptive(double abs_tol, double rel_tol) {
  IntegratorConfig cfg;
  cfg.abs_tol = abs_tol;
  cfg.rel_tol = rel_tol;
  return cfg;
}

OdeIntegrator::OdeIntegrator(OdeRhs rhs, std::size_t dim, IntegratorConfig cfg)
    : rhs_(std::move(rhs)), dim_(dim), cfg_(cfg), k_(7, std::vector<cplx>(dim)), tmp_(dim), y5_(dim) {
  cfg_.validate();
  require(dim_ > 0, "OdeIntegrator: dimension must be positive");
}

void OdeIntegrator::eval(double t, std::span<const cplx> y, std::span<cplx> dy) {
  rhs_(t, y, dy);
  ++stats_.rhs_evals;
}

void OdeIntegrator::charge_step() {
  if (stats_.accepted + stats_.rejected >= cfg_.max_steps) {
    std::ostringstream os;
    os << "integrator: max_steps (" << cfg_.max_steps << ") exceeded";
    fail(ErrorKind::kNumeric, os.str());
  }
}

void OdeIntegrator::advance(std::span<cplx> y, double t0, double t1) {
  require(y.size() == dim_, "OdeIntegrator::advance: state dimension mismatch");
  require(t1 >= t0, "OdeIntegrator::advance: t1 must not precede t0");
  if (t1 == t0) return;
  if (cfg_.method == IntegratorMethod::kRungeKutta4)
    advance_rk4(y, t0, t1);
  else
    advance_dp45(y, t0, t1);
}

void OdeIntegrator::advance_rk4(std::span<cplx> y, double t0, double t1) {
  require(cfg_.step > 0.0, "OdeIntegrator: fixed-step method needs step > 0");
  const auto n_steps = static_cast<std::size_t>(std::ceil((t1 - t0) / cfg_.step - 1e-9));
  const std::size_t n = std::max<std::size_t>(n_steps, 1);
  const double h = (t1 - t0) / static_cast<double>(n);
  auto& k1 = k_[0];
  auto& k2 = k_[1];
  auto& k3 = k_[2];
  auto& k4 = k_[3];
  for (std::size_t s = 0; s < n; ++s) {
    charge_step();
    const double t = t0 + static_cast<double>(s) * h;
    eval(t, y, k1);
    for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = y[i] + 0.5 * h * k1[i];
    eval(t + 0.5 * h, tmp_, k2);
    for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = y[i] + 0.5 * h * k2[i];
    eval(t + 0.5 * h, tmp_, k3);
    for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = y[i] + h * k3[i];
    eval(t + h, tmp_, k4);
    for (std::size_t i = 0; i < dim_; ++i) y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    ++stats_.accepted;
  }
}

double OdeIntegrator::initial_step(std::span<const cplx> y, double t0, double t1) {
  // Hairer, Norsett & Wanner starting-step heuristic.
  const auto& f0 = k_[0];
  std::vector<cplx> zero(dim_);
  const double d0 = scaled_rms(y, y, y, cfg_.abs_tol, cfg_.rel_tol);
  const double d1 = scaled_rms(f0, y, y, cfg_.abs_tol, cfg_.rel_tol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t1 - t0);
  for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = y[i] + h0 * f0[i];
  auto& f1 = k_[1];
  eval(t0 + h0, tmp_, f1);
  for (std::size_t i = 0; i < dim_; ++i) zero[i] = f1[i] - f0[i];
  const double d2 = scaled_rms(zero, y, y, cfg_.abs_tol, cfg_.rel_tol) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, cfg_.max_step});
}

void OdeIntegrator::advance_dp45(std::span<cplx> y, double t0, double t1) {
  auto& k1 = k_[0];
  auto& k2 = k_[1];
  auto& k3 = k_[2];
  auto& k4 = k_[3];
  auto& k5 = k_[4];
  auto& k6 = k_[5];
  auto& k7 = k_[6];

  double t = t0;
  eval(t, y, k1);
  if (h_ <= 0.0) h_ = initial_step(y, t0, t1);

  bool last_rejected = false;
  while (t < t1) {
    charge_step();
    double h = std::min(h_, cfg_.max_step);
    bool clipped = false;
    if (t + h >= t1) {
      h = t1 - t;
      clipped = true;
    }
    if (h <= std::abs(t) * 1e-15) {
      std::ostringstream os;
      os << "integrator: step size underflow at t = " << t;
      fail(ErrorKind::kNumeric, os.str());
    }

    for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = y[i] + h * kA21 * k1[i];
    eval(t + kC2 * h, tmp_, k2);
    for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    eval(t + kC3 * h, tmp_, k3);
    for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    eval(t + kC4 * h, tmp_, k4);
    for (std::size_t i = 0; i < dim_; ++i)
      tmp_[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    eval(t + kC5 * h, tmp_, k5);
    for (std::size_t i = 0; i < dim_; ++i)
      tmp_[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] + kA65 * k5[i]);
    eval(t + h, tmp_, k6);
    for (std::size_t i = 0; i < dim_; ++i)
      y5_[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB5 * k5[i] + kB6 * k6[i]);
    eval(t + h, y5_, k7);
    for (std::size_t i = 0; i < dim_; ++i)
      tmp_[i] = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] + kE6 * k6[i] + kE7 * k7[i]);

    const double err = scaled_rms(tmp_, y, y5_, cfg_.abs_tol, cfg_.rel_tol);
    if (!std::isfinite(err)) fail(ErrorKind::kNumeric, "integrator: non-finite error estimate");

    double factor = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
    if (err <= 1.0) {
      t = clipped ? t1 : t + h;
      std::copy(y5_.begin(), y5_.end(), y.begin());
      std::swap(k1, k7);
      ++stats_.accepted;
      factor = std::clamp(factor, 0.2, last_rejected ? 1.0 : 5.0);
      // A clipped final step says nothing about the natural step size.
      if (!clipped || factor < 1.0) h_ = std::min(h * factor, cfg_.max_step);
      last_rejected = false;
    } else {
      ++stats_.rejected;
      h_ = h * std::clamp(factor, 0.2, 1.0);
      last_rejected = true;
    }
  }
}

// ---------------------------------------------------------------------------

StateCheck check_state(const CMatrix& rho) {
  StateCheck c;
  c.trace_drift = std::abs(rho.trace() - 1.0);
  c.hermitian_defect = hermiticity_defect(rho);
  CMatrix h = (rho + rho.adjoint()) * 0.5;
  c.min_eigenvalue = hermitian_eigenvalues(h).front();
  return c;
}

void assert_state(const CMatrix& rho, double t) {
  if (!rho.all_finite()) {
    std::ostringstream os;
    os << "integrator: non-finite state at t = " << t;
    fail(ErrorKind::kNumeric, os.str());
  }
  const StateCheck c = check_state(rho);
  if (c.trace_drift > Tolerances::kIntegratorTraceDrift || c.hermitian_defect > Tolerances::kIntegratorHermitian ||
      c.min_eigenvalue < -Tolerances::kIntegratorPsd) {
    std::ostringstream os;
    os << "integrator: state invariants violated at t = " << t << " (trace drift " << c.trace_drift
       << ", hermiticity defect " << c.hermitian_defect << ", min eigenvalue " << c.min_eigenvalue << ")";
    fail(ErrorKind::kNumeric, os.str());
  }
}

namespace {

OdeRhs wrap_generator(const DensityGenerator& gen, std::size_t dim) {
  return [&gen, dim, scratch = CMatrix(dim)](double t, std::span<const cplx> y, std::span<cplx> dy) mutable {
    std::copy(y.begin(), y.end(), scratch.data().begin());
    const CMatrix out = gen(t, scratch);
    std::copy(out.data().begin(), out.data().end(), dy.begin());
  };
}

DensityTolerance integrator_tolerance() {
  DensityTolerance tol;
  tol.hermitian_rel = Tolerances::kIntegratorHermitian;
  tol.trace = Tolerances::kIntegratorTraceDrift;
  tol.psd = Tolerances::kIntegratorPsd;
  return tol;
}

}  // namespace

DensityMatrix integrate(const DensityGenerator& rhs, const DensityMatrix& rho0, double t0, double t1,
                        const IntegratorConfig& cfg) {
  return integrate_sampled(rhs, rho0, t0, t1, 1, cfg, nullptr);
}

DensityMatrix integrate_sampled(const DensityGenerator& rhs, const DensityMatrix& rho0, double t0, double t1,
                                std::size_t n_samples, const IntegratorConfig& cfg,
                                const std::function<void(double, const CMatrix&)>& observer,
                                IntegrationStats* stats) {
  return integrate_vectorized(wrap_generator(rhs, rho0.dim()), rho0, t0, t1, n_samples, cfg, observer, stats);
}

DensityMatrix integrate_vectorized(const OdeRhs& rhs, const DensityMatrix& rho0, double t0, double t1,
                                   std::size_t n_samples, const IntegratorConfig& cfg,
                                   const std::function<void(double, const CMatrix&)>& observer,
                                   IntegrationStats* stats) {
  require(t1 > t0, "integrate: t1 must exceed t0");
  require(n_samples >= 1, "integrate: need at least one sample interval");
  const std::size_t dim = rho0.dim();
  OdeIntegrator ode(rhs, dim * dim, cfg);
  CMatrix state = rho0.matrix();
  if (observer) observer(t0, state);
  double t = t0;
  for (std::size_t k = 1; k <= n_samples; ++k) {
    const double tk = k == n_samples ? t1 : t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n_samples);
    ode.advance(state.data(), t, tk);
    t = tk;
    if (observer || k == n_samples) assert_state(state, t);
    if (observer) observer(t, state);
  }
  if (stats != nullptr) *stats = ode.stats();
  return DensityMatrix(std::move(state), integrator_tolerance());
}

}  // namespace geophase
