#include "geophase/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "geophase/error.hpp"

namespace geophase {

void FockConfig::validate() const {
  require(n_max >= 1, "FockConfig.n_max must be >= 1");
  require(atom_dim == 3 || atom_dim == 4, "FockConfig.atom_dim must be 3 or 4");
}

CompositeModel::CompositeModel(const PhysicalParams& p, SteeringSchedule schedule, FockConfig fock)
    : p_(p), schedule_(std::move(schedule)), fock_(fock) {
  p_.validate();
  fock_.validate();
  require(fock_.atom_dim == 3, "CompositeModel: atom_dim must be 3");
  const ReservoirParams r = derive_reservoir(p_);
  lambda_ = r.lambda;
  stark_ = p_.g * p_.g / p_.delta;
}

void CompositeModel::fill_hamiltonian(double t, std::vector<Entry>& h) const {
  using namespace level;
  const std::size_t nm = fock_.n_max;
  const double theta = schedule_.theta(t);
  const double phi2 = p_.phi1 - schedule_.phi(t);
  const cplx l1 = lambda_ * std::sin(theta / 2.0) * std::exp(-kI * p_.phi1);
  const cplx l2 = lambda_ * std::cos(theta / 2.0) * std::exp(-kI * phi2);
  h.clear();
  for (std::size_t n = 1; n <= nm; ++n) {
    const double sq = std::sqrt(static_cast<double>(n));
    const std::size_t g_n = product_index(kG, n, nm);
    const std::size_t e_m = product_index(kE, n - 1, nm);
    const std::size_t f_m = product_index(kF, n - 1, nm);
    h.push_back({g_n, g_n, stark_ * static_cast<double>(n)});
    h.push_back({e_m, g_n, l1 * sq});
    h.push_back({g_n, e_m, std::conj(l1) * sq});
    h.push_back({f_m, g_n, l2 * sq});
    h.push_back({g_n, f_m, std::conj(l2) * sq});
  }
}

void CompositeModel::rhs(double t, std::span<const cplx> rho, std::span<cplx> out) const {
  const std::size_t D = dim();
  const std::size_t F = fock_.fock_dim();
  thread_local std::vector<Entry> h;
  fill_hamiltonian(t, h);
  std::fill(out.begin(), out.end(), cplx{0.0});

  // -i (H rho - rho H)
  for (const Entry& e : h) {
    const cplx mih = -kI * e.value;
    const cplx* src_row = rho.data() + e.col * D;
    cplx* dst_row = out.data() + e.row * D;
    for (std::size_t j = 0; j < D; ++j) dst_row[j] += mih * src_row[j];
    const cplx ih = kI * e.value;
    for (std::size_t i = 0; i < D; ++i) out[i * D + e.col] += ih * rho[i * D + e.row];
  }

  // kappa (2 a rho a^dagger - n rho - rho n); a|x, m+1> = sqrt(m+1) |x, m>.
  const double kappa = p_.kappa;
  for (std::size_t i = 0; i < D; ++i) {
    const std::size_t mi = i % F;
    for (std::size_t j = 0; j < D; ++j) {
      const std::size_t mj = j % F;
      cplx acc = -kappa * static_cast<double>(mi + mj) * rho[i * D + j];
      if (mi + 1 < F && mj + 1 < F)
        acc += 2.0 * kappa * std::sqrt(static_cast<double>((mi + 1) * (mj + 1))) * rho[(i + 1) * D + (j + 1)];
      out[i * D + j] += acc;
    }
  }
}

CMatrix CompositeModel::operator()(double t, const CMatrix& rho) const {
  require(rho.dim() == dim(), "CompositeModel: state dimension mismatch");
  CMatrix out(dim());
  rhs(t, rho.data(), out.data());
  return out;
}

CMatrix CompositeModel::hamiltonian(double t) const {
  std::vector<Entry> h;
  fill_hamiltonian(t, h);
  CMatrix H(dim());
  for (const Entry& e : h) H(e.row, e.col) += e.value;
  return H;
}

CompositeModel build_composite_generator(const PhysicalParams& p, const SteeringSchedule& schedule,
                                         const FockConfig& fock) {
  return CompositeModel(p, schedule, fock);
}

DensityMatrix with_cavity_vacuum(const DensityMatrix& atom, std::size_t n_max) {
  CMatrix vac(n_max + 1);
  vac(0, 0) = 1.0;
  return DensityMatrix(kron(atom.matrix(), vac));
}

double mean_photon_number(const CMatrix& rho, std::size_t atom_dim, std::size_t n_max) {
  const std::size_t F = n_max + 1;
  require(rho.dim() == atom_dim * F, "mean_photon_number: dimension mismatch");
  double n = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) n += static_cast<double>(i % F) * rho(i, i).real();
  return n;
}

CompositeTrajectory run_composite(const CompositeModel& model, const DensityMatrix& atom0, double duration,
                                  std::size_t samples, const IntegratorConfig& cfg) {
  require(atom0.dim() == 3, "run_composite: atom state must be 3x3");
  const std::size_t nm = model.fock().n_max;
  const std::size_t F = model.fock().fock_dim();
  CompositeTrajectory traj;
  auto observer = [&](double t, const CMatrix& rho) {
    traj.times.push_back(t);
    traj.reduced.push_back(partial_trace_cavity(rho, 3, F));
    traj.photon_number.push_back(mean_photon_number(rho, 3, nm));
  };
  OdeRhs rhs = [&model](double t, std::span<const cplx> y, std::span<cplx> dy) { model.rhs(t, y, dy); };
  integrate_vectorized(rhs, with_cavity_vacuum(atom0, nm), 0.0, duration, samples, cfg, observer, &traj.stats);
  return traj;
}

double fit_bright_decay(const PhysicalParams& p, double theta, double phi, const FockConfig& fock,
                        const IntegratorConfig& cfg, std::size_t samples) {
  const double gamma_pred = derive_reservoir(p).gamma_rate;
  const double horizon = 1.0 / gamma_pred;
  const CompositeModel model(p, SteeringSchedule::frozen(theta, phi, horizon), fock);
  const PureState bright = dfs_basis(theta, phi).bright;
  const CompositeTrajectory traj = run_composite(model, DensityMatrix::pure(bright), horizon, samples, cfg);

  // Ordinary least squares of log P_b against t.
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double pb = expectation(traj.reduced[k], bright.amplitudes(), bright.amplitudes()).real();
    if (!(pb > 0.0)) continue;
    const double t = traj.times[k], y = std::log(pb);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++n;
  }
  require(n >= 2, "fit_bright_decay: not enough positive samples");
  const double dn = static_cast<double>(n);
  const double slope = (dn * sty - st * sy) / (dn * stt - st * st);
  return -0.5 * slope;
}

namespace {

struct CompositeMetrics {
  double max_trace_distance = 0.0;
  double max_photon_number = 0.0;
};

CompositeMetrics compare_with_reference(const CompositeTrajectory& traj, const std::vector<Sample>& ref) {
  require(traj.reduced.size() == ref.size(), "validate_elimination: sample count mismatch");
  CompositeMetrics m;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    m.max_trace_distance = std::max(m.max_trace_distance, trace_distance(traj.reduced[k], ref[k].rho));
    m.max_photon_number = std::max(m.max_photon_number, traj.photon_number[k]);
  }
  return m;
}

}  // namespace

EliminationReport validate_elimination(const PhysicalParams& p, const SteeringSchedule& schedule,
                                       const FockConfig& fock, const DensityMatrix& atom0,
                                       const EliminationOptions& options) {
  const ReservoirParams r = derive_reservoir(p);
  const double T = schedule.duration();

  CycleOptions ref_opts;
  ref_opts.frame = Frame::kLab;
  ref_opts.integrator = options.integrator;
  ref_opts.samples = options.samples;
  ref_opts.keep_trajectory = true;
  ref_opts.extract_phase = false;
  const CycleResult ref = run_cycle(r, schedule, atom0, ref_opts);

  const CompositeModel model(p, schedule, fock);
  const CompositeMetrics m =
      compare_with_reference(run_composite(model, atom0, T, options.samples, options.integrator), ref.trajectory);

  EliminationReport rep;
  rep.max_trace_distance = m.max_trace_distance;
  rep.max_photon_number = m.max_photon_number;
  rep.predicted_Gamma = r.gamma_rate;
  rep.ratio_kappa_lambda = p.kappa / r.lambda;
  rep.fitted_Gamma = fit_bright_decay(p, schedule.theta(0.0), schedule.phi(0.0), fock, options.integrator);

  if (options.check_truncation) {
    FockConfig bigger = fock;
    bigger.n_max = fock.n_max + 1;
    const CompositeModel model2(p, schedule, bigger);
    const CompositeMetrics m2 =
        compare_with_reference(run_composite(model2, atom0, T, options.samples, options.integrator), ref.trajectory);
    rep.truncation_change = std::max(std::abs(m2.max_trace_distance - m.max_trace_distance),
                                     std::abs(m2.max_photon_number - m.max_photon_number));
    if (rep.truncation_change >= options.truncation_tol) {
      std::ostringstream os;
      os << "validate_elimination: Fock truncation not converged (n_max " << fock.n_max << " -> " << bigger.n_max
         << " changes metrics by " << rep.truncation_change << ")";
      fail(ErrorKind::kNumeric, os.str());
    }
  }
  return rep;
}

EliminationReport validate_elimination(const PhysicalParams& p, const SteeringSchedule& schedule,
                                       const FockConfig& fock, const EliminationOptions& options) {
  return validate_elimination(p, schedule, fock, default_probe_state(schedule.theta(0.0), schedule.phi(0.0)),
                              options);
}

DensityMatrix default_probe_state(double theta, double phi) {
  const DfsBasis b = dfs_basis(theta, phi);
  CVector psi(3);
  for (std::size_t i = 0; i < 3; ++i) psi[i] = 2.0 * b.dark[i] + b.bright[i];
  psi[level::kG] += 3.0;
  return DensityMatrix::pure(PureState::normalized(std::move(psi)));
}

double scaling_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "scaling_exponent: need at least two matching points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    require(x[k] > 0.0 && y[k] > 0.0, "scaling_exponent: values must be positive");
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CMatrix hamiltonian_full(double t, const PhysicalParams& p, const FockConfig& fock) {
  fock.validate();
  require(fock.atom_dim == 4, "hamiltonian_full: atom_dim must be 4");
  using namespace level;
  const std::size_t nm = fock.n_max;
  const cplx cg = p.g * std::exp(kI * (p.delta * t));
  const cplx c1 = p.omega1 * (std::exp(kI * (p.delta * t + p.phi1)) + std::exp(kI * (-p.delta * t + p.phi1)));
  const cplx c2 = p.omega2 * (std::exp(kI * (p.delta * t + p.phi2)) + std::exp(kI * (-p.delta * t + p.phi2)));
  CMatrix H(fock.dim());
  auto add = [&H](std::size_t row, std::size_t col, cplx v) {
    H(row, col) += v;
    H(col, row) += std::conj(v);
  };
  for (std::size_t n = 0; n <= nm; ++n) {
    add(product_index(kR, n, nm), product_index(kE, n, nm), c1);
    add(product_index(kR, n, nm), product_index(kF, n, nm), c2);
    if (n >= 1) add(product_index(kR, n - 1, nm), product_index(kG, n, nm), cg * std::sqrt(static_cast<double>(n)));
  }
  return H;
}

FullModelReport validate_full_hamiltonian(const PhysicalParams& p, const FockConfig& fock, const CVector& psi0,
                                          double horizon, std::size_t samples, const IntegratorConfig& cfg) {
  p.validate();
  fock.validate();
  require(fock.atom_dim == 4, "validate_full_hamiltonian: atom_dim must be 4");
  require(horizon > 0.0 && samples >= 1, "validate_full_hamiltonian: need a positive horizon and samples");
  using namespace level;
  const std::size_t nm = fock.n_max;
  const std::size_t F = fock.fock_dim();
  const std::size_t D3 = 3 * F, D4 = fock.dim();
  require(psi0.size() == D3, "validate_full_hamiltonian: psi0 must live on {e, f, g} (x) Fock");
  require(std::abs(norm(psi0) - 1.0) <= Tolerances::kPureNorm, "validate_full_hamiltonian: psi0 must be normalized");

  // Reference: exp(+i H_e t) psi0 through the eigendecomposition of H_e.
  const EigenSystem es = hermitian_eigensystem(hamiltonian_effective(p, nm));
  const CVector coeff = es.vectors.adjoint() * psi0;
  auto effective = [&](double t) {
    CVector c(D3);
    for (std::size_t k = 0; k < D3; ++k) c[k] = std::exp(kI * (es.values[k] * t)) * coeff[k];
    return es.vectors * c;
  };

  OdeRhs rhs = [&p, &fock, D4](double t, std::span<const cplx> y, std::span<cplx> dy) {
    const CMatrix H = hamiltonian_full(t, p, fock);
    for (std::size_t i = 0; i < D4; ++i) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < D4; ++j) {
        const cplx h = H(i, j);
        if (h != cplx{0.0}) acc += h * y[j];
      }
      dy[i] = -kI * acc;
    }
  };
  OdeIntegrator ode(rhs, D4, cfg);

  CVector psi(D4);
  std::copy(psi0.begin(), psi0.end(), psi.begin());
  auto excited = [&](const CVector& v) {
    double pe = 0.0;
    for (std::size_t n = 0; n <= nm; ++n) pe += std::norm(v[product_index(kE, n, nm)]);
    return pe;
  };

  FullModelReport rep;
  double t = 0.0;
  for (std::size_t k = 0; k <= samples; ++k) {
    const double tk = horizon * static_cast<double>(k) / static_cast<double>(samples);
    if (k > 0) ode.advance(psi, t, tk);
    t = tk;
    const double nrm = norm(psi);
    if (!std::isfinite(nrm)) fail(ErrorKind::kNumeric, "validate_full_hamiltonian: non-finite state");
    rep.max_norm_drift = std::max(rep.max_norm_drift, std::abs(nrm - 1.0));

    const CVector eff = effective(t);
    cplx ov = 0.0;
    for (std::size_t i = 0; i < D3; ++i) ov += std::conj(eff[i]) * psi[i];
    const double a = std::min(1.0, std::abs(ov));
    rep.max_overlap_deficit = std::max(rep.max_overlap_deficit, 1.0 - a);
    rep.max_state_distance = std::max(rep.max_state_distance, std::sqrt(std::max(0.0, 1.0 - a * a)));

    double pr = 0.0;
    for (std::size_t n = 0; n <= nm; ++n) pr += std::norm(psi[product_index(kR, n, nm)]);
    rep.max_r_population = std::max(rep.max_r_population, pr);

    rep.times.push_back(t);
    rep.excited_full.push_back(excited(psi));
    rep.excited_effective.push_back(excited(eff));
  }
  if (rep.max_norm_drift > Tolerances::kIntegratorTraceDrift) {
    std::ostringstream os;
    os << "validate_full_hamiltonian: norm drift " << rep.max_norm_drift << " exceeds "
       << Tolerances::kIntegratorTraceDrift;
    fail(ErrorKind::kNumeric, os.str());
  }
  rep.stats = ode.stats();
  return rep;
}

double estimate_period(const std::vector<double>& t, const std::vector<double>& y) {
  require(t.size() == y.size(), "estimate_period: size mismatch");
  if (y.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double range = *hi - *lo;
  if (range <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double upper = *lo + 0.75 * range, lower = *lo + 0.25 * range;

  std::vector<double> peaks;
  bool inside = false;
  std::size_t best = 0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (!inside && y[k] > upper) {
      inside = true;
      best = k;
    } else if (inside && y[k] > y[best]) {
      best = k;
    }
    if (inside && (y[k] < lower || k + 1 == y.size())) {
      inside = false;
      // Skip a region truncated by either end of the trace; its maximum is not a peak.
      if (best == 0 || best + 1 == y.size()) continue;
      // Parabolic refinement through the three samples around the maximum.
      const double y0 = y[best - 1], y1 = y[best], y2 = y[best + 1];
      const double den = y0 - 2.0 * y1 + y2;
      const double shift = den != 0.0 ? 0.5 * (y0 - y2) / den : 0.0;
      const double h = 0.5 * (t[best + 1] - t[best - 1]);
      peaks.push_back(t[best] + std::clamp(shift, -1.0, 1.0) * h);
    }
  }
  if (peaks.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

}  // namespace geophase
