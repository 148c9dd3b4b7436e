#include "geophase/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "geophase/error.hpp"

namespace geophase {

namespace {

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) fail(ErrorKind::kInvalidArgument, std::string("PhysicalParams.") + name + " is not finite");
}

}  // namespace

void PhysicalParams::validate() const {
  require_finite(g, "g");
  require_finite(delta, "delta");
  require_finite(omega1, "omega1");
  require_finite(omega2, "omega2");
  require_finite(phi1, "phi1");
  require_finite(phi2, "phi2");
  require_finite(kappa, "kappa");
  require_finite(gamma, "gamma");
  require(g > 0.0, "PhysicalParams.g must be > 0");
  require(delta > 0.0, "PhysicalParams.delta must be > 0");
  require(kappa > 0.0, "PhysicalParams.kappa must be > 0");
  require(omega1 >= 0.0 && omega2 >= 0.0, "PhysicalParams.omega1/omega2 must be >= 0");
  require(omega1 > 0.0 || omega2 > 0.0, "PhysicalParams: omega1 and omega2 are both zero (lambda = 0)");
  require(gamma >= 0.0, "PhysicalParams.gamma must be >= 0");
}

PhysicalParams PhysicalParams::from_total_rabi(double g, double delta, double omega_total, double theta,
                                               double kappa, double gamma, double phi1, double phi2) {
  PhysicalParams p;
  p.g = g;
  p.delta = delta;
  p.omega1 = omega_total * std::sin(theta / 2.0);
  p.omega2 = omega_total * std::cos(theta / 2.0);
  // cos(pi/2) is 6e-17, not zero.
  if (std::abs(p.omega1) < 1e-15 * omega_total) p.omega1 = 0.0;
  if (std::abs(p.omega2) < 1e-15 * omega_total) p.omega2 = 0.0;
  p.phi1 = phi1;
  p.phi2 = phi2;
  p.kappa = kappa;
  p.gamma = gamma;
  return p;
}

double PhysicalParams::omega_total() const { return std::hypot(omega1, omega2); }

HierarchyReport hierarchy(const PhysicalParams& p) {
  p.validate();
  HierarchyReport h;
  const double omega_max = std::max(p.omega1, p.omega2);
  const double lambda_max = omega_max * p.g / p.delta;
  h.delta_over_omega = p.delta / omega_max;
  h.delta_over_g = p.delta / p.g;
  h.kappa_over_stark = p.kappa / (p.g * p.g / p.delta);
  h.kappa_over_lambda = p.kappa / lambda_max;
  return h;
}

std::vector<std::string> HierarchyReport::warnings() const {
  std::vector<std::string> out;
  if (delta_over_omega < 20.0) {
    std::ostringstream os;
    os << "Delta/Omega = " << delta_over_omega << " < 20: |r> elimination is marginal";
    out.push_back(os.str());
  }
  if (kappa_over_lambda < 10.0) {
    std::ostringstream os;
    os << "kappa/lambda = " << kappa_over_lambda << " < 10: cavity elimination is marginal";
    out.push_back(os.str());
  }
  return out;
}

ReservoirParams ReservoirParams::direct(double gamma_rate, double theta, double phi) {
  require(gamma_rate > 0.0 && std::isfinite(gamma_rate), "ReservoirParams: Gamma must be > 0");
  require(theta >= 0.0 && theta <= std::numbers::pi, "ReservoirParams: theta must lie in [0, pi]");
  require(std::isfinite(phi), "ReservoirParams: phi must be finite");
  ReservoirParams r;
  r.gamma_rate = gamma_rate;
  r.theta = theta;
  r.phi = phi;
  // Only the products lambda_j^2 / kappa are fixed by Gamma; report rates for kappa = 1.
  r.lambda = std::sqrt(gamma_rate);
  r.lambda1 = r.lambda * std::sin(theta / 2.0);
  r.lambda2 = r.lambda * std::cos(theta / 2.0);
  return r;
}

ReservoirParams ReservoirParams::with_angles(double theta_new, double phi_new) const {
  ReservoirParams r = *this;
  r.theta = theta_new;
  r.phi = phi_new;
  return r;
}

ReservoirParams derive_reservoir(const PhysicalParams& p) {
  p.validate();
  ReservoirParams r;
  r.lambda1 = p.omega1 * p.g / p.delta;
  r.lambda2 = p.omega2 * p.g / p.delta;
  r.lambda = std::hypot(r.lambda1, r.lambda2);
  r.gamma_rate = r.lambda * r.lambda / p.kappa;
  // 2 atan2(lambda1, lambda2) == 2 asin(lambda1 / lambda) without the precision loss near pi.
  r.theta = 2.0 * std::atan2(r.lambda1, r.lambda2);
  r.phi = p.phi1 - p.phi2;
  return r;
}

CMatrix lindblad_op(double gamma_rate, double theta, double phi) {
  using namespace level;
  const double amp = std::sqrt(gamma_rate);
  CMatrix L(3);
  L(kG, kE) = amp * std::sin(theta / 2.0);
  L(kG, kF) = amp * std::cos(theta / 2.0) * std::exp(-kI * phi);
  return L;
}

CMatrix lindblad_op(const ReservoirParams& r) { return lindblad_op(r.gamma_rate, r.theta, r.phi); }

DfsBasis dfs_basis(double theta, double phi) {
  require(theta >= 0.0 && theta <= std::numbers::pi, "dfs_basis: theta must lie in [0, pi]");
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const cplx e_phi = std::exp(kI * phi);
  CVector dark{c, -e_phi * s, 0.0};
  CVector bright{std::conj(e_phi) * s, c, 0.0};
  return {PureState(std::move(dark)), PureState(std::move(bright))};
}

CMatrix frame_unitary(double theta, double phi) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const cplx ep = std::exp(kI * (phi / 2.0)), em = std::conj(ep);
  return CMatrix{{c * ep, -s * em, 0.0}, {s * ep, c * em, 0.0}, {0.0, 0.0, 1.0}};
}

CMatrix frame_generator(double theta, double /*phi*/, double theta_dot, double phi_dot) {
  // dU/dtheta U^dagger = (1/2)[[0,-1],[1,0]];  dU/dphi U^dagger = (i/2)[[cos, sin],[sin, -cos]].
  const double ct = std::cos(theta), st = std::sin(theta);
  const cplx w = 0.5 * kI * phi_dot;
  const double v = 0.5 * theta_dot;
  return CMatrix{{w * ct, -v + w * st, 0.0}, {v + w * st, -w * ct, 0.0}, {0.0, 0.0, 0.0}};
}

CMatrix lindblad_rhs(const CMatrix& rho, const CMatrix& L) {
  require(rho.dim() == L.dim(), "lindblad_rhs: dimension mismatch between rho and L");
  const CMatrix Ld = L.adjoint();
  const CMatrix LdL = Ld * L;
  CMatrix out = L * rho * Ld;
  out *= 2.0;
  out -= rho * LdL;
  out -= LdL * rho;
  return out;
}

CMatrix lindblad_rhs(const DensityMatrix& rho, const CMatrix& L) { return lindblad_rhs(rho.matrix(), L); }

CMatrix rotating_rhs(const CMatrix& rho_p, const ReservoirParams& r, double theta_dot, double phi_dot) {
  require(rho_p.dim() == 3, "rotating_rhs: rho' must be 3x3");
  const CMatrix U = frame_unitary(r.theta, r.phi);
  const CMatrix Lp = U * lindblad_op(r) * U.adjoint();
  const CMatrix A = frame_generator(r.theta, r.phi, theta_dot, phi_dot);
  CMatrix out = lindblad_rhs(rho_p, Lp);
  out += A * rho_p;
  out += rho_p * A.adjoint();
  return out;
}

CMatrix rotating_rhs(const DensityMatrix& rho_p, const ReservoirParams& r, double theta_dot, double phi_dot) {
  return rotating_rhs(rho_p.matrix(), r, theta_dot, phi_dot);
}

CMatrix hamiltonian_effective(const PhysicalParams& p, std::size_t n_max) {
  p.validate();
  require(n_max >= 1, "hamiltonian_effective: n_max must be >= 1");
  using namespace level;
  const double stark = p.g * p.g / p.delta;
  const cplx l1 = (p.omega1 * p.g / p.delta) * std::exp(-kI * p.phi1);
  const cplx l2 = (p.omega2 * p.g / p.delta) * std::exp(-kI * p.phi2);
  CMatrix H(3 * (n_max + 1));
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double sq = std::sqrt(static_cast<double>(n));
    const std::size_t g_n = product_index(kG, n, n_max);
    H(g_n, g_n) = stark * static_cast<double>(n);
    // a |x><g| takes |g, n> to |x, n-1> with amplitude sqrt(n).
    const std::size_t e_m = product_index(kE, n - 1, n_max);
    const std::size_t f_m = product_index(kF, n - 1, n_max);
    H(e_m, g_n) = l1 * sq;
    H(g_n, e_m) = std::conj(l1) * sq;
    H(f_m, g_n) = l2 * sq;
    H(g_n, f_m) = std::conj(l2) * sq;
  }
  return H;
}

}  // namespace geophase
