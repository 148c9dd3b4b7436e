#include "geophase/analytic.hpp"

#include <cmath>
#include <numbers>

#include "geophase/error.hpp"

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;

void require_rate(double gamma_rate) {
  require(gamma_rate > 0.0 && std::isfinite(gamma_rate), "Gamma must be positive and finite");
}

void require_theta(double theta) {
  require(theta >= 0.0 && theta <= kPi, "theta must lie in [0, pi]");
}

// Quantities shared by the first-order maps. The maps assume phi_dot > 0; a
// reversed loop conjugates the geometric phase and flips the leakage sign.
struct FirstOrder {
  double x;       // pi sin^2(theta) |phi_dot| / Gamma
  double r;       // phi_dot / Gamma, signed
  double sign;    // direction of the loop
  double s;       // sin(theta)
  bool beyond;
};

FirstOrder first_order(double gamma_rate, double theta, double phi_dot) {
  require_rate(gamma_rate);
  require_theta(theta);
  require(std::isfinite(phi_dot), "phi_dot must be finite");
  FirstOrder f;
  f.s = std::sin(theta);
  f.r = phi_dot / gamma_rate;
  f.sign = phi_dot < 0.0 ? -1.0 : 1.0;
  f.x = kPi * f.s * f.s * std::abs(f.r);
  f.beyond = std::abs(f.r) > kFirstOrderRegimeLimit;
  return f;
}

}  // namespace

EigenPair lambdas(double gamma_rate, double theta, double phi_dot) {
  require_rate(gamma_rate);
  const double G = gamma_rate;
  cplx z{G * G - phi_dot * phi_dot, 2.0 * G * std::cos(theta) * phi_dot};
  // Keep the branch on the upper lip of the cut when the discriminant is real.
  if (z.imag() == 0.0) z = {z.real(), 0.0};
  const cplx root = std::sqrt(z);
  EigenPair e;
  e.lambda_plus = 0.5 * (-G + root);
  e.lambda_minus = 0.5 * (-G - root);
  e.confluent = std::abs(z) < Tolerances::kConfluentRel * G * G;
  return e;
}

CoherencePair coherence_exact(double t, cplx rho_eg0, double gamma_rate, double theta, double phi_dot) {
  const EigenPair e = lambdas(gamma_rate, theta, phi_dot);
  const double a = 0.5 * phi_dot;
  const cplx iac = kI * a * std::cos(theta);
  const cplx ias = kI * a * std::sin(theta);
  const cplx lp = e.lambda_plus, lm = e.lambda_minus;
  const cplx root = lp - lm;
  const cplx u = 0.5 * root * t;
  if (std::abs(u) < 1.0) {
    // Near the confluent point: e^{lambda_pm t} = e^{-Gamma t/2} e^{pm u}; sinh(u)/u stays accurate as root -> 0.
    const cplx sinhc = std::abs(u) < 1e-3 ? 1.0 + u * u / 6.0 + u * u * u * u / 120.0 : std::sinh(u) / u;
    const cplx decay = std::exp(-0.5 * gamma_rate * t);
    const cplx m = -0.5 * gamma_rate - iac;
    return {rho_eg0 * decay * (std::cosh(u) - m * t * sinhc), rho_eg0 * ias * t * decay * sinhc};
  }
  const cplx ep = std::exp(lp * t), em = std::exp(lm * t);
  const cplx eg = rho_eg0 / (lm - lp) * ((lm - iac) * ep - (lp - iac) * em);
  const cplx fg = rho_eg0 * ias / (lp - lm) * (ep - em);
  return {eg, fg};
}

CMatrix CycleElements::to_matrix() const {
  return CMatrix{{aa, ab, ag}, {std::conj(ab), bb, bg}, {std::conj(ag), std::conj(bg), gg}};
}

CycleElements CycleElements::from_matrix(const CMatrix& m) {
  require(m.dim() == 3, "CycleElements::from_matrix: 3x3 matrix required");
  CycleElements c;
  c.aa = m(0, 0);
  c.bb = m(1, 1);
  c.gg = m(2, 2);
  c.ab = m(0, 1);
  c.ag = m(0, 2);
  c.bg = m(1, 2);
  return c;
}

CycleElements dfs_elements(const CMatrix& rho, double theta, double phi) {
  require(rho.dim() == 3, "dfs_elements: 3x3 state required");
  const DfsBasis b = dfs_basis(theta, phi);
  const CVector& d = b.dark.amplitudes();
  const CVector& br = b.bright.amplitudes();
  const CVector g{0.0, 0.0, 1.0};
  CycleElements c;
  c.aa = expectation(rho, d, d);
  c.bb = expectation(rho, br, br);
  c.gg = expectation(rho, g, g);
  c.ab = expectation(rho, d, br);
  c.ag = expectation(rho, d, g);
  c.bg = expectation(rho, br, g);
  return c;
}

CycleElements cycle_first_order(const CycleElements& rot0, double gamma_rate, double theta, double phi_dot) {
  const FirstOrder f = first_order(gamma_rate, theta, phi_dot);
  const cplx coh = std::exp(kI * (f.sign * kPi * std::cos(theta)) - 0.5 * f.x);
  CycleElements out;
  out.aa = (1.0 - f.x) * rot0.aa;
  out.bb = 0.0;
  out.gg = rot0.gg + f.x * rot0.aa + rot0.bb;
  out.ab = -kI * (0.5 * f.s * f.r) * rot0.aa;
  out.ag = rot0.ag * coh;
  out.bg = rot0.ag * kI * (0.5 * f.s * f.r) * coh;
  out.beyond_regime = f.beyond;
  return out;
}

CycleElements original_frame_cycle(const CycleElements& dfs0, double gamma_rate, double theta, double phi_dot) {
  const FirstOrder f = first_order(gamma_rate, theta, phi_dot);
  const double beta = f.sign * berry_phase_and_solid_angle(theta).beta;
  const cplx coh = std::exp(kI * beta - 0.5 * f.x);
  CycleElements out;
  out.aa = (1.0 - f.x) * dfs0.aa;
  out.bb = 0.0;
  out.gg = dfs0.gg + f.x * dfs0.aa + dfs0.bb;
  out.ab = -kI * (0.5 * f.s * f.r) * dfs0.aa;
  out.ag = dfs0.ag * coh;
  out.bg = dfs0.ag * kI * (0.5 * f.s * f.r) * coh;
  out.beyond_regime = f.beyond;
  return out;
}

BerryPhase berry_phase_and_solid_angle(double theta) {
  require_theta(theta);
  const double solid = 2.0 * kPi * (1.0 - std::cos(theta));
  return {-0.5 * solid, solid};
}

double loop_phase(double theta, double phi_dot) {
  if (phi_dot == 0.0) return 0.0;
  const double beta = berry_phase_and_solid_angle(theta).beta;
  return phi_dot > 0.0 ? beta : -beta;
}

double visibility(double theta, double phi_dot, double gamma_rate) {
  const FirstOrder f = first_order(gamma_rate, theta, phi_dot);
  const double v = 1.0 - 0.5 * f.x;
  if (v <= 0.0) fail(ErrorKind::kRegime, "visibility: 1 - pi sin^2(theta) phi_dot / (2 Gamma) <= 0; steering too fast");
  return v;
}

PenaltyReport spontaneous_penalty(const PhysicalParams& p, double theta, double phi_dot) {
  require(phi_dot != 0.0 && std::isfinite(phi_dot), "spontaneous_penalty: phi_dot must be non-zero (T = 2 pi / phi_dot)");
  require_theta(theta);
  const double G = derive_reservoir(p).gamma_rate;
  const double s = std::sin(theta);
  PenaltyReport r;
  r.P_b = s * s * phi_dot * phi_dot / (8.0 * G * G);
  const double omega = p.omega_total();
  r.gamma_e = p.gamma * r.P_b * omega * omega / (p.delta * p.delta);
  r.T = 2.0 * kPi / std::abs(phi_dot);
  r.V_prime = std::exp(-r.gamma_e * r.T);
  return r;
}

}  // namespace geophase
