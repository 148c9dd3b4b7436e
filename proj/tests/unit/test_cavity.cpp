#include <doctest.h>

#include <cmath>
#include <random>

#include "checks.hpp"
#include "geophase/analytic.hpp"
#include "geophase/cavity.hpp"
#include "oracles.hpp"

using namespace geophase;
using testing::kPi;

namespace {

// Dense reference: -i[H, rho] + kappa (2 a rho a^+ - {a^+ a, rho}) with a built by kron.
CMatrix dense_composite_rhs(const CMatrix& H, const CMatrix& rho, double kappa, std::size_t atom_dim,
                            std::size_t n_max) {
  CMatrix a(n_max + 1);
  for (std::size_t n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const CMatrix A = kron(CMatrix::identity(atom_dim), a);
  const CMatrix AdA = A.adjoint() * A;
  CMatrix out = (H * rho - rho * H) * cplx(0.0, -1.0);
  out += (A * rho * A.adjoint() * cplx(2.0) - AdA * rho - rho * AdA) * cplx(kappa);
  return out;
}

}  // namespace

TEST_CASE("composite right-hand side matches a dense construction") {
  std::mt19937_64 rng(43);
  const PhysicalParams p = PhysicalParams::from_total_rabi(1.0, 10.0, 1.0, kPi / 3, 2.0, 0.0, 0.2, -0.3);
  FockConfig f;
  f.n_max = 2;
  const auto s = SteeringSchedule::constant_theta_linear_phi(kPi / 3, 0.05, 0.5);
  const CompositeModel m(p, s, f);
  for (double t : {0.0, 3.7, 50.0}) {
    const CMatrix H = m.hamiltonian(t);
    CHECK(hermiticity_defect(H) < 1e-15);
    const DensityMatrix rho = testing::random_density(rng, f.dim());
    CHECK(max_abs_diff(m(t, rho.matrix()), dense_composite_rhs(H, rho.matrix(), p.kappa, 3, f.n_max)) < 1e-13);
  }
}

TEST_CASE("composite Hamiltonian at t = 0 equals the static effective Hamiltonian") {
  const PhysicalParams p = PhysicalParams::from_total_rabi(1.0, 10.0, 1.0, 0.8, 2.0, 0.0, 0.3, 0.3);
  FockConfig f;
  f.n_max = 3;
  const CompositeModel m(p, SteeringSchedule::constant_theta_linear_phi(0.8, 0.1), f);
  CHECK(max_abs_diff(m.hamiltonian(0.0), hamiltonian_effective(p, f.n_max)) < 1e-15);
}

TEST_CASE("vacuum embedding, photon number and partial trace") {
  std::mt19937_64 rng(47);
  const DensityMatrix atom = testing::random_density(rng, 3);
  const DensityMatrix full = with_cavity_vacuum(atom, 2);
  CHECK(max_abs_diff(partial_trace_cavity(full, 3, 3).matrix(), atom.matrix()) == 0.0);
  CHECK(mean_photon_number(full.matrix(), 3, 2) == 0.0);
  CVector psi(9);
  psi[product_index(level::kG, 2, 2)] = 1.0;
  CHECK(mean_photon_number(outer(psi, psi), 3, 2) == doctest::Approx(2.0));
}

TEST_CASE("Fock configuration limits") {
  FockConfig f;
  f.n_max = 0;
  CHECK(testing::thrown_kind([&] { f.validate(); }) == ErrorKind::kInvalidArgument);
  f.n_max = 1;
  f.atom_dim = 5;
  CHECK(testing::thrown_kind([&] { f.validate(); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("scaling exponent and period estimation") {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
  CHECK(scaling_exponent(x, y) == doctest::Approx(-1.5).epsilon(1e-12));
  std::vector<double> t, s;
  for (int k = 0; k <= 2000; ++k) {
    t.push_back(0.02 * k);
    s.push_back(std::cos(2 * kPi * t.back() / 7.0));
  }
  CHECK(estimate_period(t, s) == doctest::Approx(7.0).epsilon(1e-4));
  CHECK(std::isnan(estimate_period(t, t)));
}

TEST_CASE("probe state populates dark, bright and ground") {
  const DensityMatrix rho = default_probe_state(0.7, 0.2);
  const CycleElements el = dfs_elements(rho.matrix(), 0.7, 0.2);
  CHECK(el.aa.real() == doctest::Approx(4.0 / 14));
  CHECK(el.bb.real() == doctest::Approx(1.0 / 14));
  CHECK(el.gg.real() == doctest::Approx(9.0 / 14));
}

TEST_CASE("bright-state decay in the composite model gives lambda^2 / kappa") {
  const double lambda = 0.1;
  const PhysicalParams p = PhysicalParams::from_total_rabi(1.0, 10.0, 1.0, kPi / 4, 50 * lambda, 0.0);
  FockConfig f;
  f.n_max = 1;
  const double fitted = fit_bright_decay(p, kPi / 4, 0.0, f, IntegratorConfig::adaptive(1e-12, 1e-12));
  CHECK(fitted == doctest::Approx(lambda * lambda / (50 * lambda)).epsilon(1e-3));
}

TEST_CASE("short elimination run keeps the cavity nearly empty") {
  const double lambda = 0.1, theta = kPi / 4;
  const PhysicalParams p = PhysicalParams::from_total_rabi(1.0, 10.0, 1.0, theta, 20 * lambda, 0.0);
  const double G = derive_reservoir(p).gamma_rate;
  FockConfig f;
  f.n_max = 1;
  EliminationOptions o;
  o.samples = 64;
  // A quarter loop is enough to exercise the moving reservoir.
  const SteeringSchedule s([theta](double) { return theta; }, [](double) { return 0.0; },
                           [G](double t) { return 0.2 * G * t; }, [G](double) { return 0.2 * G; },
                           0.25 * 2 * kPi / (0.2 * G));
  const EliminationReport r = validate_elimination(p, s, f, o);
  CHECK(r.max_photon_number < 0.05);
  CHECK(r.max_trace_distance < 0.1 * lambda / p.kappa * 20);
  CHECK(r.ratio_kappa_lambda == doctest::Approx(20.0));
  CHECK(r.truncation_change < o.truncation_tol);
}

TEST_CASE("explicit excited-level Hamiltonian") {
  const PhysicalParams p = PhysicalParams::from_total_rabi(1.0, 20.0, 1.0, 1.0, 1.0, 0.0, 0.4, -0.2);
  FockConfig f;
  f.n_max = 2;
  f.atom_dim = 4;
  for (double t : {0.0, 0.3, 11.0}) {
    const CMatrix H = hamiltonian_full(t, p, f);
    REQUIRE(H.dim() == 12);
    CHECK(hermiticity_defect(H) < 1e-15);
    // Cavity coupling g sqrt(n) e^{i Delta t} between |g,n> and |r,n-1>.
    CHECK(std::abs(H(product_index(level::kR, 0, 2), product_index(level::kG, 1, 2)) -
                   p.g * std::exp(kI * p.delta * t)) < 1e-14);
  }
}

TEST_CASE("explicit model follows the effective one on a short horizon") {
  const double delta = 40.0;
  const PhysicalParams p = PhysicalParams::from_total_rabi(1.0, delta, 1.0, kPi, 1.0, 0.0);
  FockConfig f;
  f.n_max = 2;
  f.atom_dim = 4;
  CVector psi0(3 * f.fock_dim());
  psi0[product_index(level::kE, 1, f.n_max)] = 1.0;
  const FullModelReport r =
      validate_full_hamiltonian(p, f, psi0, 2.0 * delta, 400, IntegratorConfig::adaptive(1e-12, 1e-12));
  CHECK(r.max_norm_drift < 1e-8);
  CHECK(r.max_r_population < 4.5 / (delta * delta));
  CHECK(r.max_state_distance < 3.0 / delta);
  CHECK(r.times.size() == 401);
}
