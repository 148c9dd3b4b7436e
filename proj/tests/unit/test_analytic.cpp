#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <random>

#include "checks.hpp"
#include "geophase/analytic.hpp"
#include "oracles.hpp"

using namespace geophase;
using testing::kPi;

namespace {

// (rho'_eg, rho'_fg)(t) from the matrix exponential of the constant coefficient system.
std::pair<cplx, cplx> coherence_by_expm(double t, cplx x0, double G, double theta, double phi_dot) {
  const double a = 0.5 * phi_dot;
  Eigen::Matrix2cd M;
  M << kI * a * std::cos(theta), kI * a * std::sin(theta), kI * a * std::sin(theta), -G - kI * a * std::cos(theta);
  const Eigen::Matrix2cd E = (M * t).exp();
  return {E(0, 0) * x0, E(1, 0) * x0};
}

}  // namespace

TEST_CASE("eigenvalues solve the characteristic polynomial") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uth(0.0, kPi), ug(0.1, 3.0), ur(-2.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    const double G = ug(rng), theta = uth(rng), phi_dot = ur(rng) * G, a = 0.5 * phi_dot;
    const EigenPair e = lambdas(G, theta, phi_dot);
    for (cplx l : {e.lambda_plus, e.lambda_minus}) {
      const cplx poly = l * l + G * l + a * a - kI * G * a * std::cos(theta);
      CHECK(std::abs(poly) < 1e-13 * G * G);
    }
    CHECK(std::abs(e.lambda_plus + e.lambda_minus + G) < 1e-14 * G);
  }
  const EigenPair slow = lambdas(1.0, 0.5, 1e-6);
  CHECK(std::abs(slow.lambda_plus) < 1e-6);
  CHECK(slow.lambda_minus.real() == doctest::Approx(-1.0));
}

TEST_CASE("closed-form coherences agree with the matrix exponential") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> uth(0.0, kPi), ug(0.2, 3.0), ur(-1.5, 1.5), ut(0.0, 40.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double G = ug(rng), theta = uth(rng), phi_dot = ur(rng) * G, t = ut(rng) / G;
    const cplx x0 = {0.3, -0.2};
    const CoherencePair c = coherence_exact(t, x0, G, theta, phi_dot);
    const auto [eg, fg] = coherence_by_expm(t, x0, G, theta, phi_dot);
    worst = std::max({worst, std::abs(c.rho_eg - eg), std::abs(c.rho_fg - fg)});
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("confluent point uses the limit form continuously") {
  // theta = pi/2 and phi_dot = Gamma make the discriminant vanish.
  const double G = 1.0, theta = kPi / 2;
  CHECK(lambdas(G, theta, G).confluent);
  CHECK_FALSE(lambdas(G, theta, G * (1 + 1e-6)).confluent);
  const double t = 3.0;
  const CoherencePair at = coherence_exact(t, 1.0, G, theta, G);
  const auto [eg, fg] = coherence_by_expm(t, 1.0, G, theta, G);
  CHECK(std::abs(at.rho_eg - eg) < 1e-12);
  CHECK(std::abs(at.rho_fg - fg) < 1e-12);
  const CoherencePair near = coherence_exact(t, 1.0, G, theta, G * (1 + 1e-7));
  CHECK(std::abs(near.rho_eg - at.rho_eg) < 1e-5);
}

TEST_CASE("solid-angle phase") {
  const BerryPhase b = berry_phase_and_solid_angle(kPi / 4);
  CHECK(b.beta == doctest::Approx(-0.920151).epsilon(1e-6));
  CHECK(b.solid_angle == doctest::Approx(-2 * b.beta));
  CHECK(berry_phase_and_solid_angle(0.0).beta == 0.0);
  CHECK(berry_phase_and_solid_angle(kPi / 2).beta == doctest::Approx(-kPi));
  CHECK(berry_phase_and_solid_angle(kPi).solid_angle == doctest::Approx(4 * kPi));
  CHECK(loop_phase(kPi / 4, 0.1) == doctest::Approx(b.beta));
  CHECK(loop_phase(kPi / 4, -0.1) == doctest::Approx(-b.beta));
  CHECK(loop_phase(kPi / 4, 0.0) == 0.0);
  CHECK(testing::thrown_kind([] { berry_phase_and_solid_angle(4.0); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("first-order cycle approaches the exact coherence") {
  const double G = 1.0, theta = kPi / 3;
  for (double r : {0.02, 0.01}) {
    const cplx exact = coherence_exact(2 * kPi / r, 1.0, G, theta, r).rho_eg;
    CycleElements rot0;
    rot0.ag = 1.0;
    const CycleElements fo = cycle_first_order(rot0, G, theta, r);
    CHECK(std::abs(fo.ag - exact) < r * r * 10);
  }
}

TEST_CASE("first-order maps conserve the trace and flag fast loops") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uth(0.0, kPi), ur(-0.5, 0.5);
  for (int k = 0; k < 200; ++k) {
    const double theta = uth(rng), r = ur(rng);
    const CycleElements in = dfs_elements(testing::random_density(rng, 3).matrix(), theta, 0.0);
    const CycleElements out = cycle_first_order(in, 1.0, theta, r);
    CHECK(std::abs(out.trace() - in.trace()) < 1e-14);
    CHECK(out.beyond_regime == (std::abs(r) > kFirstOrderRegimeLimit));
    const CycleElements orig = original_frame_cycle(in, 1.0, theta, r);
    CHECK(std::abs(orig.trace() - in.trace()) < 1e-14);
  }
}

TEST_CASE("original-frame map carries the solid-angle phase") {
  CycleElements in;
  in.aa = 0.5;
  in.gg = 0.5;
  in.ag = 0.5;
  const double theta = kPi / 4, r = 0.05, x = kPi * 0.5 * r;
  const CycleElements out = original_frame_cycle(in, 1.0, theta, r);
  CHECK(std::arg(out.ag) == doctest::Approx(berry_phase_and_solid_angle(theta).beta));
  CHECK(std::abs(out.ag) == doctest::Approx(0.5 * std::exp(-x / 2)));
  CHECK(out.aa.real() == doctest::Approx(0.5 * (1 - x)));
  CHECK(out.ab.imag() == doctest::Approx(-0.5 * std::sin(theta) * r * 0.5));
}

TEST_CASE("visibility and its regime limit") {
  const PhysicalParams p = testing::cs_params();
  const double G = derive_reservoir(p).gamma_rate;
  CHECK(visibility(kPi / 4, testing::cs_phi_dot(), G) == doctest::Approx(0.9052902214726607).epsilon(1e-12));
  CHECK(visibility(0.0, 10.0, 1.0) == 1.0);
  CHECK(testing::thrown_kind([] { visibility(kPi / 2, 1.0, 1.0); }) == ErrorKind::kRegime);
}

TEST_CASE("spontaneous-emission penalty for the Cs set") {
  const PenaltyReport pen = spontaneous_penalty(testing::cs_params(), kPi / 4, testing::cs_phi_dot());
  CHECK(pen.P_b == doctest::Approx(9.088451557093415e-04).epsilon(1e-12));
  CHECK(pen.gamma_e * pen.T == doctest::Approx(4.366808992653273e-04).epsilon(1e-10));
  CHECK(pen.V_prime == doctest::Approx(0.99956).epsilon(1e-5));
  CHECK(testing::thrown_kind([] { spontaneous_penalty(testing::cs_params(), 1.0, 0.0); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("dark/bright elements of basis states") {
  const double theta = 1.2, phi = -0.4;
  const DfsBasis b = dfs_basis(theta, phi);
  const CycleElements d = dfs_elements(DensityMatrix::pure(b.dark).matrix(), theta, phi);
  CHECK(d.aa.real() == doctest::Approx(1.0));
  CHECK(std::abs(d.bb) < 1e-16);
  const CycleElements m = CycleElements::from_matrix(d.to_matrix());
  CHECK(std::abs(m.aa - d.aa) == 0.0);
}
