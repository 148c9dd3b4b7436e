#include <doctest.h>

#include <cmath>

#include "checks.hpp"
#include "geophase/analytic.hpp"
#include "geophase/ramsey.hpp"
#include "oracles.hpp"

using namespace geophase;
using testing::kPi;

TEST_CASE("analytic fringe at the Cs operating point") {
  const double G = derive_reservoir(testing::cs_params()).gamma_rate;
  const RamseyOutcome o = ramsey_analytic(G, kPi / 4, testing::cs_phi_dot());
  CHECK(o.P_g == doctest::Approx(0.2258329165931299).epsilon(1e-12));
  CHECK(o.P_g + o.P_e == doctest::Approx(1.0));
  CHECK(o.P_f == 0.0);
  CHECK(o.alpha == doctest::Approx((std::cos(kPi / 4) + 1.5) * kPi));
  CHECK(o.mode == RamseyMode::kAnalytic);
  CHECK(to_string(o.mode) == "analytic");
}

TEST_CASE("fringe limits") {
  // No motion: beta = 0, no population in g after the pulses.
  const RamseyOutcome still = ramsey_analytic(1.0, kPi / 3, 0.0);
  CHECK(still.P_g == doctest::Approx(0.0));
  // theta = pi/2: beta = -pi, P_g = (1 + V)/2.
  const RamseyOutcome half = ramsey_analytic(1.0, kPi / 2, 0.01);
  CHECK(half.P_g == doctest::Approx(0.5 * (1 + half.V)));
  CHECK(testing::thrown_kind([] { ramsey_analytic(1.0, kPi / 2, 1.0); }) == ErrorKind::kRegime);
}

TEST_CASE("pulses are unitary and map the dark/bright pair onto e and f") {
  const double theta = 1.1;
  const RamseyPulses p = build_pulses(theta);
  CHECK(max_abs_diff(p.U1 * p.U1.adjoint(), CMatrix::identity(3)) < 1e-15);
  CHECK(max_abs_diff(p.U2 * p.U2.adjoint(), CMatrix::identity(3)) < 1e-15);
  const DfsBasis b = dfs_basis(theta, 0.0);
  const CVector d = p.U1 * b.dark.amplitudes(), br = p.U1 * b.bright.amplitudes();
  CHECK(std::abs(d[level::kE] - 1.0) < 1e-15);
  CHECK(std::abs(br[level::kF] - 1.0) < 1e-15);
  const CVector g = p.U2 * CVector{0.0, 0.0, 1.0};
  CHECK(std::abs(g[level::kE] - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(g[level::kG] - 1 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("ideal interferometer: P_g = (1 - cos beta)/2 for a pure phase") {
  for (double beta : {0.0, 0.7, -2.0, kPi}) {
    const double theta = 0.9;
    const CVector d = dfs_basis(theta, 0.0).dark.amplitudes();
    const cplx w = std::exp(kI * beta);
    const CVector psi{w * d[0] / std::sqrt(2.0), w * d[1] / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    const RamseyPulses p = build_pulses(theta);
    const CVector out = p.U2 * (p.U1 * psi);
    CHECK(std::norm(out[level::kG]) == doctest::Approx(0.5 * (1 - std::cos(beta))));
  }
}

TEST_CASE("initial superposition") {
  const DensityMatrix rho = initial_superposition(0.7);
  const CycleElements el = dfs_elements(rho.matrix(), 0.7, 0.0);
  CHECK(el.ag.real() == doctest::Approx(0.5));
  CHECK(el.aa.real() == doctest::Approx(0.5));
}

TEST_CASE("first-order state after the pulses reproduces the fringe") {
  const double G = 1.0, theta = kPi / 3;
  for (double r : {0.04, 0.02}) {
    const RamseyStates s = ramsey_states(G, theta, r);
    const RamseyOutcome o = ramsey_analytic(G, theta, r);
    CHECK(s.after_cycle.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.after_pulses(level::kG, level::kG).real() == doctest::Approx(o.P_g).epsilon(5 * r * r));
    CHECK(norm(s.phi) == doctest::Approx(1.0));
    CHECK(norm(s.phi_prime) == doctest::Approx(1.0));
  }
}

TEST_CASE("numeric protocol tracks the analytic fringe") {
  const double theta = kPi / 3, r = 0.01;
  const auto res = ReservoirParams::direct(1.0, theta, 0.0);
  CycleOptions o;
  o.integrator = IntegratorConfig::adaptive(1e-12, 1e-12);
  const RamseyOutcome num = run_ramsey_numeric(res, SteeringSchedule::constant_theta_linear_phi(theta, r), o);
  const RamseyOutcome an = ramsey_analytic(1.0, theta, r);
  CHECK(num.mode == RamseyMode::kNumeric);
  CHECK(std::abs(num.P_g - an.P_g) < 2e-3);
  CHECK(num.P_g + num.P_e + num.P_f == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(wrap_phase(num.beta_used - an.beta_used)) < 1e-3);
  CHECK(num.V == doctest::Approx(an.V).epsilon(1e-3));
  CHECK(testing::thrown_kind([&] {
          run_ramsey_numeric(res, SteeringSchedule::constant_theta_linear_phi(theta, r, 0.5), o);
        }) == ErrorKind::kInvalidArgument);
}
