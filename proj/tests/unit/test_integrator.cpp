#include <doctest.h>

#include <cmath>
#include <vector>

#include "checks.hpp"
#include "geophase/integrator.hpp"
#include "geophase/model.hpp"

using namespace geophase;

namespace {

// y' = i w y, y(0) = 1.
OdeRhs rotation(double w) {
  return [w](double, std::span<const cplx> y, std::span<cplx> dy) { dy[0] = kI * w * y[0]; };
}

double rk4_error(double step) {
  OdeIntegrator integ(rotation(1.0), 1, IntegratorConfig::fixed(step));
  std::vector<cplx> y{1.0};
  integ.advance(y, 0.0, 2.0);
  return std::abs(y[0] - std::exp(2.0 * kI));
}

}  // namespace

TEST_CASE("adaptive integration of a rotation meets its tolerance") {
  OdeIntegrator integ(rotation(3.0), 1, IntegratorConfig::adaptive(1e-12, 1e-12));
  std::vector<cplx> y{1.0};
  integ.advance(y, 0.0, 10.0);
  CHECK(std::abs(y[0] - std::exp(30.0 * kI)) < 1e-9);
  CHECK(integ.stats().accepted > 0);
  CHECK(integ.stats().rhs_evals >= 6 * integ.stats().accepted);
}

TEST_CASE("classic RK4 converges at fourth order") {
  const double ratio = rk4_error(0.02) / rk4_error(0.01);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("decay with a coupled pair") {
  // y1' = -y1, y2' = y1 - 2 y2 -> y2 = e^{-t} - e^{-2t}.
  OdeRhs rhs = [](double, std::span<const cplx> y, std::span<cplx> dy) {
    dy[0] = -y[0];
    dy[1] = y[0] - 2.0 * y[1];
  };
  OdeIntegrator integ(rhs, 2, IntegratorConfig::adaptive(1e-13, 1e-13));
  std::vector<cplx> y{1.0, 0.0};
  integ.advance(y, 0.0, 1.5);
  CHECK(std::abs(y[1] - (std::exp(-1.5) - std::exp(-3.0))) < 1e-12);
}

TEST_CASE("step budget exhaustion is a numeric failure") {
  IntegratorConfig cfg = IntegratorConfig::adaptive(1e-12, 1e-12);
  cfg.max_steps = 5;
  OdeIntegrator integ(rotation(1.0), 1, cfg);
  std::vector<cplx> y{1.0};
  CHECK(testing::thrown_kind([&] { integ.advance(y, 0.0, 100.0); }) == ErrorKind::kNumeric);
}

TEST_CASE("configuration validation") {
  CHECK(testing::thrown_kind([] { IntegratorConfig::adaptive(-1.0, 1e-8).validate(); }) ==
        ErrorKind::kInvalidArgument);
  IntegratorConfig c;
  c.max_steps = 0;
  CHECK(testing::thrown_kind([&] { c.validate(); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("sampled density integration visits evenly spaced times") {
  const CMatrix L = lindblad_op(1.0, 1.0, 0.0);
  DensityGenerator gen = [&](double, const CMatrix& rho) { return lindblad_rhs(rho, L); };
  const DensityMatrix rho0 = DensityMatrix::pure(dfs_basis(1.0, 0.0).bright);
  std::vector<double> times;
  IntegrationStats stats;
  const DensityMatrix out = integrate_sampled(gen, rho0, 0.0, 2.0, 8, IntegratorConfig::adaptive(1e-12, 1e-12),
                                              [&](double t, const CMatrix&) { times.push_back(t); }, &stats);
  REQUIRE(times.size() == 9);
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(times[k] == doctest::Approx(0.25 * k));
  // Bright population decays as e^{-2 Gamma t}.
  CHECK(out(level::kG, level::kG).real() == doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-10));
  CHECK(stats.accepted > 0);
}

TEST_CASE("a generator that breaks the trace is reported, never renormalized") {
  DensityGenerator bad = [](double, const CMatrix& rho) { return CMatrix::identity(rho.dim()) * cplx(0.1); };
  const DensityMatrix rho0 = DensityMatrix::maximally_mixed(3);
  CHECK(testing::thrown_kind([&] { integrate(bad, rho0, 0.0, 1.0, IntegratorConfig::adaptive(1e-10, 1e-10)); }) ==
        ErrorKind::kNumeric);
}
