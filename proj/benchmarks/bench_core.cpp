#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "geophase/cavity.hpp"
#include "geophase/dynamics.hpp"
#include "geophase/model.hpp"

using namespace geophase;

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix random_hermitian(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = d(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = {d(rng), d(rng)};
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

DensityMatrix probe() { return default_probe_state(kPi / 4, 0.0); }

void BM_LindbladRhs(benchmark::State& state) {
  const CMatrix L = lindblad_op(1.0, kPi / 4, 0.3);
  const DensityMatrix rho = probe();
  for (auto _ : state) benchmark::DoNotOptimize(lindblad_rhs(rho, L));
}
BENCHMARK(BM_LindbladRhs);

void BM_RotatingRhs(benchmark::State& state) {
  const ReservoirParams r = ReservoirParams::direct(1.0, kPi / 4, 0.3);
  const DensityMatrix rho = probe();
  for (auto _ : state) benchmark::DoNotOptimize(rotating_rhs(rho, r, 0.0, 0.05));
}
BENCHMARK(BM_RotatingRhs);

void BM_JacobiEigenvalues(benchmark::State& state) {
  const CMatrix m = random_hermitian(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigenvalues(m));
}
BENCHMARK(BM_JacobiEigenvalues)->Arg(3)->Arg(6)->Arg(12);

void BM_CycleLab(benchmark::State& state) {
  const double rate = 1.0 / static_cast<double>(state.range(0));
  const ReservoirParams r = ReservoirParams::direct(1.0, kPi / 4, 0.0);
  const SteeringSchedule s = SteeringSchedule::constant_theta_linear_phi(kPi / 4, rate);
  const DensityMatrix rho0 = probe();
  for (auto _ : state) benchmark::DoNotOptimize(run_cycle(r, s, rho0));
}
BENCHMARK(BM_CycleLab)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CompositeRhs(benchmark::State& state) {
  const PhysicalParams p = PhysicalParams::from_total_rabi(1.0, 10.0, 1.0, kPi / 4, 5.0, 0.0);
  FockConfig f;
  f.n_max = static_cast<std::size_t>(state.range(0));
  const CompositeModel m(p, SteeringSchedule::constant_theta_linear_phi(kPi / 4, 0.01), f);
  const CMatrix rho = with_cavity_vacuum(probe(), f.n_max).matrix();
  CMatrix out(rho.dim());
  for (auto _ : state) {
    m.rhs(1.0, rho.data(), out.data());
    benchmark::DoNotOptimize(out.data().data());
  }
}
BENCHMARK(BM_CompositeRhs)->Arg(1)->Arg(3)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
