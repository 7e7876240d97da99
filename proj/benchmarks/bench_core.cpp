#include <benchmark/benchmark.h>

#include <random>

#include "evolflow/evolflow.hpp"

namespace {

using namespace evolflow;

Matrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n);
  for (auto& z : m.entries()) z = u(rng);
  return m;
}

void BM_Expm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix x = random_matrix(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(expm(x));
}
BENCHMARK(BM_Expm)->RangeMultiplier(2)->Range(2, 32);

void BM_ExpmLargeNorm(benchmark::State& state) {
  const Matrix x = 40.0 * random_matrix(6, 2);
  for (auto _ : state) benchmark::DoNotOptimize(expm(x));
}
BENCHMARK(BM_ExpmLargeNorm);

void BM_Det(benchmark::State& state) {
  const Matrix m = random_matrix(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(det(m));
}
BENCHMARK(BM_Det)->RangeMultiplier(2)->Range(2, 32);

void BM_SpectralRadius(benchmark::State& state) {
  const Matrix m = random_matrix(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_radius_estimate(m));
}
BENCHMARK(BM_SpectralRadius)->RangeMultiplier(2)->Range(2, 32);

void BM_IntegrateRight(benchmark::State& state) {
  const Matrix x = random_matrix(4, 5);
  const Generator gen = [x](double) { return x; };
  const IntegratorConfig cfg{1.0 / static_cast<double>(state.range(0)), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(integrate_right(gen, Matrix::identity(4), cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateRight)->Arg(100)->Arg(1000);

void BM_CommutingMagnus(benchmark::State& state) {
  const Matrix q = flip_flop_rate(1.0).q();
  const Generator gen = [q](double t) { return std::cos(t) * q; };
  for (auto _ : state) benchmark::DoNotOptimize(commuting_magnus(gen, Matrix::identity(2), 1.5));
}
BENCHMARK(BM_CommutingMagnus);

void BM_ChapmanKolmogorov(benchmark::State& state) {
  std::mt19937_64 rng(6);
  const auto q = random_rate_matrix(6, rng);
  const std::vector<double> grid{0.0, 0.3, 0.7, 1.1};
  for (auto _ : state) benchmark::DoNotOptimize(axioms_report(q, grid, 1e-9));
}
BENCHMARK(BM_ChapmanKolmogorov);

}  // namespace

BENCHMARK_MAIN();
