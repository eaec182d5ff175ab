#include <benchmark/benchmark.h>

#include <random>

#include "isda/estimation.hpp"
#include "isda/mallows.hpp"
#include "isda/moments.hpp"

using namespace isda;
using L = LatentDistribution;

namespace {

std::vector<double> triangular_draws(std::size_t n, double m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(1e-12, 1.0);
  const auto d = L::triangular(m);
  std::vector<double> out(n);
  for (auto& x : out) x = d.quantile(unif(rng));
  return out;
}

IntervalFrame random_frame(std::size_t n, std::size_t p, std::vector<L> latents) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> c(-10, 10), r(0.1, 5);
  std::vector<std::string> names;
  for (std::size_t v = 0; v < p; ++v) names.push_back("x" + std::to_string(v));
  std::vector<std::vector<Interval>> rows(n);
  for (auto& row : rows)
    for (std::size_t v = 0; v < p; ++v) row.push_back(Interval::from_centre_range(c(rng), r(rng)));
  latents.resize(p, L::uniform());
  return IntervalFrame(names, rows, latents);
}

void BM_CrossMomentClosedForm(benchmark::State& state) {
  const auto a = L::uniform(), b = L::triangular(0.0);
  for (auto _ : state) benchmark::DoNotOptimize(cross_moment(a, b));
}
BENCHMARK(BM_CrossMomentClosedForm);

void BM_CrossMomentQuadrature(benchmark::State& state) {
  const auto a = L::shifted_beta(0.44, 2.15), b = L::triangular(-0.34);
  for (auto _ : state) benchmark::DoNotOptimize(cross_moment_quadrature(a, b));
}
BENCHMARK(BM_CrossMomentQuadrature)->Unit(benchmark::kMillisecond);

void BM_CrossMomentKde(benchmark::State& state) {
  const auto a = fit_kde(triangular_draws(5000, 0.3, 1)), b = L::shifted_beta(1.08, 2.65);
  for (auto _ : state) benchmark::DoNotOptimize(cross_moment(a, b));
}
BENCHMARK(BM_CrossMomentKde)->Unit(benchmark::kMillisecond);

void BM_FitKde(benchmark::State& state) {
  const auto u = triangular_draws(static_cast<std::size_t>(state.range(0)), -0.4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(fit_kde(u));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitKde)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_DistanceMatrix(benchmark::State& state) {
  const auto f = random_frame(static_cast<std::size_t>(state.range(0)), 4,
                              {L::triangular(0.2), L::uniform(), L::shifted_beta(0.44, 2.15), L::triangular(0.0)});
  const auto threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(distance_matrix(f, threads));
}
BENCHMARK(BM_DistanceMatrix)->Args({200, 1})->Args({200, 4})->Args({1000, 4})->Unit(benchmark::kMillisecond);

void BM_SymbolicCovariance(benchmark::State& state) {
  const auto f = random_frame(static_cast<std::size_t>(state.range(0)), 8,
                              {L::triangular(-0.14), L::triangular(0.0), L::triangular(-0.34), L::triangular(-0.58),
                               L::triangular(-0.69), L::triangular(-0.34), L::triangular(-0.17), L::triangular(0.0)});
  for (auto _ : state) benchmark::DoNotOptimize(symbolic_covariance(f));
}
BENCHMARK(BM_SymbolicCovariance)->Arg(564)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
