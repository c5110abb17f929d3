#include <benchmark/benchmark.h>

#include "distq/design.hpp"
#include "distq/fisher.hpp"
#include "distq/pbpo.hpp"
#include "distq/rate.hpp"
#include "distq/simulate.hpp"

using namespace distq;

static void BM_ResponseCurveGaussian(benchmark::State& state) {
  const UniformGrid grid{-1.0, 1.0, static_cast<std::size_t>(state.range(0))};
  const auto q = BinaryQuantizer::sine();
  const auto w = NoiseModel::gaussian(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(response_curve(q, w, grid));
}
BENCHMARK(BM_ResponseCurveGaussian)->Arg(513)->Arg(2049);

static void BM_PosteriorFisher(benchmark::State& state) {
  const auto g = least_favorable_gstar(-1.0, 1.0);
  const auto prior = ParamPrior::uniform(-1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(posterior_fisher(g, prior, 10));
}
BENCHMARK(BM_PosteriorFisher);

static void BM_SolveEulerLagrange(benchmark::State& state) {
  const auto prior = ParamPrior::tabulated({-1.0, 0.0, 1.0}, {1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0});
  BvpOptions opt;
  opt.perturbations = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_euler_lagrange(prior, kDefaultNodes, opt));
}
BENCHMARK(BM_SolveEulerLagrange)->Unit(benchmark::kMillisecond);

static void BM_Deconvolve(benchmark::State& state) {
  const auto g = least_favorable_gstar(-1.0, 1.0);
  const auto w = NoiseModel::raised_cosine(0.0);
  for (auto _ : state) benchmark::DoNotOptimize(deconvolve_quantizer(g, w));
}
BENCHMARK(BM_Deconvolve)->Unit(benchmark::kMillisecond);

static void BM_BruteForce(benchmark::State& state) {
  RandomProblemSpec spec;
  spec.sensors = 3;
  spec.y_points = 5;
  Rng rng(1);
  const auto p = random_problem(spec, rng);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force(p, 1));
}
BENCHMARK(BM_BruteForce)->Unit(benchmark::kMillisecond);

static void BM_SimulateRun(benchmark::State& state) {
  SimConfig c;
  c.sensors = {static_cast<std::size_t>(state.range(0))};
  std::size_t run = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_run(c, 0, run++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateRun)->Arg(1024)->Arg(16384);

static void BM_BestMultilevel(benchmark::State& state) {
  const auto prior = ParamPrior::gaussian(0.0, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(best_multilevel_quantizer(prior, 1.0, 4));
}
BENCHMARK(BM_BestMultilevel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
