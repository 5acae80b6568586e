#include <benchmark/benchmark.h>

#include <random>

#include "gmeopt/harness.hpp"
#include "gmeopt/losses.hpp"
#include "gmeopt/proxfns.hpp"
#include "gmeopt/solver.hpp"

using namespace gmeopt;

static void BM_ProxL1(benchmark::State& state) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  Vec x(state.range(0));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = d(gen);
  for (auto _ : state) benchmark::DoNotOptimize(prox_l1(x, 0.3));
}
BENCHMARK(BM_ProxL1)->Arg(150)->Arg(256)->Arg(4096);

static void BM_DctApply(benchmark::State& state) {
  const LinearMap dct = LinearMap::dct(state.range(0));
  Vec u = Vec::LinSpaced(state.range(0), -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dct.apply(u));
}
BENCHMARK(BM_DctApply)->Arg(256)->Arg(1024);

static void BM_OperatorNorm_Difference(benchmark::State& state) {
  const LinearMap d = LinearMap::first_difference(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm(d, 1e-8, 100000));
}
BENCHMARK(BM_OperatorNorm_Difference)->Arg(150)->Arg(1024);

static void BM_GaussianHazard(benchmark::State& state) {
  double t = -10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_hazard(t, 0.1));
    t = t < 10.0 ? t + 1e-3 : -10.0;
  }
}
BENCHMARK(BM_GaussianHazard);

static void BM_ApplyT_Poisson(benchmark::State& state) {
  const Vec xstar = gen_piecewise_constant(state.range(0), 3);
  const Vec y = sample_poisson(xstar, 4);
  PoissonInstance inst = make_poisson_instance(y, 1.0, 0.99, 5.0, 40.0);
  const SolverParams prm = default_params(inst.problem);
  SolverState h = initial_state(inst.problem);
  for (auto _ : state) {
    h = apply_T(inst.problem, prm, h);
    benchmark::DoNotOptimize(h.x.data());
  }
}
BENCHMARK(BM_ApplyT_Poisson)->Arg(150);

static void BM_ApplyT_Declip(benchmark::State& state) {
  const Vec xstar = gen_dct_sparse(state.range(0), 16, 5);
  const double sigma = snr_to_sigma(xstar, 10.0);
  const Vec y = clip_observe(xstar, 0.4, sigma, 6);
  DeclipInstance inst = make_declip_instance(y, 0.4, sigma, 10.0 * sigma, 10.0, 0.99);
  const SolverParams prm = default_params(inst.problem);
  SolverState h = initial_state(inst.problem);
  for (auto _ : state) {
    h = apply_T(inst.problem, prm, h);
    benchmark::DoNotOptimize(h.x.data());
  }
}
BENCHMARK(BM_ApplyT_Declip)->Arg(256);

BENCHMARK_MAIN();
