// Serial vs OpenMP kernels. The second argument of every benchmark selects
// the schedule: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "ginv/assemble.hpp"
#include "ginv/block_init.hpp"
#include "ginv/instance.hpp"
#include "ginv/kernels.hpp"
#include "ginv/search_gi.hpp"

using namespace ginv;

namespace {

kernels::Exec exec_of(const benchmark::State& state) {
  return state.range(1) ? kernels::Exec::parallel : kernels::Exec::serial;
}

DenseMatrix random_dense(Index m, Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DenseMatrix a(m, n);
  for (auto& x : a.data()) x = 2.0 * uniform01(rng) - 1.0;
  return a;
}

DenseMatrix instance(Index n, Index r) {
  InstanceSpec s;
  s.m = s.n = n;
  s.r = r;
  s.density = 1.0;
  s.seed = 17;
  return generate(s);
}

void BM_gemm(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto a = random_dense(n, n, 1);
  const auto b = random_dense(n, n, 2);
  DenseMatrix c(n, n);
  for (auto _ : state) {
    kernels::gemm(exec_of(state), a, b, c);
    benchmark::DoNotOptimize(c.data().data());
  }
}

void BM_product_asymmetry(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto ft = random_dense(50, n, 3);
  const auto gt = random_dense(50, n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::product_asymmetry(exec_of(state), ft, gt));
}

void BM_project_out(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto base = random_dense(n, n, 5);
  std::vector<double> q(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> norms(n);
  const std::vector<char> skip(n, 0);
  for (auto _ : state) {
    state.PauseTiming();
    auto res = base;
    state.ResumeTiming();
    kernels::project_out(exec_of(state), res, q, norms, skip);
    benchmark::DoNotOptimize(norms.data());
  }
}

void BM_greedy(benchmark::State& state) {
  const auto a = instance(static_cast<Index>(state.range(0)), 20);
  for (auto _ : state) benchmark::DoNotOptimize(greedy(a, 20, exec_of(state)));
}

void BM_fi_det(benchmark::State& state) {
  const auto a = instance(static_cast<Index>(state.range(0)), 20);
  const auto b0 = greedy_light(a, 20);
  SearchConfig cfg;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(fi_det(a, b0, cfg, true));
}

void BM_certificate(benchmark::State& state) {
  const auto a = instance(static_cast<Index>(state.range(0)), 20);
  const auto b = fi_det(a, greedy_light(a, 20)).block;
  for (auto _ : state) benchmark::DoNotOptimize(max_single_swap_ratio(a, b, exec_of(state)));
}

void BM_check_penrose(benchmark::State& state) {
  const auto a = instance(static_cast<Index>(state.range(0)), 20);
  const auto h = assemble_gi(a, fi_det(a, greedy_light(a, 20)).block);
  for (auto _ : state) benchmark::DoNotOptimize(check_penrose(a, h, 1e-8, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_gemm)->ArgsProduct({{128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_product_asymmetry)->ArgsProduct({{500, 2000}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_project_out)->ArgsProduct({{500, 1000}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_greedy)->ArgsProduct({{200, 400}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fi_det)->ArgsProduct({{200, 400}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_certificate)->ArgsProduct({{200}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_penrose)->ArgsProduct({{200, 400}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
