// Neighbor-index kernels against the brute-force serial references, and the
// thread scaling of a full global test.

#include <benchmark/benchmark.h>

#include "mwk/hypothesis_tests.hpp"
#include "mwk/kernels.hpp"
#include "mwk/simulate.hpp"

namespace {

mwk::MarkedPattern pattern(std::int64_t n) {
  mwk::Rng rng = mwk::make_rng(1);
  const auto p = mwk::gen_binomial(static_cast<std::size_t>(n), mwk::Window::unit_square(), rng);
  return mwk::assign_marks_uniform(p, rng);
}

void BM_NeighborSumsIndexed(benchmark::State& state) {
  const auto p = pattern(state.range(0));
  const mwk::RGrid grid = mwk::default_rgrid(p.window());
  for (auto _ : state) {
    const mwk::NeighborIndex index(p, grid.rmax());
    benchmark::DoNotOptimize(mwk::kernels::neighbor_sums(index, grid, p.marks()));
  }
  state.SetComplexityN(state.range(0));
}

void BM_NeighborSumsSerial(benchmark::State& state) {
  const auto p = pattern(state.range(0));
  const mwk::RGrid grid = mwk::default_rgrid(p.window());
  for (auto _ : state) {
    benchmark::DoNotOptimize(mwk::kernels::serial::neighbor_sums(p.points(), grid, p.marks()));
  }
  state.SetComplexityN(state.range(0));
}

void BM_SmoothedIndexed(benchmark::State& state) {
  const auto p = pattern(state.range(0));
  const mwk::RGrid grid = mwk::default_rgrid(p.window());
  const double b = 0.1 * grid.rmax();
  for (auto _ : state) {
    const mwk::NeighborIndex index(p, grid.rmax() + b);
    benchmark::DoNotOptimize(mwk::kernels::smoothed_mark_products(index, grid, p.marks(), b));
  }
}

void BM_SmoothedSerial(benchmark::State& state) {
  const auto p = pattern(state.range(0));
  const mwk::RGrid grid = mwk::default_rgrid(p.window());
  const double b = 0.1 * grid.rmax();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mwk::kernels::serial::smoothed_mark_products(p.points(), grid, p.marks(), b));
  }
}

void BM_GlobalTestThreads(benchmark::State& state) {
  const auto p = pattern(200);
  mwk::TestConfig cfg;
  cfg.replicates = 99;
  const int before = mwk::kernels::max_threads();
  mwk::kernels::set_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mwk::global_test(p, mwk::Hypothesis::H2, cfg));
  }
  mwk::kernels::set_threads(before);
}

}  // namespace

BENCHMARK(BM_NeighborSumsIndexed)->RangeMultiplier(4)->Range(64, 4096)->Complexity();
BENCHMARK(BM_NeighborSumsSerial)->RangeMultiplier(4)->Range(64, 4096)->Complexity();
BENCHMARK(BM_SmoothedIndexed)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_SmoothedSerial)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_GlobalTestThreads)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

BENCHMARK_MAIN();
