// Parallel lambda loop vs the serial reference.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "lhvsim/estimator.hpp"
#include "lhvsim/models.hpp"

using namespace lhvsim;

namespace {

struct Fixture {
  ModelPtr model;
  TimeGrid grid_a, grid_b;
};

Fixture make_fixture(std::size_t n_times) {
  Rng rng(5, streams::kGridA);
  auto ga = make_time_grid(n_times, 1.0, rng);
  auto gb = make_time_grid(n_times, 1.0, rng);
  return {model_paper_constrained(0.5, 0.5), std::move(ga), std::move(gb)};
}

void BM_LambdaLoopParallel(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<std::size_t>(state.range(0)));
  const auto m = static_cast<std::size_t>(state.range(1));
  omp_set_num_threads(static_cast<int>(state.range(2)));
  const Direction z = Direction::z_axis();
  for (auto _ : state) {
    auto r = run_lambda_loop(*f.model, z, z, f.grid_a, f.grid_b, m, 1, Variant::standard);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m) * state.range(0) * 2);
}

void BM_LambdaLoopSerial(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<std::size_t>(state.range(0)));
  const auto m = static_cast<std::size_t>(state.range(1));
  const Direction z = Direction::z_axis();
  for (auto _ : state) {
    auto r = run_lambda_loop_serial(*f.model, z, z, f.grid_a, f.grid_b, m, 1, Variant::standard);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m) * state.range(0) * 2);
}

void BM_GeneralCoupled(benchmark::State& state) {
  Rng rng(5, streams::kGridA);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto [early, late] = make_ordered_grids(n, 1.0, rng);
  const auto model = model_paper_constrained(0.5, 0.5, true);
  const Direction z = Direction::z_axis();
  for (auto _ : state) {
    auto r = run_lambda_loop(*model, z, z, early, late, 1000, 1, Variant::general);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * 1000 * static_cast<int64_t>(n * n));
}

}  // namespace

BENCHMARK(BM_LambdaLoopSerial)->Args({1000, 10000})->Args({10000, 10000})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LambdaLoopParallel)
    ->ArgsProduct({{1000, 10000}, {10000}, {1, 2, 4}})
    ->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeneralCoupled)->Arg(100)->Arg(200)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
