// Serial reference loop against the OpenMP loop on the same trial kernels.
// Arguments: N, then worker count (0 selects the serial loop).
#include <benchmark/benchmark.h>

#include <vector>

#include "polyapprox/trial_kernels.hpp"

using namespace polyapprox;

namespace {

constexpr int kTrials = 64;

void run(benchmark::State& state, const TrialFn& fn) {
  const int workers = static_cast<int>(state.range(1));
  std::vector<TrialOutcome> out(kTrials);
  for (auto _ : state) {
    if (workers == 0) {
      run_trials_serial(kTrials, fn, out);
    } else {
      run_trials_parallel(kTrials, fn, out, workers);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * kTrials);
}

void BM_inscribed_disc(benchmark::State& state) {
  const BodyPtr ball = make_ball(1.0);
  const InscribedTrial trial(ball, make_uniform_density(*ball), {1, 2}, 1);
  const int n = static_cast<int>(state.range(0));
  run(state, [&](int t) { return trial(0, n, t); });
}

void BM_inscribed_ellipsoid(benchmark::State& state) {
  const BodyPtr e = make_ellipsoid(1.0, 1.0, 1.5);
  const InscribedTrial trial(e, make_optimal_density(*e, OptimalKind::volume()), {1, 2, 3}, 1);
  const int n = static_cast<int>(state.range(0));
  run(state, [&](int t) { return trial(0, n, t); });
}

void BM_circumscribed_sphere(benchmark::State& state) {
  const BodyPtr s = make_ball(1.0, 3);
  const CircumscribedTrial trial(s, uniform_sphere_density(3), {1, 3}, 1);
  const int n = static_cast<int>(state.range(0));
  run(state, [&](int t) { return trial(0, n, t); });
}

void args(benchmark::internal::Benchmark* b) {
  const int procs = default_workers();
  for (int n : {256, 2048}) {
    b->Args({n, 0});
    b->Args({n, 1});
    if (procs > 1) b->Args({n, procs});
  }
  b->ArgNames({"N", "workers"})->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_inscribed_disc)->Apply(args);
BENCHMARK(BM_inscribed_ellipsoid)->Apply(args);
BENCHMARK(BM_circumscribed_sphere)->Apply(args);

BENCHMARK_MAIN();
