#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "polyapprox/polytope.hpp"
#include "polyapprox/sampling.hpp"

namespace polyapprox {

/// Result of one Monte Carlo trial. `value[k]` is indexed by the caller:
/// deviation index j for plain runs, 0/1 for the two arms of a paired run.
struct TrialOutcome {
  bool miss = false;
  std::array<double, 4> value{};
};

using TrialFn = std::function<TrialOutcome(int trial)>;

/// Reference loop: trials 0..count-1 in order on the calling thread.
void run_trials_serial(int count, const TrialFn& fn, std::span<TrialOutcome> out);

/// OpenMP loop over the same trials. Each trial writes only out[trial], so
/// the output is identical to the serial loop for any worker count. The
/// first exception thrown by any trial is rethrown after the loop.
void run_trials_parallel(int count, const TrialFn& fn, std::span<TrialOutcome> out,
                         int workers);

/// Number of logical processors seen by the OpenMP runtime.
int default_workers();

/// Inscribed trial: N boundary samples, hull, deviation for each j. The
/// stream is keyed by (seed, n_index, trial, attempt); a degenerate hull is
/// redrawn once with attempt = 1 and then reported as a miss.
class InscribedTrial {
 public:
  InscribedTrial(BodyPtr body, const DensitySpec& density, std::vector<int> js,
                 std::uint64_t seed);

  TrialOutcome operator()(int n_index, int n, int trial) const;

 private:
  BodyPtr body_;
  BoundarySampler sampler_;
  std::vector<int> js_;
  std::uint64_t seed_;
};

/// Circumscribed trial: N normals, supporting halfspaces, excess for each j.
/// Unbounded intersections are misses and are not redrawn.
class CircumscribedTrial {
 public:
  CircumscribedTrial(BodyPtr body, SphereDensity normals, std::vector<int> js,
                     std::uint64_t seed);

  TrialOutcome operator()(int n_index, int n, int trial) const;

 private:
  BodyPtr body_;
  SphereSampler sampler_;
  std::vector<int> js_;
  std::uint64_t seed_;
};

}  // namespace polyapprox
