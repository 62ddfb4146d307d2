#include "polyapprox/trial_kernels.hpp"

#include <exception>

#include <omp.h>

#include "polyapprox/errors.hpp"

namespace polyapprox {

void run_trials_serial(int count, const TrialFn& fn, std::span<TrialOutcome> out) {
  for (int t = 0; t < count; ++t) out[t] = fn(t);
}

void run_trials_parallel(int count, const TrialFn& fn, std::span<TrialOutcome> out,
                         int workers) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
  for (int t = 0; t < count; ++t) {
    try {
      out[t] = fn(t);
    } catch (...) {
#pragma omp critical(polyapprox_trial_failure)
      {
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

int default_workers() { return omp_get_num_procs(); }

InscribedTrial::InscribedTrial(BodyPtr body, const DensitySpec& density, std::vector<int> js,
                               std::uint64_t seed)
    : body_(body), sampler_(body, density), js_(std::move(js)), seed_(seed) {}

TrialOutcome InscribedTrial::operator()(int n_index, int n, int trial) const {
  TrialOutcome out;
  std::vector<Vec3> points;
  for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
    RngStream rng(seed_, {static_cast<std::uint64_t>(n_index),
                          static_cast<std::uint64_t>(trial), attempt});
    sampler_.sample_positions(n, rng, points);
    Polytope hull;
    try {
      hull = hull_of(body_->dimension(), points);
    } catch (const DegenerateHullError&) {
      continue;
    }
    for (int j : js_) out.value[j] = deviation(*body_, hull, j, Side::inscribed).value;
    return out;
  }
  out.miss = true;
  return out;
}

CircumscribedTrial::CircumscribedTrial(BodyPtr body, SphereDensity normals,
                                       std::vector<int> js, std::uint64_t seed)
    : body_(std::move(body)), sampler_(std::move(normals)), js_(std::move(js)), seed_(seed) {}

TrialOutcome CircumscribedTrial::operator()(int n_index, int n, int trial) const {
  TrialOutcome out;
  std::vector<Vec3> normals;
  RngStream rng(seed_, {static_cast<std::uint64_t>(n_index),
                        static_cast<std::uint64_t>(trial), 0});
  sampler_.sample(n, rng, normals);
  const CircumscribeResult q = circumscribe(*body_, normals);
  if (!q.bounded()) {
    out.miss = true;
    return out;
  }
  for (int j : js_) {
    out.value[j] = deviation(*body_, *q.polytope, j, Side::circumscribed).value;
  }
  return out;
}

}  // namespace polyapprox
