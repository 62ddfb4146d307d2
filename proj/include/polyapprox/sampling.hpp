#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polyapprox/bodies.hpp"
#include "polyapprox/rng.hpp"

namespace polyapprox {

/// Boundary density c * kappa^alpha * H_m^beta with respect to dS.
struct DensitySpec {
  double alpha = 0.0;
  int m = 0;
  double beta = 0.0;
  double norm_constant = 1.0;  // 1 / integral of kappa^alpha H_m^beta dS
  std::string label;

  double unnormalized(const BoundaryPoint& bp) const;
  double operator()(const BoundaryPoint& bp) const {
    return norm_constant * unnormalized(bp);
  }
};

/// Which optimal density: volume (f_V), mean width (f_W) or the minimizer
/// of the j-th intrinsic volume functional.
struct OptimalKind {
  enum class Target { volume, mean_width, intrinsic };
  Target target = Target::volume;
  int j = 0;

  static OptimalKind volume() { return {Target::volume, 0}; }
  static OptimalKind mean_width() { return {Target::mean_width, 0}; }
  static OptimalKind intrinsic(int j) { return {Target::intrinsic, j}; }
};

/// Normalized kappa^alpha H_m^beta on `body`. Throws InputError for m outside
/// 0..d-1 and NumericalFailure if the density vanishes or blows up.
DensitySpec make_density(const ConvexBody& body, double alpha, int m, double beta,
                         std::string label = "custom");
DensitySpec make_uniform_density(const ConvexBody& body);
DensitySpec make_optimal_density(const ConvexBody& body, OptimalKind kind);

/// Density grammar: "opt:volume", "opt:meanwidth", "opt:intrinsic:j=1",
/// "uniform", "custom:alpha=0.25,m=1,beta=0.5".
DensitySpec parse_density(const ConvexBody& body, const std::string& text);

/// Integral of the density over the boundary (1 for a normalized spec).
double total_mass(const ConvexBody& body, const DensitySpec& spec);

struct SampleBatch {
  std::string body;
  std::string density;
  int count = 0;
  std::vector<BoundaryPoint> points;
  std::uint64_t stream = 0;
};

/// Rejection sampler for an arbitrary positive density on the boundary.
///
/// Proposals are uniform in parameter space and are accepted with
/// probability density(x) * area_element / envelope. The envelope is 1.05
/// times the maximum over a 4096-point parameter grid; a proposal exceeding
/// it raises NumericalFailure.
class BoundarySampler {
 public:
  using DensityFn = std::function<double(const BoundaryPoint&)>;

  BoundarySampler(BodyPtr body, DensityFn density, std::string label);
  BoundarySampler(BodyPtr body, const DensitySpec& spec);

  SampleBatch sample(int n, RngStream& rng) const;
  /// Draws only positions; avoids keeping full boundary records.
  void sample_positions(int n, RngStream& rng, std::vector<Vec3>& out) const;

  double envelope() const { return envelope_; }
  const ConvexBody& body() const { return *body_; }

 private:
  BoundaryPoint draw(RngStream& rng) const;

  BodyPtr body_;
  DensityFn density_;
  std::string label_;
  double envelope_ = 0.0;
};

SampleBatch sample_boundary(const BodyPtr& body, const DensitySpec& spec, int n,
                            RngStream& rng);

/// Density on the unit sphere S^{d-1} with respect to spherical measure.
struct SphereDensity {
  int dim = 2;
  std::string label = "uniform";
  std::function<double(Vec3)> value;  // empty means uniform

  double operator()(Vec3 u) const;
};

SphereDensity uniform_sphere_density(int d);
/// Push-forward of a boundary density on `body` under its Gauss map:
/// phi(u) = rho(x(u)) / kappa(x(u)).
SphereDensity pushforward_density(BodyPtr body, DensitySpec spec);

/// Rejection sampler for normals; same envelope rules as BoundarySampler.
class SphereSampler {
 public:
  explicit SphereSampler(SphereDensity density);
  void sample(int n, RngStream& rng, std::vector<Vec3>& out) const;

 private:
  BoundarySampler inner_;
};

std::vector<Vec3> sample_sphere_normals(const SphereDensity& density, int n,
                                        RngStream& rng);

}  // namespace polyapprox
