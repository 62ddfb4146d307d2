#include "polyapprox/sampling.hpp"

#include <cmath>

#include "polyapprox/errors.hpp"
#include "polyapprox/text.hpp"

namespace polyapprox {

namespace {

constexpr int kEnvelopeGrid = 4096;
constexpr double kEnvelopeSafety = 1.05;

}  // namespace

double DensitySpec::unnormalized(const BoundaryPoint& bp) const {
  double v = alpha == 0.0 ? 1.0 : std::pow(bp.kappa, alpha);
  if (beta != 0.0 && m != 0) v *= std::pow(bp.symmetric_curvature(m), beta);
  return v;
}

DensitySpec make_density(const ConvexBody& body, double alpha, int m, double beta,
                         std::string label) {
  const int d = body.dimension();
  if (m < 0 || m > d - 1) {
    throw InputError("density: m = " + std::to_string(m) + " outside 0.." +
                     std::to_string(d - 1));
  }
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InputError("density: exponents must be finite");
  }
  DensitySpec spec{alpha, m, beta, 1.0, std::move(label)};
  for (const Parameter& p : parameter_grid(body, 256)) {
    const double v = spec.unnormalized(body.boundary(p));
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw NumericalFailure("density " + spec.label + " is not strictly positive");
    }
  }
  const double mass = integrate_boundary(
      body, [&](const BoundaryPoint& bp) { return spec.unnormalized(bp); }, 1e-12);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw NumericalFailure("density " + spec.label + " cannot be normalized");
  }
  spec.norm_constant = 1.0 / mass;
  return spec;
}

DensitySpec make_uniform_density(const ConvexBody& body) {
  DensitySpec spec{0.0, 0, 0.0, 1.0 / body.surface_measure(), "uniform"};
  return spec;
}

DensitySpec make_optimal_density(const ConvexBody& body, OptimalKind kind) {
  const int d = body.dimension();
  const double dd = d;
  switch (kind.target) {
    case OptimalKind::Target::volume:
      return make_density(body, 1.0 / (dd + 1.0), 0, 0.0, "opt:volume");
    case OptimalKind::Target::mean_width:
      return make_density(body, dd / (dd + 1.0), 0, 0.0, "opt:meanwidth");
    case OptimalKind::Target::intrinsic:
      if (kind.j < 1 || kind.j > d) {
        throw InputError("opt:intrinsic: j = " + std::to_string(kind.j) +
                         " outside 1.." + std::to_string(d));
      }
      return make_density(body, 1.0 / (dd + 1.0), d - kind.j, (dd - 1.0) / (dd + 1.0),
                          "opt:intrinsic:j=" + std::to_string(kind.j));
  }
  throw InputError("unknown optimal density kind");
}

DensitySpec parse_density(const ConvexBody& body, const std::string& text) {
  if (text == "uniform") return make_uniform_density(body);
  if (text == "opt:volume") return make_optimal_density(body, OptimalKind::volume());
  if (text == "opt:meanwidth") {
    return make_optimal_density(body, OptimalKind::mean_width());
  }
  const std::string intrinsic = "opt:intrinsic:";
  if (text.rfind(intrinsic, 0) == 0) {
    const auto kv = parse_key_values(text.substr(intrinsic.size()), {"j"});
    if (!kv.count("j")) throw InputError("opt:intrinsic needs j");
    const double j = kv.at("j");
    if (j != std::floor(j)) throw InputError("opt:intrinsic: j must be an integer");
    return make_optimal_density(body, OptimalKind::intrinsic(static_cast<int>(j)));
  }
  const auto [kind, rest] = split_kind(text);
  if (kind == "custom") {
    const auto kv = parse_key_values(rest, {"alpha", "m", "beta"});
    const double alpha = kv.count("alpha") ? kv.at("alpha") : 0.0;
    const double m = kv.count("m") ? kv.at("m") : 0.0;
    const double beta = kv.count("beta") ? kv.at("beta") : 0.0;
    if (m != std::floor(m)) throw InputError("custom density: m must be an integer");
    return make_density(body, alpha, static_cast<int>(m), beta, text);
  }
  throw InputError("unknown density '" + text + "'");
}

double total_mass(const ConvexBody& body, const DensitySpec& spec) {
  return integrate_boundary(body, [&](const BoundaryPoint& bp) { return spec(bp); },
                            1e-12);
}

// ------------------------------------------------------------------ sampler --

BoundarySampler::BoundarySampler(BodyPtr body, DensityFn density, std::string label)
    : body_(std::move(body)), density_(std::move(density)), label_(std::move(label)) {
  double peak = 0.0;
  for (const Parameter& p : parameter_grid(*body_, kEnvelopeGrid)) {
    const BoundaryPoint bp = body_->boundary(p);
    peak = std::max(peak, density_(bp) * bp.area_element);
  }
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    throw NumericalFailure("sampler: density " + label_ + " has no finite positive peak");
  }
  envelope_ = kEnvelopeSafety * peak;
}

BoundarySampler::BoundarySampler(BodyPtr body, const DensitySpec& spec)
    : BoundarySampler(std::move(body), [spec](const BoundaryPoint& bp) { return spec(bp); },
                      spec.label) {}

BoundaryPoint BoundarySampler::draw(RngStream& rng) const {
  const Parameter extent = body_->parameter_extent();
  const bool planar = body_->dimension() == 2;
  for (;;) {
    Parameter p{rng.uniform() * extent.t, planar ? 0.0 : rng.uniform() * extent.s};
    BoundaryPoint bp = body_->boundary(p);
    const double g = density_(bp) * bp.area_element;
    if (!(g <= envelope_)) {
      throw NumericalFailure("sampler: envelope violated for density " + label_ +
                             " on " + body_->name());
    }
    if (rng.uniform() * envelope_ < g) return bp;
  }
}

SampleBatch BoundarySampler::sample(int n, RngStream& rng) const {
  if (n < 1) throw InputError("sample: N must be at least 1");
  SampleBatch batch{body_->name(), label_, n, {}, rng.id()};
  batch.points.reserve(n);
  for (int i = 0; i < n; ++i) batch.points.push_back(draw(rng));
  return batch;
}

void BoundarySampler::sample_positions(int n, RngStream& rng, std::vector<Vec3>& out) const {
  if (n < 1) throw InputError("sample: N must be at least 1");
  out.clear();
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(draw(rng).position);
}

SampleBatch sample_boundary(const BodyPtr& body, const DensitySpec& spec, int n,
                            RngStream& rng) {
  return BoundarySampler(body, spec).sample(n, rng);
}

// ------------------------------------------------------------------ sphere --

double SphereDensity::operator()(Vec3 u) const {
  if (value) return value(u);
  return 1.0 / sphere_area(dim);
}

SphereDensity uniform_sphere_density(int d) {
  if (d != 2 && d != 3) throw InputError("sphere dimension must be 2 or 3");
  return SphereDensity{d, "uniform", {}};
}

SphereDensity pushforward_density(BodyPtr body, DensitySpec spec) {
  const int d = body->dimension();
  std::string label = "pushforward(" + spec.label + ")";
  auto fn = [body = std::move(body), spec = std::move(spec)](Vec3 u) {
    const BoundaryPoint bp = body->boundary_at_normal(u);
    return spec(bp) / bp.kappa;
  };
  return SphereDensity{d, std::move(label), std::move(fn)};
}

SphereSampler::SphereSampler(SphereDensity density)
    : inner_(make_ball(1.0, density.dim),
             [density](const BoundaryPoint& bp) { return density(bp.normal); },
             density.label) {}

void SphereSampler::sample(int n, RngStream& rng, std::vector<Vec3>& out) const {
  // On the unit sphere the boundary point is its own normal.
  inner_.sample_positions(n, rng, out);
}

std::vector<Vec3> sample_sphere_normals(const SphereDensity& density, int n,
                                        RngStream& rng) {
  std::vector<Vec3> out;
  SphereSampler(density).sample(n, rng, out);
  return out;
}

}  // namespace polyapprox
