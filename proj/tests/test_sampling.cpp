#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "polyapprox/errors.hpp"
#include "polyapprox/sampling.hpp"

using namespace polyapprox;

namespace {

// Kolmogorov-Smirnov statistic of angles in [0, 2 pi) against uniform.
double ks_uniform_angle(std::vector<double> angles) {
  std::sort(angles.begin(), angles.end());
  const double n = angles.size();
  double d = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double f = angles[i] / (2 * kPi);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double angle_of(Vec3 p) {
  double a = std::atan2(p.y, p.x);
  return a < 0 ? a + 2 * kPi : a;
}

}  // namespace

TEST_CASE("optimal densities on the ball are all uniform") {
  for (int d : {2, 3}) {
    const BodyPtr ball = make_ball(1.0, d);
    std::vector<DensitySpec> specs{make_optimal_density(*ball, OptimalKind::volume()),
                                   make_optimal_density(*ball, OptimalKind::mean_width()),
                                   make_uniform_density(*ball)};
    for (int j = 1; j <= d; ++j) specs.push_back(make_optimal_density(*ball, OptimalKind::intrinsic(j)));
    for (const Parameter& p : parameter_grid(*ball, 400)) {
      const BoundaryPoint bp = ball->boundary(p);
      for (const auto& s : specs) {
        CHECK(std::abs(s(bp) - 1.0 / sphere_area(d)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("optimal density exponents") {
  const BodyPtr e = make_ellipsoid(1.0, 2.0, 3.0);
  const DensitySpec v = make_optimal_density(*e, OptimalKind::volume());
  CHECK(v.alpha == doctest::Approx(0.25));
  CHECK(v.beta == 0.0);
  const DensitySpec w = make_optimal_density(*e, OptimalKind::mean_width());
  CHECK(w.alpha == doctest::Approx(0.75));
  const DensitySpec r1 = make_optimal_density(*e, OptimalKind::intrinsic(1));
  CHECK(r1.alpha == doctest::Approx(0.25));
  CHECK(r1.m == 2);
  CHECK(r1.beta == doctest::Approx(0.5));
  CHECK_THROWS_AS(make_optimal_density(*e, OptimalKind::intrinsic(4)), InputError);
  CHECK_THROWS_AS(make_optimal_density(*make_ball(1.0), OptimalKind::intrinsic(0)), InputError);
}

TEST_CASE("volume-optimal density on the ellipse") {
  const BodyPtr e = make_ellipse(2.0, 1.0);
  const DensitySpec f = make_optimal_density(*e, OptimalKind::volume());
  const double r = f(e->boundary({0.0, 0.0})) / f(e->boundary({kPi / 2, 0.0}));
  CHECK(r == doctest::Approx(2.0).epsilon(1e-13));
  // Independent normalization: kappa^{1/3} ds = (ab)^{1/3} dtheta.
  CHECK(f.norm_constant == doctest::Approx(1.0 / (2 * kPi * std::cbrt(2.0))).epsilon(1e-11));
}

TEST_CASE("densities are normalized") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.5);
  const std::vector<BodyPtr> bodies{make_ellipse(2.0, 1.0), make_ellipsoid(1.0, 1.0, 1.5),
                                    parse_body("support2d:c0=1,c3=0.05")};
  for (const BodyPtr& b : bodies) {
    for (int k = 0; k < 10; ++k) {
      const int m = static_cast<int>(gen() % b->dimension());
      const DensitySpec s = make_density(*b, u(gen), m, u(gen));
      CHECK(std::abs(total_mass(*b, s) - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("density grammar") {
  const BodyPtr e = make_ellipse(2.0, 1.0);
  CHECK(parse_density(*e, "uniform").alpha == 0.0);
  CHECK(parse_density(*e, "opt:volume").alpha == doctest::Approx(1.0 / 3));
  CHECK(parse_density(*e, "opt:meanwidth").alpha == doctest::Approx(2.0 / 3));
  CHECK(parse_density(*e, "opt:intrinsic:j=1").m == 1);
  const DensitySpec c = parse_density(*make_ellipsoid(1, 1, 2), "custom:alpha=0.25,m=1,beta=0.5");
  CHECK(c.beta == 0.5);
  CHECK_THROWS_AS(parse_density(*e, "opt:intrinsic:j=3"), InputError);
  CHECK_THROWS_AS(parse_density(*e, "custom:alpha=0.25,m=2"), InputError);
  CHECK_THROWS_AS(parse_density(*e, "custom:gamma=1"), InputError);
  CHECK_THROWS_AS(parse_density(*e, "fancy"), InputError);
  // kappa^-1000 underflows at the flat ends.
  CHECK_THROWS_AS(parse_density(*e, "custom:alpha=-1000"), NumericalFailure);
}

TEST_CASE("uniform samples on the circle pass Kolmogorov-Smirnov") {
  const BodyPtr ball = make_ball(1.0);
  RngStream rng(2024, {0});
  const int n = 100000;
  const SampleBatch batch = sample_boundary(ball, make_uniform_density(*ball), n, rng);
  REQUIRE(batch.points.size() == static_cast<std::size_t>(n));
  std::vector<double> angles;
  for (const auto& p : batch.points) {
    angles.push_back(angle_of(p.position));
    CHECK(std::abs(ball->support(p.normal) - dot(p.position, p.normal)) <= 1e-10);
  }
  CHECK(ks_uniform_angle(angles) < 1.63 / std::sqrt(n));
}

TEST_CASE("arc mass under the curvature-weighted density") {
  const BodyPtr e = make_ellipse(2.0, 1.0);
  const DensitySpec f = make_optimal_density(*e, OptimalKind::volume());
  RngStream rng(99, {1});
  const int n = 100000;
  const SampleBatch batch = sample_boundary(e, f, n, rng);
  int hits = 0;
  for (const auto& p : batch.points) {
    const double t = p.parameter.t;
    if (t <= kPi / 8 || t >= 2 * kPi - kPi / 8) ++hits;
  }
  // kappa^{1/3} ds = (ab)^{1/3} dtheta, so the target mass is (pi/4)/(2 pi).
  const double target = 0.125;
  const double se = std::sqrt(target * (1 - target) / n);
  CHECK(std::abs(static_cast<double>(hits) / n - target) <= 3 * se);
}

TEST_CASE("single draw lies on the boundary") {
  const BodyPtr s = make_ellipsoid(1.0, 2.0, 0.5);
  RngStream rng(5, {0});
  const SampleBatch b = sample_boundary(s, make_uniform_density(*s), 1, rng);
  REQUIRE(b.points.size() == 1);
  CHECK(std::abs(s->gauge(b.points[0].position) - 1.0) <= 1e-10);
  CHECK_THROWS_AS(sample_boundary(s, make_uniform_density(*s), 0, rng), InputError);
}

TEST_CASE("batches are reproducible from the stream key") {
  const BodyPtr e = make_ellipse(2.0, 1.0);
  const DensitySpec f = make_optimal_density(*e, OptimalKind::mean_width());
  RngStream a(17, {3, 4}), b(17, {3, 4}), c(17, {3, 5});
  const auto x = sample_boundary(e, f, 500, a);
  const auto y = sample_boundary(e, f, 500, b);
  const auto z = sample_boundary(e, f, 500, c);
  bool same = true, differ = false;
  for (int i = 0; i < 500; ++i) {
    same = same && x.points[i].parameter.t == y.points[i].parameter.t;
    differ = differ || x.points[i].parameter.t != z.points[i].parameter.t;
  }
  CHECK(same);
  CHECK(differ);
  CHECK(x.stream == y.stream);
}

TEST_CASE("envelope violation is a numerical failure") {
  auto armed = std::make_shared<bool>(false);
  BoundarySampler sampler(make_ball(1.0),
                          [armed](const BoundaryPoint&) { return *armed ? 10.0 : 1.0; }, "trap");
  *armed = true;
  RngStream rng(1, {0});
  CHECK_THROWS_AS(sampler.sample(10, rng), NumericalFailure);
}

TEST_CASE("sphere normals") {
  const int n = 100000;
  RngStream r2(8, {0});
  std::vector<double> angles;
  for (Vec3 u : sample_sphere_normals(uniform_sphere_density(2), n, r2)) {
    angles.push_back(angle_of(u));
  }
  CHECK(ks_uniform_angle(angles) < 1.63 / std::sqrt(n));

  RngStream r3(8, {1});
  double zsum = 0.0;
  for (Vec3 u : sample_sphere_normals(uniform_sphere_density(3), n, r3)) {
    CHECK(std::abs(norm(u) - 1.0) <= 1e-12);
    zsum += u.z;
  }
  CHECK(std::abs(zsum / n) <= 3.0 / std::sqrt(n));

  const BodyPtr ball = make_ball(1.0);
  const SphereDensity push =
      pushforward_density(ball, make_optimal_density(*ball, OptimalKind::volume()));
  for (double t : {0.0, 1.0, 4.0}) {
    CHECK(push({std::cos(t), std::sin(t), 0.0}) == doctest::Approx(1 / (2 * kPi)).epsilon(1e-12));
  }
  // Push-forward densities stay normalized on the sphere.
  const BodyPtr e = make_ellipse(2.0, 1.0);
  const SphereDensity pe = pushforward_density(e, make_uniform_density(*e));
  double mass = 0.0;
  const int m = 20000;
  for (int i = 0; i < m; ++i) {
    const double t = 2 * kPi * (i + 0.5) / m;
    mass += pe({std::cos(t), std::sin(t), 0.0}) * 2 * kPi / m;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}
