#include <doctest.h>

#include <cmath>
#include <random>

#include "polyapprox/errors.hpp"
#include "polyapprox/fixtures.hpp"
#include "polyapprox/functionals.hpp"

using namespace polyapprox;

namespace {

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> f = read_fixtures(fixture_path());
  return f;
}

double fixture(const std::string& name) { return find_fixture(fixtures(), name).value; }
double fixture_tol(const std::string& name) { return find_fixture(fixtures(), name).tol; }

// Ellipse (a, b) at parameter t: curvature and speed in closed form.
struct EllipseAt {
  double kappa, speed;
};
EllipseAt ellipse_at(double a, double b, double t) {
  const double s = std::sqrt(a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t));
  return {a * b / (s * s * s), s};
}

std::vector<QuantFunctional> functionals_for(const BodyPtr& body) {
  return {QuantFunctional::volume(body), QuantFunctional::mean_width(body),
          QuantFunctional::intrinsic(body, 1)};
}

}  // namespace

TEST_CASE("quantization functional on the unit disc") {
  const BodyPtr ball = make_ball(1.0);
  const auto fn = QuantFunctional::volume(ball);
  CHECK(fn.exponent() == 2.0);
  const double v = eval_quant(fn, make_uniform_density(*ball));
  CHECK(v == doctest::Approx(8 * std::pow(kPi, 3)).epsilon(1e-12));
  CHECK(v == doctest::Approx(248.0502).epsilon(1e-7));
  CHECK(holder_bound(fn) == doctest::Approx(8 * std::pow(kPi, 3)).epsilon(1e-12));
  // Constant weight 1/2 on a circle of length 4 pi.
  const BodyPtr b2 = make_ball(2.0);
  CHECK(holder_bound(QuantFunctional::volume(b2)) ==
        doctest::Approx(0.5 * std::pow(4 * kPi, 3)).epsilon(1e-12));
}

TEST_CASE("weights") {
  const BodyPtr s = make_ellipsoid(1.0, 2.0, 3.0);
  const BoundaryPoint bp = s->boundary({0.7, 1.9});
  CHECK(QuantFunctional::volume(s).weight(bp) == doctest::Approx(std::sqrt(bp.kappa)));
  CHECK(QuantFunctional::mean_width(s).weight(bp) == doctest::Approx(std::pow(bp.kappa, 1.5)));
  CHECK(QuantFunctional::intrinsic(s, 2).weight(bp) ==
        doctest::Approx(std::sqrt(bp.kappa) * 0.5 * (bp.principal[0] + bp.principal[1])));
  CHECK(QuantFunctional::intrinsic(s, 3).weight(bp) == doctest::Approx(std::sqrt(bp.kappa)));
  CHECK(QuantFunctional::intrinsic(s, 1).weight(bp) == doctest::Approx(std::pow(bp.kappa, 1.5)));
  CHECK_THROWS_AS(QuantFunctional::intrinsic(s, 0), InputError);
  CHECK_THROWS_AS(QuantFunctional::intrinsic(s, 4), InputError);
}

TEST_CASE("Hoelder bound on the ellipse") {
  const BodyPtr e = make_ellipse(2.0, 1.0);
  // kappa^{1/3} ds = (ab)^{1/3} dtheta.
  const double oracle = std::pow(2 * kPi * std::cbrt(2.0), 3);
  const double hb = holder_bound(QuantFunctional::volume(e));
  CHECK(std::abs(hb / oracle - 1.0) <= 1e-11);
  CHECK(std::abs(hb - fixture("ellipse_holder_bound_volume")) <= fixture_tol("ellipse_holder_bound_volume"));
  const double unif = eval_quant(QuantFunctional::volume(e), make_uniform_density(*e));
  const double opt = eval_quant(QuantFunctional::volume(e), make_optimal_density(*e, OptimalKind::volume()));
  CHECK(unif > opt);
  CHECK(std::abs(opt / hb - 1.0) <= 1e-9);

  // Mean-width weight kappa^2: trapezoid oracle, spectral for periodic data.
  double s = 0.0;
  const int m = 4096;
  for (int i = 0; i < m; ++i) {
    const auto q = ellipse_at(2.0, 1.0, 2 * kPi * i / m);
    s += std::pow(q.kappa, 2.0 / 3.0) * q.speed * 2 * kPi / m;
  }
  CHECK(std::abs(holder_bound(QuantFunctional::mean_width(e)) / std::pow(s, 3) - 1.0) <= 1e-10);
  CHECK(std::abs(std::pow(s, 3) - fixture("ellipse_holder_bound_meanwidth")) <=
        fixture_tol("ellipse_holder_bound_meanwidth"));
}

TEST_CASE("Hoelder optimum reproduces the optimal densities") {
  const std::vector<BodyPtr> bodies{make_ball(1.0), make_ellipse(2.0, 1.0), make_ball(1.0, 3),
                                    make_ellipsoid(1.0, 1.0, 1.5),
                                    parse_body("support2d:c0=1,c2=0.1,s3=0.02")};
  for (const BodyPtr& b : bodies) {
    CAPTURE(b->name());
    const int d = b->dimension();
    const DensitySpec hv = holder_optimal(QuantFunctional::volume(b));
    CHECK(hv.alpha == doctest::Approx(1.0 / (d + 1)));
    CHECK(hv.beta == 0.0);
    const DensitySpec hw = holder_optimal(QuantFunctional::mean_width(b));
    CHECK(hw.alpha == doctest::Approx(d / (d + 1.0)));
    std::vector<std::pair<DensitySpec, DensitySpec>> pairs{
        {hv, make_optimal_density(*b, OptimalKind::volume())},
        {hw, make_optimal_density(*b, OptimalKind::mean_width())}};
    for (int j = 1; j <= d; ++j) {
      const DensitySpec hj = holder_optimal(QuantFunctional::intrinsic(b, j));
      if (j < d) {
        CHECK(hj.m == d - j);
        CHECK(hj.beta == doctest::Approx((d - 1.0) / (d + 1)));
      }
      pairs.push_back({hj, make_optimal_density(*b, OptimalKind::intrinsic(j))});
    }
    for (const auto& [x, y] : pairs) {
      for (const Parameter& p : parameter_grid(*b, 1024)) {
        const BoundaryPoint bp = b->boundary(p);
        CHECK(std::abs(x(bp) - y(bp)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("Hoelder inequality on random densities") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  const std::vector<BodyPtr> bodies{make_ellipse(2.0, 1.0), make_ellipsoid(1.0, 1.0, 1.5)};
  for (const BodyPtr& b : bodies) {
    for (const auto& fn : functionals_for(b)) {
      const double hb = holder_bound(fn);
      for (int k = 0; k < 20; ++k) {
        const int m = static_cast<int>(gen() % b->dimension());
        const DensitySpec f = make_density(*b, u(gen), m, u(gen));
        CHECK(eval_quant(fn, f) >= hb * (1 - 1e-9));
      }
      CHECK(std::abs(eval_quant(fn, holder_optimal(fn)) / hb - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("numeric minimization") {
  const BodyPtr ball = make_ball(1.0);
  const auto mb = minimize_numeric(QuantFunctional::mean_width(ball), 128);
  for (double f : mb.density) CHECK(f == doctest::Approx(1 / (2 * kPi)).epsilon(1e-10));
  CHECK(mb.value == doctest::Approx(holder_bound(QuantFunctional::mean_width(ball))).epsilon(1e-9));

  const BodyPtr e = make_ellipse(2.0, 1.0);
  const auto fn = QuantFunctional::volume(e);
  const auto res = minimize_numeric(fn, 512);
  CHECK(res.projected_gradient < 1e-10);
  const DensitySpec closed = holder_optimal(fn);
  double sup = 0.0;
  for (std::size_t i = 0; i < res.density.size(); ++i) {
    sup = std::max(sup, std::abs(res.density[i] - closed(res.grid.points[i])));
  }
  CHECK(sup <= 1e-6);
  CHECK(std::abs(res.value / holder_bound(fn) - 1.0) <= 1e-8);

  // Same minimizer from random starts.
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int k = 0; k < 10; ++k) {
    std::vector<double> start(res.density.size());
    for (double& s : start) s = u(gen);
    const auto r = minimize_numeric(fn, 512, start);
    double d = 0.0;
    for (std::size_t i = 0; i < start.size(); ++i) d = std::max(d, std::abs(r.density[i] - res.density[i]));
    CHECK(d <= 1e-6);
  }

  // Strict midpoint convexity of the discrete objective.
  std::vector<double> f1(res.density.size()), f2(f1.size()), mid(f1.size());
  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    f1[i] = u(gen);
    f2[i] = u(gen);
    m1 += f1[i] * res.grid.measure[i];
    m2 += f2[i] * res.grid.measure[i];
  }
  for (std::size_t i = 0; i < f1.size(); ++i) {
    f1[i] /= m1;
    f2[i] /= m2;
    mid[i] = 0.5 * (f1[i] + f2[i]);
  }
  const double a = fn.exponent();
  const double lhs = discrete_value(res.grid, a, mid);
  const double rhs = 0.5 * (discrete_value(res.grid, a, f1) + discrete_value(res.grid, a, f2));
  CHECK(lhs < rhs - 1e-6 * rhs);

  CHECK_THROWS_AS(minimize_numeric(fn, 32), InputError);
}

TEST_CASE("numeric minimization in three dimensions") {
  const BodyPtr s = make_ellipsoid(1.0, 1.0, 1.5);
  for (const auto& fn : functionals_for(s)) {
    const auto res = minimize_numeric(fn, 512);
    const DensitySpec closed = holder_optimal(fn);
    double sup = 0.0;
    for (std::size_t i = 0; i < res.density.size(); ++i) {
      sup = std::max(sup, std::abs(res.density[i] - closed(res.grid.points[i])));
    }
    CHECK(sup <= 1e-6);
  }
}

TEST_CASE("asymptotic constants") {
  using K = AsymptoticConstant::Kind;
  CHECK(alpha_dj(2, 2) == doctest::Approx(4 * kPi * kPi).epsilon(1e-14));
  for (int j = 1; j <= 2; ++j) {
    CHECK(alpha_dj(2, j) == doctest::Approx(kPi * kPi * (j + 1) * (j + 2) / 3).epsilon(1e-14));
  }
  CHECK(asymptotic_constant(K::c_tilde_volume, 2).value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(asymptotic_constant(K::c_tilde_mean_width, 3).value == doctest::Approx(4.0).epsilon(1e-15));
  // c_{2,2} = (2 V_2(B_2) / 2) alpha(2, 2) = 4 pi^3.
  CHECK(asymptotic_constant(K::c_dj, 2, 2).value == doctest::Approx(4 * std::pow(kPi, 3)));
  CHECK(ball_intrinsic_volume(3, 1) == doctest::Approx(4.0));
  CHECK(ball_intrinsic_volume(3, 2) == doctest::Approx(2 * kPi));
  CHECK(ball_intrinsic_volume(3, 3) == doctest::Approx(4 * kPi / 3));
  // alpha(3, j) = (1/2) 4 (j+1): (d kappa_d / kappa_{d-1}) = 4.
  CHECK(alpha_dj(3, 1) == doctest::Approx(4.0));
  for (const auto& c : {asymptotic_constant(K::c_dj, 3, 1), asymptotic_constant(K::c_tilde_volume, 3)}) {
    CHECK(c.value > 0);
  }
  CHECK_THROWS_AS(asymptotic_constant(K::c_tilde_volume, 4), InputError);
  CHECK_THROWS_AS(asymptotic_constant(K::c_dj, 2, 3), InputError);
}

TEST_CASE("density gap") {
  for (double r : {0.5, 1.0, 2.0}) {
    const BodyPtr b = make_ball(r);
    CHECK(density_gap(*b, make_optimal_density(*b, OptimalKind::volume()),
                      make_optimal_density(*b, OptimalKind::mean_width())) <= 1e-12);
  }
  const BodyPtr e = make_ellipse(2.0, 1.0);
  const DensitySpec fv = make_optimal_density(*e, OptimalKind::volume());
  const DensitySpec fw = make_optimal_density(*e, OptimalKind::mean_width());
  CHECK(density_gap(*e, fv, fv) == 0.0);
  const double gap = density_gap(*e, fv, fw);
  CHECK(gap >= 0.01);
  CHECK(std::abs(gap - fixture("ellipse_gap_fv_fw")) <= fixture_tol("ellipse_gap_fv_fw"));

  // Oracle: in theta, fv = 1/(2 pi) and fw ds = kappa^{2/3} speed dtheta / Z.
  const int m = 1 << 20;
  double z = 0.0;
  std::vector<double> g(m);
  for (int i = 0; i < m; ++i) {
    const auto q = ellipse_at(2.0, 1.0, 2 * kPi * (i + 0.5) / m);
    g[i] = std::pow(q.kappa, 2.0 / 3.0) * q.speed;
    z += g[i];
  }
  double tv = 0.0;
  for (int i = 0; i < m; ++i) tv += std::abs(1.0 / m - g[i] / z);
  CHECK(std::abs(0.5 * tv - gap) <= 1e-8);

  double prev = -1.0;
  for (double a : {1.0, 1.25, 1.5, 2.0}) {
    const BodyPtr ea = make_ellipse(a, 1.0);
    const double ga = density_gap(*ea, make_optimal_density(*ea, OptimalKind::volume()),
                                  make_optimal_density(*ea, OptimalKind::mean_width()));
    CHECK(ga > prev);
    prev = ga;
  }
}

TEST_CASE("gap separates the ball from every curved catalog body") {
  const std::vector<BodyPtr> bodies{make_ellipse(1.25, 1.0), make_ellipse(2.0, 1.0),
                                    make_ellipsoid(1.0, 1.0, 1.5), make_ellipsoid(2.0, 1.0, 0.7),
                                    parse_body("support2d:c0=1,c2=0.1,s3=0.02")};
  for (const BodyPtr& b : bodies) {
    CAPTURE(b->name());
    REQUIRE(curvature_range_ratio(*b) >= 1.1);
    CHECK(density_gap(*b, make_optimal_density(*b, OptimalKind::volume()),
                      make_optimal_density(*b, OptimalKind::mean_width())) >= 1e-3);
  }
}

TEST_CASE("suboptimality factor") {
  const BodyPtr e = make_ellipse(2.0, 1.0);
  for (int j = 1; j <= 2; ++j) {
    CHECK(std::abs(suboptimality_factor(e, j, make_optimal_density(*e, OptimalKind::intrinsic(j))) - 1) <= 1e-9);
  }
  const BodyPtr ball = make_ball(1.0);
  CHECK(suboptimality_factor(ball, 1, make_uniform_density(*ball)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(suboptimality_factor(ball, 2, make_uniform_density(*ball)) == doctest::Approx(1.0).epsilon(1e-10));
  const double f = suboptimality_factor(e, 1, make_optimal_density(*e, OptimalKind::volume()));
  CHECK(f > 1.001);
  CHECK(std::abs(f - fixture("ellipse_suboptimality_j1_fv")) <= fixture_tol("ellipse_suboptimality_j1_fv"));

  // Oracle in theta: I_1(fv) = int kappa^2 fv^{-2} ds with fv = kappa^{1/3}/Z.
  const int m = 8192;
  double z = 0.0, i1 = 0.0, hb = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto q = ellipse_at(2.0, 1.0, 2 * kPi * i / m);
    z += std::cbrt(q.kappa) * q.speed;
    hb += std::pow(q.kappa, 2.0 / 3.0) * q.speed;
  }
  const double dt = 2 * kPi / m;
  z *= dt;
  hb = std::pow(hb * dt, 3);
  for (int i = 0; i < m; ++i) {
    const auto q = ellipse_at(2.0, 1.0, 2 * kPi * i / m);
    i1 += q.kappa * q.kappa * std::pow(std::cbrt(q.kappa) / z, -2) * q.speed * dt;
  }
  CHECK(std::abs(f - i1 / hb) <= 1e-9);
}
