#include "polyapprox/fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "polyapprox/errors.hpp"
#include "polyapprox/experiments.hpp"
#include "polyapprox/functionals.hpp"
#include "polyapprox/text.hpp"

#ifndef POLYAPPROX_SOURCE_DIR
#define POLYAPPROX_SOURCE_DIR "."
#endif

namespace polyapprox {

std::string fixture_path() {
  if (const char* env = std::getenv("POLYAPPROX_FIXTURES"); env && *env) return env;
  return std::string(POLYAPPROX_SOURCE_DIR) + "/tests/fixtures/derived_values.txt";
}

std::vector<Fixture> read_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open fixture file " + path);
  std::vector<Fixture> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    Fixture f;
    if (!(ls >> f.name)) continue;
    if (!(ls >> f.value >> f.tol)) {
      throw InputError(path + ":" + std::to_string(lineno) + ": expected 'name value tol'");
    }
    out.push_back(f);
  }
  return out;
}

void write_fixtures(std::ostream& os, const std::vector<Fixture>& fixtures) {
  os << "# name value absolute_tolerance\n"
     << "# Regenerate with: polyapprox fixtures --regen\n";
  for (const auto& f : fixtures) {
    os << f.name << ' ' << format_number(f.value) << ' ' << format_number(f.tol) << '\n';
  }
}

const Fixture& find_fixture(const std::vector<Fixture>& fixtures, const std::string& name) {
  for (const auto& f : fixtures) {
    if (f.name == name) return f;
  }
  throw InputError("fixture '" + name + "' not found");
}

std::vector<Fixture> compute_fixtures() {
  std::vector<Fixture> out;
  const BodyPtr ellipse = make_ellipse(2.0, 1.0);
  const BodyPtr ellipsoid = make_ellipsoid(1.0, 1.0, 1.5);
  const DensitySpec fv = make_optimal_density(*ellipse, OptimalKind::volume());
  const DensitySpec fw = make_optimal_density(*ellipse, OptimalKind::mean_width());

  out.push_back({"ellipse_perimeter", ellipse->surface_measure(), 1e-9});
  out.push_back({"ellipsoid_1_1_1.5_surface", ellipsoid->surface_measure(), 1e-9});
  out.push_back({"ellipsoid_1_1_1.5_mean_width", ellipsoid->mean_width(), 1e-9});
  out.push_back({"ellipse_holder_bound_volume",
                 holder_bound(QuantFunctional::volume(ellipse)), 1e-7});
  out.push_back({"ellipse_holder_bound_meanwidth",
                 holder_bound(QuantFunctional::mean_width(ellipse)), 1e-7});
  out.push_back({"ellipse_gap_fv_fw", density_gap(*ellipse, fv, fw), 1e-8});
  out.push_back({"ellipse_suboptimality_j1_fv", suboptimality_factor(ellipse, 1, fv), 1e-8});
  out.push_back({"ellipse_suboptimality_j2_fw", suboptimality_factor(ellipse, 2, fw), 1e-8});
  {
    const auto fn = QuantFunctional::intrinsic(ellipse, 2);
    out.push_back({"ellipse_I2_ratio_uniform_fv",
                   eval_quant(fn, make_uniform_density(*ellipse)) / eval_quant(fn, fv), 1e-8});
  }
  {
    const RigidityReport r = rigidity_report(ellipsoid, 1, 3);
    out.push_back({"ellipsoid_1_1_1.5_gap_1_3", r.gap, 1e-7});
    out.push_back({"ellipsoid_1_1_1.5_factor_1_for_3", r.factor_1_for_2, 1e-7});
    out.push_back({"ellipsoid_1_1_1.5_factor_3_for_1", r.factor_2_for_1, 1e-7});
  }
  {
    // Seeded Monte Carlo value; the tolerance only absorbs libm differences.
    ExperimentConfig cfg;
    cfg.body = "ball:r=1";
    cfg.density = "uniform";
    cfg.js = {2};
    cfg.schedule = {64};
    cfg.trials = 2000;
    cfg.seed = 7;
    const ExperimentResult r = run_inscribed(cfg);
    out.push_back({"ball2d_uniform_n64_t2000_seed7_mean", r.rows[0].mean, 1e-10});
  }
  return out;
}

}  // namespace polyapprox
