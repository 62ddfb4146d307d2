#include "polyapprox/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "polyapprox/errors.hpp"
#include "polyapprox/experiments.hpp"
#include "polyapprox/fixtures.hpp"
#include "polyapprox/text.hpp"
#include "polyapprox/trial_kernels.hpp"

namespace polyapprox {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Common {
  std::string body;
  std::string out_dir = ".";
  bool no_timestamp = false;
};

struct McFlags {
  std::string density = "uniform";
  std::vector<int> js;
  std::string schedule = "32:4096";
  int trials = 1000;
  std::uint64_t seed = 1;
  int workers = 0;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  return os;
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("output directory " + dir + " is not writable");
  return fs::path(dir);
}

json base_summary(const char* command, const Common& c) {
  json j;
  j["command"] = command;
  j["tool_version"] = kToolVersion;
  if (!c.no_timestamp) {
    std::ostringstream ts;
    write_timestamp(ts);
    std::string s = ts.str();
    j["generated"] = s.substr(std::string("# generated ").size(),
                              s.size() - std::string("# generated ").size() - 1);
  }
  j["body"] = c.body;
  return j;
}

// NaN and infinities are not JSON; report them as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_summary(const fs::path& dir, const json& summary) {
  auto os = open_output(dir / "summary.json");
  os << summary.dump(2) << '\n';
}

int effective_workers(int w) { return w > 0 ? w : default_workers(); }

int cmd_experiment(Side side, const Common& c, const McFlags& f, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.body = c.body;
  cfg.density = f.density;
  cfg.side = side;
  cfg.schedule = parse_schedule(f.schedule);
  cfg.trials = f.trials;
  cfg.seed = f.seed;
  cfg.workers = f.workers;
  cfg.js = f.js;
  if (cfg.js.empty()) {
    const int d = parse_body(c.body)->dimension();
    cfg.js = side == Side::inscribed ? std::vector<int>{d} : std::vector<int>{1, d};
  }
  const ExperimentResult r = run_experiment(cfg);

  std::vector<RateFit> fits;
  for (int j : cfg.js) {
    try {
      fits.push_back(fit_rate(r, j));
    } catch (const InputError& e) {
      out << "note: no rate fit for j = " << j << ": " << e.what() << '\n';
    }
  }
  const fs::path dir = prepare_dir(c.out_dir);
  {
    auto os = open_output(dir / "results.csv");
    write_results_csv(os, r, !c.no_timestamp);
  }
  {
    auto os = open_output(dir / "rates.csv");
    write_rates_csv(os, r, fits, !c.no_timestamp);
  }
  json s = base_summary(side == Side::inscribed ? "inscribe" : "circumscribe", c);
  s["density"] = r.density_label;
  s["seed"] = cfg.seed;
  s["workers"] = effective_workers(cfg.workers);
  s["config_hash"] = r.config_hash;
  s["schedule"] = cfg.schedule;
  s["trials"] = cfg.trials;
  int misses = 0;
  for (std::size_t i = 0; i < r.rows.size(); i += cfg.js.size()) misses += r.rows[i].misses;
  s["misses"] = misses;
  s["outputs"] = {{"results", "results.csv"}, {"rates", "rates.csv"}};
  s["fits"] = json::array();
  for (const auto& fit : fits) {
    s["fits"].push_back({{"j", fit.j},
                         {"exponent", number(fit.exponent)},
                         {"log_const", number(fit.log_const)},
                         {"r2", number(fit.r2)},
                         {"n_lo", fit.n_lo},
                         {"n_hi", fit.n_hi},
                         {"points", fit.points},
                         {"dropped", fit.dropped}});
  }
  write_summary(dir, s);
  for (const auto& fit : fits) {
    out << "j = " << fit.j << ": exponent " << format_number(fit.exponent) << ", R^2 "
        << format_number(fit.r2) << '\n';
  }
  return 0;
}

int cmd_ratio(const Common& c, const McFlags& f, const std::string& da, const std::string& db,
              std::ostream& out) {
  const BodyPtr body = parse_body(c.body);
  ExperimentConfig cfg;
  cfg.schedule = parse_schedule(f.schedule);
  cfg.trials = f.trials;
  cfg.seed = f.seed;
  cfg.workers = f.workers;
  if (f.js.size() != 1) throw ConfigError("ratio needs exactly one --j");
  const RatioResult r = ratio_experiment(body, f.js[0], parse_density(*body, da),
                                         parse_density(*body, db), cfg);
  const fs::path dir = prepare_dir(c.out_dir);
  {
    auto os = open_output(dir / "ratio.csv");
    write_ratio_csv(os, r, !c.no_timestamp);
  }
  json s = base_summary("ratio", c);
  s["seed"] = cfg.seed;
  s["workers"] = effective_workers(cfg.workers);
  s["config_hash"] = r.config_hash;
  s["schedule"] = cfg.schedule;
  s["trials"] = cfg.trials;
  s["outputs"] = {{"ratio", "ratio.csv"}};
  s["ratio"] = {{"density_a", r.density_a},
                {"density_b", r.density_b},
                {"j", r.j},
                {"predicted", number(r.predicted)},
                {"observed_last", number(r.rows.back().ratio)}};
  write_summary(dir, s);
  out << "ratio at N = " << r.rows.back().n << ": " << format_number(r.rows.back().ratio)
      << " (predicted " << format_number(r.predicted) << ")\n";
  return 0;
}

int cmd_rigidity(const Common& c, int j1, int j2, std::ostream& out) {
  const RigidityReport r = rigidity_report(parse_body(c.body), j1, j2);
  const fs::path dir = prepare_dir(c.out_dir);
  json s = base_summary("rigidity", c);
  s["outputs"] = {{"summary", "summary.json"}};
  s["rigidity"] = {{"j1", r.j1},
                   {"j2", r.j2},
                   {"gap", number(r.gap)},
                   {"factor_j1_for_j2", number(r.factor_1_for_2)},
                   {"factor_j2_for_j1", number(r.factor_2_for_1)},
                   {"curvature_ratio", number(r.curvature_ratio)},
                   {"verdict", r.ball_consistent ? "ball-consistent" : "not ball-consistent"}};
  write_summary(dir, s);
  out << r.body << " (" << r.j1 << ", " << r.j2 << "): gap " << format_number(r.gap) << ", "
      << (r.ball_consistent ? "ball-consistent" : "not ball-consistent") << '\n';
  return 0;
}

int cmd_density(const Common& c, const std::string& kind, int grid, std::ostream& out) {
  if (grid < 1) throw ConfigError("--grid must be positive");
  const BodyPtr body = parse_body(c.body);
  const DensitySpec spec = parse_density(*body, kind);
  const fs::path dir = prepare_dir(c.out_dir);
  const auto params = parameter_grid(*body, grid);
  {
    auto os = open_output(dir / "density.csv");
    if (!c.no_timestamp) write_timestamp(os);
    os << "index,t,s,x,y,z,kappa,density\n";
    for (std::size_t i = 0; i < params.size(); ++i) {
      const BoundaryPoint bp = body->boundary(params[i]);
      os << i << ',' << format_number(bp.parameter.t) << ',' << format_number(bp.parameter.s)
         << ',' << format_number(bp.position.x) << ',' << format_number(bp.position.y) << ','
         << format_number(bp.position.z) << ',' << format_number(bp.kappa) << ','
         << format_number(spec(bp)) << '\n';
    }
  }
  json s = base_summary("density", c);
  s["density"] = spec.label;
  s["outputs"] = {{"density", "density.csv"}};
  write_summary(dir, s);
  out << params.size() << " values written\n";
  return 0;
}

int cmd_bestpoly(const Common& c, int n, const std::string& objective, int grid, int starts,
                 std::ostream& out) {
  const BodyPtr body = parse_body(c.body);
  const BestPolygon best = best_polygon_dp(body, n, grid, parse_objective(objective), starts);
  const fs::path dir = prepare_dir(c.out_dir);
  {
    auto os = open_output(dir / "bestpoly.off");
    write_off(os, Polytope{best.polygon});
  }
  const ArclengthBins bins(*body);
  const auto fv = bins.masses(make_optimal_density(*body, OptimalKind::volume()));
  const auto fw = bins.masses(make_optimal_density(*body, OptimalKind::mean_width()));
  {
    auto os = open_output(dir / "histogram.csv");
    if (!c.no_timestamp) write_timestamp(os);
    os << "bin,arclength_lo,arclength_hi,vertex_fraction,mass_opt_volume,mass_opt_meanwidth\n";
    for (int b = 0; b < kHistogramBins; ++b) {
      os << b << ',' << format_number(bins.length() * b / kHistogramBins) << ','
         << format_number(bins.length() * (b + 1) / kHistogramBins) << ','
         << format_number(best.histogram[b]) << ',' << format_number(fv[b]) << ','
         << format_number(fw[b]) << '\n';
    }
  }
  json s = base_summary("bestpoly", c);
  s["outputs"] = {{"polygon", "bestpoly.off"}, {"histogram", "histogram.csv"}};
  s["bestpoly"] = {{"n", n},
                   {"grid", grid},
                   {"starts", starts},
                   {"objective", objective},
                   {"deviation", number(best.deviation)},
                   {"f0_over_n", static_cast<double>(hull2d(best.polygon.vertices).vertices.size()) / n},
                   {"tv_opt_volume", number(histogram_tv(best.histogram, fv))},
                   {"tv_opt_meanwidth", number(histogram_tv(best.histogram, fw))}};
  write_summary(dir, s);
  out << objective << " optimum: deviation " << format_number(best.deviation) << '\n';
  return 0;
}

int cmd_fixtures(bool regen, std::ostream& out) {
  const std::string path = fixture_path();
  std::vector<Fixture> old;
  try {
    old = read_fixtures(path);
  } catch (const InputError&) {
    if (!regen) throw;
  }
  const std::vector<Fixture> fresh = compute_fixtures();
  int failures = 0;
  for (const auto& f : fresh) {
    out << f.name << ' ' << format_number(f.value);
    const Fixture* prior = nullptr;
    for (const auto& o : old) {
      if (o.name == f.name) prior = &o;
    }
    if (prior) {
      const double delta = f.value - prior->value;
      const bool ok = std::abs(delta) <= prior->tol;
      failures += ok ? 0 : 1;
      out << " delta " << format_number(delta) << (ok ? "" : " OUT OF TOLERANCE");
    } else {
      out << " (new)";
    }
    out << '\n';
  }
  if (regen) {
    auto os = open_output(path);
    write_fixtures(os, fresh);
    out << "wrote " << path << '\n';
    return 0;
  }
  return failures == 0 ? 0 : 3;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polytopal approximation laboratory for smooth convex bodies", "polyapprox"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);

  Common common;
  McFlags mc;
  int j1 = 0, j2 = 0, grid = 0, starts = 8, n_poly = 0;
  std::string kind, objective = "area", density_a, density_b;
  bool regen = false;

  auto add_common = [&](CLI::App* sub, bool body_required = true) {
    auto* o = sub->add_option("--body", common.body, "Body, e.g. ellipse:a=2,b=1");
    if (body_required) o->required();
    sub->add_option("--out", common.out_dir, "Output directory");
    sub->add_flag("--no-timestamp", common.no_timestamp, "Omit timestamps from outputs");
  };
  auto add_mc = [&](CLI::App* sub) {
    sub->add_option("--n", mc.schedule, "N schedule lo:hi, doubling");
    sub->add_option("--trials", mc.trials, "Trials per N");
    sub->add_option("--seed", mc.seed, "Global seed");
    sub->add_option("--workers", mc.workers, "Worker threads (0: all processors)");
    sub->add_option("--j", mc.js, "Deviation index (repeatable)");
  };

  auto* inscribe = app.add_subcommand("inscribe", "Random inscribed polytopes");
  add_common(inscribe);
  add_mc(inscribe);
  inscribe->add_option("--density", mc.density, "Vertex density");

  auto* circumscribe = app.add_subcommand("circumscribe", "Random circumscribed polytopes");
  add_common(circumscribe);
  add_mc(circumscribe);
  circumscribe->add_option("--density", mc.density,
                           "Normal density: uniform, or a boundary density pushed forward");

  auto* ratio = app.add_subcommand("ratio", "Paired ratio of two vertex densities");
  add_common(ratio);
  add_mc(ratio);
  ratio->add_option("--density-a", density_a, "Numerator density")->required();
  ratio->add_option("--density-b", density_b, "Denominator density")->required();

  auto* rigidity = app.add_subcommand("rigidity", "Optimal-density gap diagnostic");
  add_common(rigidity);
  rigidity->add_option("--j1", j1, "First index")->required();
  rigidity->add_option("--j2", j2, "Second index")->required();

  auto* density = app.add_subcommand("density", "Tabulate a density on a parameter grid");
  add_common(density);
  density->add_option("--kind", kind, "Density grammar")->required();
  density->add_option("--grid", grid, "Grid size")->required();

  auto* bestpoly = app.add_subcommand("bestpoly", "Near-best inscribed polygon by DP");
  add_common(bestpoly);
  bestpoly->add_option("--n", n_poly, "Vertex count")->required();
  bestpoly->add_option("--objective", objective, "area or perimeter");
  bestpoly->add_option("--grid", grid, "Boundary grid size G")->required();
  bestpoly->add_option("--starts", starts, "Anchor count");

  auto* fixtures = app.add_subcommand("fixtures", "Check or regenerate regression fixtures");
  fixtures->add_flag("--regen", regen, "Rewrite the fixture file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*inscribe) return cmd_experiment(Side::inscribed, common, mc, out);
    if (*circumscribe) return cmd_experiment(Side::circumscribed, common, mc, out);
    if (*ratio) return cmd_ratio(common, mc, density_a, density_b, out);
    if (*rigidity) return cmd_rigidity(common, j1, j2, out);
    if (*density) return cmd_density(common, kind, grid, out);
    if (*bestpoly) return cmd_bestpoly(common, n_poly, objective, grid, starts, out);
    if (*fixtures) return cmd_fixtures(regen, out);
  } catch (const MissRateError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const GeometryError& e) {
    err << "geometry failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace polyapprox
