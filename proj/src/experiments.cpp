#include "polyapprox/experiments.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <ctime>
#include <limits>
#include <ostream>
#include <sstream>

#include "polyapprox/errors.hpp"
#include "polyapprox/functionals.hpp"
#include "polyapprox/text.hpp"
#include "polyapprox/trial_kernels.hpp"

namespace polyapprox {

std::vector<int> parse_schedule(const std::string& text) {
  auto parse_int = [&](const std::string& s) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw InputError("bad N schedule '" + text + "'");
    return v;
  };
  const auto colon = text.find(':');
  const long lo = parse_int(text.substr(0, colon));
  const long hi = colon == std::string::npos ? lo : parse_int(text.substr(colon + 1));
  if (lo < 4) throw InputError("N schedule must start at 4 or more");
  if (hi < lo) throw InputError("N schedule '" + text + "' is decreasing");
  if (hi > (1L << 24)) throw InputError("N schedule upper end is too large");
  std::vector<int> out;
  for (long n = lo; n <= hi; n *= 2) out.push_back(static_cast<int>(n));
  return out;
}

void ExperimentConfig::validate(int dim) const {
  if (schedule.empty()) throw ConfigError("empty N schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) {
      throw ConfigError("N schedule must be strictly increasing");
    }
  }
  if (schedule.front() < dim + 1) throw ConfigError("N must exceed the dimension");
  if (trials < 100) throw ConfigError("trials must be at least 100");
  if (js.empty()) throw ConfigError("no deviation index j given");
  for (int j : js) {
    if (j < 1 || j > dim) {
      throw ConfigError("deviation index j = " + std::to_string(j) + " outside 1.." +
                        std::to_string(dim));
    }
  }
  if (workers < 0) throw ConfigError("workers must be nonnegative");
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "body=" << body << ";density=" << density << ";side=" << to_string(side) << ";j=";
  for (std::size_t i = 0; i < js.size(); ++i) os << (i ? "," : "") << js[i];
  os << ";n=";
  for (std::size_t i = 0; i < schedule.size(); ++i) os << (i ? "," : "") << schedule[i];
  os << ";trials=" << trials << ";seed=" << seed;
  return os.str();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

namespace {

struct Moments {
  int count = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Two-pass mean and standard error over the non-missed trials, in trial
// order, so the result does not depend on how trials were scheduled.
Moments moments(std::span<const TrialOutcome> outcomes, int slot) {
  Moments m;
  double sum = 0.0;
  for (const auto& o : outcomes) {
    if (o.miss) continue;
    sum += o.value[slot];
    ++m.count;
  }
  if (m.count == 0) {
    m.mean = std::numeric_limits<double>::quiet_NaN();
    m.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  m.mean = sum / m.count;
  double ss = 0.0;
  for (const auto& o : outcomes) {
    if (o.miss) continue;
    const double e = o.value[slot] - m.mean;
    ss += e * e;
  }
  m.stderr_ = m.count > 1 ? std::sqrt(ss / (m.count - 1) / m.count)
                          : std::numeric_limits<double>::quiet_NaN();
  return m;
}

void run_loop(const ExperimentConfig& config, int count, const TrialFn& fn,
              std::vector<TrialOutcome>& out) {
  out.assign(count, TrialOutcome{});
  if (config.serial) {
    run_trials_serial(count, fn, out);
  } else {
    run_trials_parallel(count, fn, out,
                        config.workers > 0 ? config.workers : default_workers());
  }
}

template <class Trial>
ExperimentResult run_with(const ExperimentConfig& config, const BodyPtr& body,
                          const std::string& density_label, const Trial& trial) {
  ExperimentResult r;
  r.config = config;
  r.body_name = body->name();
  r.density_label = density_label;
  r.dim = body->dimension();
  r.config_hash = config.hash();
  std::vector<TrialOutcome> outcomes;
  for (std::size_t k = 0; k < config.schedule.size(); ++k) {
    const int n = config.schedule[k];
    run_loop(config, config.trials,
             [&](int t) { return trial(static_cast<int>(k), n, t); }, outcomes);
    int misses = 0;
    for (const auto& o : outcomes) misses += o.miss ? 1 : 0;
    for (int j : config.js) {
      const Moments m = moments(outcomes, j);
      r.rows.push_back({n, j, config.trials, misses, m.mean, m.stderr_});
    }
  }
  return r;
}

}  // namespace

ExperimentResult run_inscribed(const ExperimentConfig& config) {
  if (config.side != Side::inscribed) throw ConfigError("run_inscribed: side mismatch");
  const BodyPtr body = parse_body(config.body);
  config.validate(body->dimension());
  const DensitySpec density = parse_density(*body, config.density);
  const InscribedTrial trial(body, density, config.js, config.seed);
  return run_with(config, body, density.label, trial);
}

ExperimentResult run_circumscribed(const ExperimentConfig& config) {
  if (config.side != Side::circumscribed) {
    throw ConfigError("run_circumscribed: side mismatch");
  }
  const BodyPtr body = parse_body(config.body);
  config.validate(body->dimension());
  SphereDensity normals = config.density == "uniform"
                              ? uniform_sphere_density(body->dimension())
                              : pushforward_density(body, parse_density(*body, config.density));
  const std::string label = normals.label;
  const CircumscribedTrial trial(body, std::move(normals), config.js, config.seed);
  ExperimentResult r = run_with(config, body, label, trial);
  const ResultRow& last = r.rows.back();
  if (2 * last.misses > last.trials) {
    throw MissRateError("circumscribed run: " + std::to_string(last.misses) + " of " +
                      std::to_string(last.trials) + " draws unbounded at N = " +
                      std::to_string(last.n) + "; the normal density does not span");
  }
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return config.side == Side::inscribed ? run_inscribed(config) : run_circumscribed(config);
}

// ------------------------------------------------------------------- fits --

RateFit fit_rate(std::span<const int> n, std::span<const double> mean, int dim) {
  RateFit fit;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(mean[i] > 0.0) || !std::isfinite(mean[i])) {
      fit.dropped.push_back(n[i]);
      continue;
    }
    x.push_back(std::log(static_cast<double>(n[i])));
    y.push_back(std::log(mean[i]));
    fit.point_constants.push_back(mean[i] * std::pow(n[i], 2.0 / (dim - 1.0)));
    if (fit.points == 0) fit.n_lo = n[i];
    fit.n_hi = n[i];
    ++fit.points;
  }
  if (fit.points < 4) {
    throw InputError("rate fit needs at least 4 points with positive mean (have " +
                     std::to_string(fit.points) + ")");
  }
  const double k = fit.points;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  fit.exponent = sxy / sxx;
  fit.log_const = my - fit.exponent * mx;
  double ssr = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    const double e = y[i] - (fit.log_const + fit.exponent * x[i]);
    ssr += e * e;
  }
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  return fit;
}

RateFit fit_rate(const ExperimentResult& result, int j) {
  std::vector<int> n;
  std::vector<double> mean;
  for (const auto& row : result.rows) {
    if (row.j != j) continue;
    n.push_back(row.n);
    mean.push_back(row.mean);
  }
  RateFit fit = fit_rate(n, mean, result.dim);
  fit.j = j;
  return fit;
}

// ------------------------------------------------------------------ ratio --

RatioResult ratio_experiment(const BodyPtr& body, int j, const DensitySpec& a,
                             const DensitySpec& b, const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.side = Side::inscribed;
  cfg.js = {j};
  cfg.density = a.label + "|" + b.label;
  cfg.body = body->name();
  cfg.validate(body->dimension());

  RatioResult r;
  r.body_name = body->name();
  r.density_a = a.label;
  r.density_b = b.label;
  r.j = j;
  r.seed = cfg.seed;
  r.config_hash = cfg.hash();
  const auto fn = QuantFunctional::intrinsic(body, j);
  r.predicted = eval_quant(fn, a) / eval_quant(fn, b);

  const InscribedTrial arm_a(body, a, {j}, cfg.seed);
  const InscribedTrial arm_b(body, b, {j}, cfg.seed);
  std::vector<TrialOutcome> outcomes;
  for (std::size_t k = 0; k < cfg.schedule.size(); ++k) {
    const int n = cfg.schedule[k];
    const int ki = static_cast<int>(k);
    run_loop(cfg, cfg.trials,
             [&](int t) {
               const TrialOutcome oa = arm_a(ki, n, t);
               const TrialOutcome ob = arm_b(ki, n, t);
               TrialOutcome o;
               o.miss = oa.miss || ob.miss;
               o.value[0] = oa.value[j];
               o.value[1] = ob.value[j];
               return o;
             },
             outcomes);
    RatioRow row;
    row.n = n;
    row.trials = cfg.trials;
    for (const auto& o : outcomes) row.misses += o.miss ? 1 : 0;
    const Moments ma = moments(outcomes, 0);
    const Moments mb = moments(outcomes, 1);
    row.mean_a = ma.mean;
    row.mean_b = mb.mean;
    row.ratio = ma.mean / mb.mean;
    double cov = 0.0;
    for (const auto& o : outcomes) {
      if (!o.miss) cov += (o.value[0] - ma.mean) * (o.value[1] - mb.mean);
    }
    const int c = ma.count;
    if (c > 1) {
      cov /= (c - 1.0) * c;
      const double va = ma.stderr_ * ma.stderr_;
      const double vb = mb.stderr_ * mb.stderr_;
      const double mb2 = mb.mean * mb.mean;
      const double var =
          va / mb2 + ma.mean * ma.mean * vb / (mb2 * mb2) - 2.0 * ma.mean * cov / (mb2 * mb.mean);
      row.ratio_stderr = std::sqrt(std::max(var, 0.0));
    } else {
      row.ratio_stderr = std::numeric_limits<double>::quiet_NaN();
    }
    r.rows.push_back(row);
  }
  return r;
}

// --------------------------------------------------------------- rigidity --

RigidityReport rigidity_report(const BodyPtr& body, int j1, int j2) {
  const int d = body->dimension();
  if (j1 == j2) throw InputError("rigidity needs two distinct indices (got j1 = j2)");
  if (j1 < 1 || j1 > d || j2 < 1 || j2 > d) {
    throw InputError("rigidity indices must lie in 1.." + std::to_string(d));
  }
  if (j1 > j2) std::swap(j1, j2);
  RigidityReport r;
  r.body = body->name();
  r.j1 = j1;
  r.j2 = j2;
  const DensitySpec rho1 = make_optimal_density(*body, OptimalKind::intrinsic(j1));
  const DensitySpec rho2 = make_optimal_density(*body, OptimalKind::intrinsic(j2));
  r.gap = density_gap(*body, rho1, rho2);
  r.factor_1_for_2 = suboptimality_factor(body, j2, rho1);
  r.factor_2_for_1 = suboptimality_factor(body, j1, rho2);
  r.curvature_ratio = curvature_range_ratio(*body);
  r.ball_consistent = r.gap <= 1e-6;
  return r;
}

// -------------------------------------------------------------------- csv --

void write_timestamp(std::ostream& os) {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  os << "# generated " << buf << '\n';
}

namespace {

// Grammar strings contain commas; quote them per RFC 4180.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_results_csv(std::ostream& os, const ExperimentResult& r, bool timestamp) {
  if (timestamp) write_timestamp(os);
  os << "body,density,side,j,N,trials,misses,mean,stderr,seed,config_hash\n";
  for (const auto& row : r.rows) {
    os << csv_field(r.body_name) << ',' << csv_field(r.density_label) << ','
       << to_string(r.config.side) << ',' << row.j << ',' << row.n << ',' << row.trials << ','
       << row.misses << ',' << format_number(row.mean) << ',' << format_number(row.stderr_)
       << ',' << r.config.seed << ',' << r.config_hash << '\n';
  }
}

void write_rates_csv(std::ostream& os, const ExperimentResult& r,
                     std::span<const RateFit> fits, bool timestamp) {
  if (timestamp) write_timestamp(os);
  os << "body,density,j,exponent,log_const,r2\n";
  for (const auto& f : fits) {
    os << csv_field(r.body_name) << ',' << csv_field(r.density_label) << ',' << f.j << ','
       << format_number(f.exponent) << ',' << format_number(f.log_const) << ','
       << format_number(f.r2) << '\n';
  }
}

void write_ratio_csv(std::ostream& os, const RatioResult& r, bool timestamp) {
  if (timestamp) write_timestamp(os);
  os << "body,density_a,density_b,j,N,trials,misses,mean_a,mean_b,ratio,ratio_stderr,"
        "predicted,seed,config_hash\n";
  for (const auto& row : r.rows) {
    os << csv_field(r.body_name) << ',' << csv_field(r.density_a) << ','
       << csv_field(r.density_b) << ',' << r.j << ',' << row.n << ',' << row.trials << ','
       << row.misses << ',' << format_number(row.mean_a) << ',' << format_number(row.mean_b)
       << ',' << format_number(row.ratio) << ',' << format_number(row.ratio_stderr) << ','
       << format_number(r.predicted) << ',' << r.seed << ',' << r.config_hash << '\n';
  }
}

}  // namespace polyapprox
