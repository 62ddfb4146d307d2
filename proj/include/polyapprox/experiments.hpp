#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "polyapprox/bodies.hpp"
#include "polyapprox/polytope.hpp"
#include "polyapprox/sampling.hpp"

namespace polyapprox {

/// Expands "lo:hi" to lo, 2 lo, 4 lo, ... <= hi; a single integer is a
/// one-point schedule. Throws InputError on malformed text or lo < 4.
std::vector<int> parse_schedule(const std::string& text);

struct ExperimentConfig {
  std::string body;     // body grammar
  std::string density;  // density grammar; for circumscribed runs "uniform"
                        // means uniform normals, anything else is pushed
                        // forward through the Gauss map of the body
  Side side = Side::inscribed;
  std::vector<int> js;
  std::vector<int> schedule;
  int trials = 100;
  std::uint64_t seed = 1;
  int workers = 0;      // 0: all logical processors
  bool serial = false;  // use the single-threaded reference loop

  /// Throws ConfigError when the schedule is not strictly increasing, trials
  /// < 100, or a j is outside 1..d.
  void validate(int dim) const;
  /// Canonical text of everything that determines the numbers (not workers).
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string hash() const;
};

struct ResultRow {
  int n = 0;
  int j = 0;
  int trials = 0;  // attempted
  int misses = 0;  // excluded from mean and stderr
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::string body_name;
  std::string density_label;
  int dim = 2;
  std::string config_hash;
  std::vector<ResultRow> rows;  // ordered by N, then j
};

ExperimentResult run_inscribed(const ExperimentConfig& config);
/// Misses are counted and excluded. MissRateError (a ConfigError) when more
/// than half of the trials at the largest N are unbounded.
ExperimentResult run_circumscribed(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

struct RateFit {
  int j = 0;
  double exponent = 0.0;
  double log_const = 0.0;  // natural log of the fitted constant
  double r2 = 0.0;
  int n_lo = 0;
  int n_hi = 0;
  int points = 0;
  std::vector<int> dropped;              // N values with nonpositive mean
  std::vector<double> point_constants;   // mean * N^{2/(d-1)} per used point
};

/// OLS of log(mean) on log(N). Throws InputError with fewer than 4 usable
/// points.
RateFit fit_rate(std::span<const int> n, std::span<const double> mean, int dim);
RateFit fit_rate(const ExperimentResult& result, int j);

struct RatioRow {
  int n = 0;
  int trials = 0;
  int misses = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double ratio = 0.0;
  double ratio_stderr = 0.0;  // delta method with the paired covariance
};

struct RatioResult {
  std::string body_name;
  std::string density_a;
  std::string density_b;
  int j = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  double predicted = 0.0;  // I_j(a) / I_j(b)
  std::vector<RatioRow> rows;
};

/// Paired inscribed runs: trial t at schedule point k draws both polytopes
/// from the same substream (seed, k, t), which correlates the two arms and
/// shrinks the variance of the ratio. `config.density` and `config.js` are
/// ignored.
RatioResult ratio_experiment(const BodyPtr& body, int j, const DensitySpec& a,
                             const DensitySpec& b, const ExperimentConfig& config);

enum class Objective { area, perimeter };

Objective parse_objective(const std::string& text);

constexpr int kHistogramBins = 64;

struct BestPolygon {
  Polygon polygon;
  std::vector<int> grid_index;  // vertex positions in the G-point grid
  int anchor = 0;
  double objective = 0.0;       // area or perimeter of the polygon
  double deviation = 0.0;       // j = 2 for area, j = 1 for perimeter
  std::vector<double> histogram;  // vertex fraction per equal-arclength bin
};

/// Near-best inscribed N-gon on a planar body: G equal-parameter grid
/// points; for each of `starts` evenly spaced anchors an O(N G^2) dynamic
/// program chooses the remaining N - 1 vertices in cyclic order. Throws
/// InputError when G < 8N, starts < 8 or the body is not planar.
BestPolygon best_polygon_dp(const BodyPtr& body, int n, int grid, Objective objective,
                            int starts = 8);

/// Arclength-uniform bins of a planar boundary.
class ArclengthBins {
 public:
  ArclengthBins(const ConvexBody& body, int bins = kHistogramBins);

  double length() const { return length_; }
  /// Bin containing the boundary point at parameter theta.
  int bin_of(double theta) const;
  /// Parameter at the lower edge of bin b (b = bins gives the full turn).
  double edge(int b) const { return edges_[b]; }
  /// Probability of each bin under a boundary density.
  std::vector<double> masses(const DensitySpec& density) const;

 private:
  double arclength(double theta) const;

  const ConvexBody& body_;
  int bins_;
  double length_ = 0.0;
  std::vector<double> edges_;
};

/// (1/2) sum_b |p_b - q_b|.
double histogram_tv(std::span<const double> p, std::span<const double> q);

struct RigidityReport {
  std::string body;
  int j1 = 0;
  int j2 = 0;
  double gap = 0.0;          // TV between the two optimal densities
  double factor_1_for_2 = 0.0;  // cost of using rho_{j1} for target j2
  double factor_2_for_1 = 0.0;  // cost of using rho_{j2} for target j1
  double curvature_ratio = 0.0;
  bool ball_consistent = false;  // gap <= 1e-6
};

/// Throws InputError unless j1 and j2 are distinct indices in 1..d; the
/// pair is reported in increasing order.
RigidityReport rigidity_report(const BodyPtr& body, int j1, int j2);

// CSV emitters. A "# generated <UTC time>" line is written first unless
// `timestamp` is false.
void write_results_csv(std::ostream& os, const ExperimentResult& r, bool timestamp);
void write_rates_csv(std::ostream& os, const ExperimentResult& r,
                     std::span<const RateFit> fits, bool timestamp);
void write_ratio_csv(std::ostream& os, const RatioResult& r, bool timestamp);
void write_timestamp(std::ostream& os);

}  // namespace polyapprox
