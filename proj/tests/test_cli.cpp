#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "polyapprox/commands.hpp"
#include "polyapprox/geometry.hpp"

using namespace polyapprox;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "polyapprox");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("polyapprox_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Minimal RFC 4180 reader; '#' lines are comments.
std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(slurp(p));
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cells.back() += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          cells.back() += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        cells.emplace_back();
      } else {
        cells.back() += ch;
      }
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  FAIL("missing column " << name);
  return -1;
}

nlohmann::json summary(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "summary.json")); }

}  // namespace

TEST_CASE("inscribe writes one row per schedule point") {
  const fs::path dir = scratch("inscribe");
  const Run r = cli({"inscribe", "--body", "ellipse:a=2,b=1", "--density", "opt:volume", "--j", "2",
                     "--n", "32:4096", "--trials", "2000", "--seed", "7", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(dir / "results.csv");
  REQUIRE(rows.size() == 9);
  const int n = column(rows[0], "N");
  CHECK(rows[1][n] == "32");
  CHECK(rows[8][n] == "4096");
  CHECK(rows[1][column(rows[0], "body")] == "ellipse:a=2,b=1");
  CHECK(slurp(dir / "results.csv").rfind("# generated ", 0) == 0);
  const auto rates = read_csv(dir / "rates.csv");
  REQUIRE(rates.size() == 2);
  CHECK(std::stod(rates[1][column(rates[0], "exponent")]) == doctest::Approx(-2.0).epsilon(0.075));
  const auto s = summary(dir);
  CHECK(s["command"] == "inscribe");
  CHECK(s["seed"] == 7);
  CHECK(s["schedule"].size() == 8);
  CHECK(s["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("circumscribed disc stops missing after the first point") {
  const fs::path dir = scratch("circ");
  const Run r = cli({"circumscribe", "--body", "ball:r=1", "--density", "uniform", "--n", "32:1024",
                     "--trials", "1000", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(dir / "results.csv");
  const int n = column(rows[0], "N"), m = column(rows[0], "misses");
  REQUIRE(rows.size() == 1 + 6 * 2);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][n] != "32") CHECK(rows[i][m] == "0");
  }
  const auto s = summary(dir);
  CHECK(s["fits"].size() == 2);
}

TEST_CASE("exit codes") {
  Run r = cli({"inscribe", "--n", "32:64"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--body") != std::string::npos);
  CHECK(cli({"inscribe", "--body", "triangle", "--out", scratch("x").string()}).code == 2);
  CHECK(cli({"inscribe", "--body", "ball:r=1", "--trials", "10", "--out", scratch("x").string()}).code == 2);
  CHECK(cli({"inscribe", "--body", "ball:r=1", "--j", "3", "--out", scratch("x").string()}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  // Underflowing density: numerical failure.
  r = cli({"inscribe", "--body", "ellipse:a=2,b=1", "--density", "custom:alpha=-1000", "--n", "32:64",
           "--trials", "100", "--out", scratch("x").string()});
  CHECK(r.code == 3);
  // Four uniform normals in 3D rarely span: misses over one half, exit 3.
  r = cli({"circumscribe", "--body", "ball:r=1,d=3", "--n", "4", "--trials", "200", "--j", "3",
           "--out", scratch("x").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("unbounded") != std::string::npos);
}

TEST_CASE("rigidity verdicts") {
  fs::path dir = scratch("rig_ball");
  REQUIRE(cli({"rigidity", "--body", "ball:r=1", "--j1", "1", "--j2", "2", "--out", dir.string()}).code == 0);
  auto s = summary(dir);
  CHECK(s["rigidity"]["verdict"] == "ball-consistent");
  CHECK(s["rigidity"]["gap"].get<double>() <= 1e-12);

  dir = scratch("rig_ellipse");
  REQUIRE(cli({"rigidity", "--body", "ellipse:a=2,b=1", "--j1", "1", "--j2", "2", "--out", dir.string()}).code == 0);
  s = summary(dir);
  CHECK(s["rigidity"]["verdict"] == "not ball-consistent");
  CHECK(s["rigidity"]["gap"].get<double>() >= 0.01);

  CHECK(cli({"rigidity", "--body", "ellipse:a=2,b=1", "--j1", "2", "--j2", "2", "--out", scratch("x").string()}).code == 2);
}

TEST_CASE("density tabulation on the ball is constant") {
  const fs::path dir = scratch("density");
  REQUIRE(cli({"density", "--body", "ball:r=1", "--kind", "opt:meanwidth", "--grid", "16", "--out",
               dir.string(), "--no-timestamp"})
              .code == 0);
  const auto rows = read_csv(dir / "density.csv");
  REQUIRE(rows.size() == 17);
  const int c = column(rows[0], "density");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][c] == rows[1][c]);
  }
  CHECK(std::stod(rows[1][c]) == doctest::Approx(1 / (2 * kPi)));
}

TEST_CASE("bestpoly artifacts") {
  const fs::path dir = scratch("bestpoly");
  REQUIRE(cli({"bestpoly", "--body", "ellipse:a=2,b=1", "--n", "48", "--objective", "area", "--grid",
               "1024", "--out", dir.string()})
              .code == 0);
  std::istringstream off(slurp(dir / "bestpoly.off"));
  std::string tag;
  int nv = 0, nf = 0, ne = 0;
  off >> tag >> nv >> nf >> ne;
  CHECK(tag == "OFF");
  CHECK(nv == 48);
  CHECK(nf == 1);
  const auto hist = read_csv(dir / "histogram.csv");
  REQUIRE(hist.size() == 65);
  double total = 0.0;
  for (std::size_t i = 1; i < hist.size(); ++i) total += std::stod(hist[i][column(hist[0], "vertex_fraction")]);
  CHECK(total == doctest::Approx(1.0));
  const auto s = summary(dir);
  CHECK(s["bestpoly"]["f0_over_n"].get<double>() == 1.0);
  CHECK(s["bestpoly"]["tv_opt_volume"].get<double>() < s["bestpoly"]["tv_opt_meanwidth"].get<double>());
  CHECK(cli({"bestpoly", "--body", "ellipse:a=2,b=1", "--n", "48", "--grid", "100", "--out",
             scratch("x").string()})
            .code == 2);
}

TEST_CASE("csv output does not depend on the worker count") {
  std::string first;
  for (const char* w : {"1", "3"}) {
    const fs::path dir = scratch(std::string("workers") + w);
    REQUIRE(cli({"inscribe", "--body", "ellipsoid:a=1,b=1,c=1.5", "--density", "opt:meanwidth", "--j", "1",
                 "--j", "3", "--n", "16:128", "--trials", "100", "--seed", "11", "--workers", w,
                 "--no-timestamp", "--out", dir.string()})
                .code == 0);
    const std::string csv = slurp(dir / "results.csv") + slurp(dir / "rates.csv");
    CHECK(csv.find("# generated") == std::string::npos);
    if (first.empty()) {
      first = csv;
    } else {
      CHECK(csv == first);
    }
  }
}

TEST_CASE("ratio command") {
  const fs::path dir = scratch("ratio");
  REQUIRE(cli({"ratio", "--body", "ball:r=1", "--j", "2", "--density-a", "uniform", "--density-b",
               "opt:volume", "--n", "32:64", "--trials", "100", "--out", dir.string()})
              .code == 0);
  const auto rows = read_csv(dir / "ratio.csv");
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][column(rows[0], "ratio")]) == 1.0);
  CHECK(summary(dir)["ratio"]["predicted"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("config file supplies the same flags") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  const fs::path ini = dir / "run.ini";
  {
    std::ofstream os(ini);
    os << "[inscribe]\nbody=\"ball:r=1\"\nn=\"32:64\"\ntrials=100\nseed=5\nno-timestamp=true\n";
  }
  const fs::path a = dir / "a", b = dir / "b";
  REQUIRE(cli({"--config", ini.string(), "inscribe", "--out", a.string()}).code == 0);
  REQUIRE(cli({"inscribe", "--body", "ball:r=1", "--n", "32:64", "--trials", "100", "--seed", "5",
               "--no-timestamp", "--out", b.string()})
              .code == 0);
  CHECK(slurp(a / "results.csv") == slurp(b / "results.csv"));
}

TEST_CASE("fixtures check and regeneration") {
  const fs::path dir = scratch("fixtures");
  fs::create_directories(dir);
  const fs::path copy = dir / "values.txt";
  {
    // Start from a deliberately wrong value so the diff report has work to do.
    std::ofstream os(copy);
    os << "ellipse_perimeter 1.0 1e-9\n";
  }
  setenv("POLYAPPROX_FIXTURES", copy.c_str(), 1);
  Run r = cli({"fixtures"});
  CHECK(r.code == 3);
  CHECK(r.out.find("ellipse_perimeter") != std::string::npos);
  CHECK(r.out.find("OUT OF TOLERANCE") != std::string::npos);
  r = cli({"fixtures", "--regen"});
  CHECK(r.code == 0);
  CHECK(r.out.find("delta") != std::string::npos);
  r = cli({"fixtures"});
  CHECK(r.code == 0);
  CHECK(r.out.find("OUT OF TOLERANCE") == std::string::npos);
  unsetenv("POLYAPPROX_FIXTURES");
}
