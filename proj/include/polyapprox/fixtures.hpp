#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyapprox {

/// A regression value: quadrature results and seeded Monte Carlo numbers
/// that tests compare against. `tol` is absolute.
struct Fixture {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
};

/// $POLYAPPROX_FIXTURES if set, else tests/fixtures/derived_values.txt in
/// the source tree.
std::string fixture_path();

/// Text format: one "name value tol" per line; '#' starts a comment.
std::vector<Fixture> read_fixtures(const std::string& path);
void write_fixtures(std::ostream& os, const std::vector<Fixture>& fixtures);

/// Recomputes every fixture from scratch.
std::vector<Fixture> compute_fixtures();

/// Looks up `name`; throws InputError when absent.
const Fixture& find_fixture(const std::vector<Fixture>& fixtures, const std::string& name);

}  // namespace polyapprox
