#pragma once

#include <initializer_list>
#include <map>
#include <string>
#include <utility>

namespace polyapprox {

/// Shortest round-trip decimal form of v.
std::string format_number(double v);

/// Splits "kind:rest" into {"kind", "rest"}; rest is empty without a colon.
std::pair<std::string, std::string> split_kind(const std::string& text);

/// Parses "k1=v1,k2=v2". When `allowed` is non-empty, other keys are an
/// InputError. Duplicate keys are an InputError.
std::map<std::string, double> parse_key_values(
    const std::string& text, std::initializer_list<const char*> allowed);

}  // namespace polyapprox
