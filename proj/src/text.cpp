#include "polyapprox/text.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "polyapprox/errors.hpp"

namespace polyapprox {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::pair<std::string, std::string> split_kind(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {text, ""};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

std::map<std::string, double> parse_key_values(
    const std::string& text, std::initializer_list<const char*> allowed) {
  std::map<std::string, double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InputError("expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (allowed.size() != 0 &&
        std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; })) {
      throw InputError("unknown key '" + key + "'");
    }
    double v = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
      throw InputError("bad number '" + value + "' for key '" + key + "'");
    }
    if (!out.emplace(key, v).second) throw InputError("duplicate key '" + key + "'");
  }
  return out;
}

}  // namespace polyapprox
