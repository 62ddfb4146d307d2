#include "polyapprox/rng.hpp"

#include <vector>

namespace polyapprox {

RngStream::RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
  std::vector<std::uint32_t> key;
  key.reserve(2 * (coords.size() + 1));
  auto push = [&](std::uint64_t v) {
    key.push_back(static_cast<std::uint32_t>(v));
    key.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  std::uint64_t id = seed;
  for (std::uint64_t c : coords) {
    push(c);
    id = id * 0x9E3779B97F4A7C15ULL + c + 1;
  }
  std::seed_seq seq(key.begin(), key.end());
  engine_.seed(seq);
  id_ = id;
}

}  // namespace polyapprox
