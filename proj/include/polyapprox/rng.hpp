#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace polyapprox {

/// Independent random stream keyed by (global seed, stream coordinates).
///
/// The engine state depends only on the key, so a trial draws the same
/// numbers no matter which worker runs it or in what order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> coords);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t bits() { return engine_(); }
  std::uint64_t id() const { return id_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t id_ = 0;
};

}  // namespace polyapprox
