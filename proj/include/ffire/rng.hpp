#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ffire {

/// Identifies one independent random stream. Equal handles reproduce
/// identical draws bit-for-bit.
struct RngHandle {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngHandle with_stream(std::uint64_t s) const { return {seed, s}; }
  friend bool operator==(const RngHandle&, const RngHandle&) = default;
};

/// Engine bound to a handle. mt19937_64 and seed_seq are fully specified by
/// the standard; the variate transforms below are written out so results do
/// not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(RngHandle handle) {
    std::seed_seq seq{static_cast<std::uint32_t>(handle.seed), static_cast<std::uint32_t>(handle.seed >> 32),
                      static_cast<std::uint32_t>(handle.stream), static_cast<std::uint32_t>(handle.stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t bits() { return engine_(); }

  /// Uniform on (0, 1], 53 random bits.
  double uniform_open0() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Unit-rate exponential by inversion.
  double exponential() { return -std::log(uniform_open0()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ffire
