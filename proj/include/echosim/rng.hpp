#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "echosim/bits.hpp"

namespace echosim {

// Seeded generator for one simulation run. All randomness in a run (nonces,
// start-time jitter) flows through a single instance, so a (scenario, seed)
// pair fully determines the trace. Raw engine output is mapped to doubles by
// hand because std::uniform_real_distribution is implementation-defined and
// would break cross-build reproducibility.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53 random mantissa bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  BitString bits(std::size_t n) {
    BitString out;
    out.bits.reserve(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) word = next_u64();
      out.bits.push_back(static_cast<std::uint8_t>((word >> (i % 64)) & 1u));
    }
    return out;
  }

  std::vector<std::uint8_t> bytes(std::size_t n) {
    std::vector<std::uint8_t> out;
    out.reserve(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 8 == 0) word = next_u64();
      out.push_back(static_cast<std::uint8_t>((word >> (8 * (i % 8))) & 0xffu));
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace echosim
