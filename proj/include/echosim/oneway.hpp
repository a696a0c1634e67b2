#pragma once

#include <cstdint>
#include <span>

namespace echosim {

// FNV-1a, 64-bit. state <- 0xcbf29ce484222325; per byte:
// state <- (state XOR byte) * 0x00000100000001B3 mod 2^64. Bit-exact.
std::uint64_t hash64(std::span<const std::uint8_t> data);

}  // namespace echosim
