#include "echosim/oneway.hpp"

namespace echosim {

std::uint64_t hash64(std::span<const std::uint8_t> data) {
  std::uint64_t state = 0xcbf29ce484222325ull;
  for (std::uint8_t byte : data) {
    state ^= byte;
    state *= 0x00000100000001B3ull;
  }
  return state;
}

}  // namespace echosim
