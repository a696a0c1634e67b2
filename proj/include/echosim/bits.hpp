#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace echosim {

// Marker for a bit destroyed by equal-power collision. Never equal to a real
// bit, so every integrity comparison downstream fails on it.
inline constexpr std::uint8_t kGarbleBit = 2;

// Payload bits as they exist on the air: 0, 1, or the garble marker.
struct BitString {
  std::vector<std::uint8_t> bits;

  static BitString from_bytes(const std::vector<std::uint8_t>& bytes);
  static BitString from_u64(std::uint64_t value);  // 64 bits, MSB first

  std::size_t size() const { return bits.size(); }
  bool empty() const { return bits.empty(); }
  bool clean() const;  // true iff no garble marker present
  std::optional<std::vector<std::uint8_t>> to_bytes() const;
  BitString slice(std::size_t from) const;  // [from, size)
  void append(const BitString& other);

  friend bool operator==(const BitString&, const BitString&) = default;
};

// "0101" rendering, '?' for garbled positions.
std::string to_string(const BitString& bs);

}  // namespace echosim
