#include "echosim/bits.hpp"

namespace echosim {

BitString BitString::from_bytes(const std::vector<std::uint8_t>& bytes) {
  BitString out;
  out.bits.reserve(bytes.size() * 8);
  for (std::uint8_t b : bytes)
    for (int i = 7; i >= 0; --i) out.bits.push_back((b >> i) & 1u);
  return out;
}

BitString BitString::from_u64(std::uint64_t value) {
  BitString out;
  out.bits.reserve(64);
  for (int i = 63; i >= 0; --i) out.bits.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
  return out;
}

bool BitString::clean() const {
  for (std::uint8_t b : bits)
    if (b == kGarbleBit) return false;
  return true;
}

std::optional<std::vector<std::uint8_t>> BitString::to_bytes() const {
  if (bits.size() % 8 != 0) return std::nullopt;
  std::vector<std::uint8_t> out;
  out.reserve(bits.size() / 8);
  for (std::size_t i = 0; i < bits.size(); i += 8) {
    std::uint8_t b = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      if (bits[i + j] == kGarbleBit) return std::nullopt;
      b = static_cast<std::uint8_t>((b << 1) | bits[i + j]);
    }
    out.push_back(b);
  }
  return out;
}

BitString BitString::slice(std::size_t from) const {
  BitString out;
  if (from < bits.size()) out.bits.assign(bits.begin() + static_cast<std::ptrdiff_t>(from), bits.end());
  return out;
}

void BitString::append(const BitString& other) {
  bits.insert(bits.end(), other.bits.begin(), other.bits.end());
}

std::string to_string(const BitString& bs) {
  std::string s;
  s.reserve(bs.size());
  for (std::uint8_t b : bs.bits) s.push_back(b == kGarbleBit ? '?' : static_cast<char>('0' + b));
  return s;
}

}  // namespace echosim
