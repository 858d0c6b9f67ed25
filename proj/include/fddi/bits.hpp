#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fddi/error.hpp"

namespace fddi {

// One bit per element, values 0 or 1. Bytes are always serialized
// most-significant bit first.
using Bits = std::vector<std::uint8_t>;

inline Bits bits_from_string(std::string_view text) {
  Bits out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') {
      out.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
      continue;
    } else {
      throw Error("BadBitString", std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

inline std::string to_string(std::span<const std::uint8_t> bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline Bits bytes_to_bits(std::span<const std::uint8_t> bytes) {
  Bits out;
  out.reserve(bytes.size() * 8);
  for (auto byte : bytes)
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((byte >> i) & 1U));
  return out;
}

// Trailing bits that do not fill a byte are zero-padded on the right.
inline std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
  return out;
}

inline std::size_t popcount(std::span<const std::uint8_t> bits) {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

// Longest run of identical consecutive values.
inline std::size_t longest_run(std::span<const std::uint8_t> bits) {
  std::size_t best = 0, cur = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    cur = (i > 0 && bits[i] == bits[i - 1]) ? cur + 1 : 1;
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace fddi
