#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbt/error.hpp"

namespace tbt {

/// GF(2) vector, one element (0 or 1) per byte.
using BitVec = std::vector<std::uint8_t>;

inline BitVec bits_from_string(std::string_view s) {
  BitVec out;
  out.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw Error(ErrorCode::ParseError, "not a bit string: '" + std::string(s) + "'");
    out.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return out;
}

inline std::string to_bit_string(std::span<const std::uint8_t> bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline void xor_into(BitVec& acc, std::span<const std::uint8_t> other) {
  if (acc.size() != other.size()) throw Error(ErrorCode::LengthMismatch, "xor of unequal lengths");
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= other[i];
}

inline BitVec xor_of(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  BitVec out(a.begin(), a.end());
  xor_into(out, b);
  return out;
}

inline bool is_zero(std::span<const std::uint8_t> bits) {
  for (auto b : bits)
    if (b) return false;
  return true;
}

inline std::size_t hamming_weight(std::span<const std::uint8_t> bits) {
  std::size_t w = 0;
  for (auto b : bits) w += b ? 1 : 0;
  return w;
}

inline std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "distance of unequal lengths");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
  return d;
}

/// Rank over GF(2) by Gaussian elimination; rows must share one length.
inline std::size_t gf2_rank(std::vector<BitVec> rows) {
  std::size_t rank = 0;
  if (rows.empty()) return 0;
  const std::size_t width = rows.front().size();
  for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][col]) xor_into(rows[r], rows[rank]);
    ++rank;
  }
  return rank;
}

/// Packs a bit vector of length <= 64 into an integer, element 0 at bit 0.
inline std::uint64_t pack_bits(std::span<const std::uint8_t> bits) {
  if (bits.size() > 64) throw Error(ErrorCode::TooLarge, "cannot pack more than 64 bits");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) v |= std::uint64_t{1} << i;
  return v;
}

inline BitVec unpack_bits(std::uint64_t v, std::size_t len) {
  BitVec out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = static_cast<std::uint8_t>((v >> i) & 1U);
  return out;
}

}  // namespace tbt
