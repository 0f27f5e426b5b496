#pragma once

// Binary linear codes: generator matrices whose rows carry linear or
// circular spans, and feedforward rate-1/2 tail-biting convolutional codes.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "tbt/bits.hpp"
#include "tbt/error.hpp"

namespace tbt {

enum class SpanKind { linear, circular };

/// Positions are 1-based, inclusive. A circular span wraps: lo..n then 1..hi.
struct Span {
  int lo = 1;
  int hi = 1;
  SpanKind kind = SpanKind::linear;

  bool covers(int pos) const {
    if (kind == SpanKind::linear) return lo <= pos && pos <= hi;
    return pos >= lo || pos <= hi;
  }
};

struct GeneratorRow {
  BitVec bits;
  Span span;
};

struct GeneratorSpec {
  int n = 0;
  std::vector<GeneratorRow> rows;

  int k() const { return static_cast<int>(rows.size()); }
  int linear_count() const {
    int l = 0;
    for (const auto& r : rows) l += r.span.kind == SpanKind::linear ? 1 : 0;
    return l;
  }
  int circular_count() const { return k() - linear_count(); }
};

inline const GeneratorSpec& validate_generator(const GeneratorSpec& spec) {
  if (spec.n < 1) throw Error(ErrorCode::InvalidArgument, "block length must be >= 1");
  if (spec.rows.empty()) throw Error(ErrorCode::EmptyCode, "generator has no rows");
  for (std::size_t r = 0; r < spec.rows.size(); ++r) {
    const auto& row = spec.rows[r];
    const std::string where = "row " + std::to_string(r + 1);
    if (row.bits.size() != static_cast<std::size_t>(spec.n))
      throw Error(ErrorCode::LengthMismatch, where + " has length " + std::to_string(row.bits.size()));
    for (auto b : row.bits)
      if (b > 1) throw Error(ErrorCode::InvalidArgument, where + " is not binary");
    if (is_zero(row.bits)) throw Error(ErrorCode::ZeroRow, where);
    const Span& s = row.span;
    if (s.lo < 1 || s.hi < 1 || s.lo > spec.n || s.hi > spec.n)
      throw Error(ErrorCode::InvalidSpan, where + " span endpoint out of range");
    if (s.kind == SpanKind::linear && s.lo > s.hi)
      throw Error(ErrorCode::InvalidSpan, where + " linear span needs lo <= hi");
    if (s.kind == SpanKind::circular && s.lo <= s.hi)
      throw Error(ErrorCode::InvalidSpan, where + " circular span needs lo > hi");
    for (int pos = 1; pos <= spec.n; ++pos)
      if (row.bits[pos - 1] && !s.covers(pos))
        throw Error(ErrorCode::SpanMismatch, where + " is nonzero at position " + std::to_string(pos) +
                                                 " outside its span");
  }
  std::vector<BitVec> g;
  for (const auto& row : spec.rows) g.push_back(row.bits);
  if (gf2_rank(g) != g.size()) throw Error(ErrorCode::DependentRows, "generator rows are linearly dependent");
  return spec;
}

inline BitVec encode_block(const GeneratorSpec& spec, const BitVec& msg) {
  if (msg.size() != spec.rows.size())
    throw Error(ErrorCode::LengthMismatch, "message length " + std::to_string(msg.size()) + " != k");
  BitVec cw(static_cast<std::size_t>(spec.n), 0);
  for (std::size_t r = 0; r < msg.size(); ++r)
    if (msg[r]) xor_into(cw, spec.rows[r].bits);
  return cw;
}

inline constexpr int kMaxEnumerationDimension = 24;

/// Calls fn(message, codeword) for all 2^k messages in counting order
/// (message bit 0 is the least significant counter bit).
inline void for_each_codeword(const GeneratorSpec& spec,
                              const std::function<void(const BitVec&, const BitVec&)>& fn) {
  const int k = spec.k();
  if (k > kMaxEnumerationDimension)
    throw Error(ErrorCode::TooLarge, "2^" + std::to_string(k) + " codewords exceed the enumeration bound");
  BitVec msg(static_cast<std::size_t>(k), 0);
  BitVec cw(static_cast<std::size_t>(spec.n), 0);
  // Gray-code walk: one row XOR per step.
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (i > 0) {
      const int flip = __builtin_ctzll(i);
      msg[flip] ^= 1;
      xor_into(cw, spec.rows[flip].bits);
    }
    fn(msg, cw);
  }
}

inline std::vector<BitVec> enumerate_codewords(const GeneratorSpec& spec) {
  std::vector<BitVec> out;
  for_each_codeword(spec, [&](const BitVec&, const BitVec& cw) { out.push_back(cw); });
  return out;
}

/// Rows of the basis spanning all start-to-final path labels: linear rows
/// unchanged, each circular row split into its head (positions 1..hi) and
/// its tail (positions lo..n).
struct SemiCodewordBasis {
  std::vector<BitVec> rows;
  int linear_rows = 0;
};

inline SemiCodewordBasis semi_codeword_basis(const GeneratorSpec& spec) {
  SemiCodewordBasis basis;
  for (const auto& row : spec.rows)
    if (row.span.kind == SpanKind::linear) basis.rows.push_back(row.bits);
  basis.linear_rows = static_cast<int>(basis.rows.size());
  for (const auto& row : spec.rows) {
    if (row.span.kind != SpanKind::circular) continue;
    BitVec head(row.bits.size(), 0), tail(row.bits.size(), 0);
    for (int pos = 1; pos <= spec.n; ++pos) {
      if (pos <= row.span.hi)
        head[pos - 1] = row.bits[pos - 1];
      else if (pos >= row.span.lo)
        tail[pos - 1] = row.bits[pos - 1];
    }
    basis.rows.push_back(std::move(head));
    basis.rows.push_back(std::move(tail));
  }
  return basis;
}

/// Parses "n k" followed by k lines "bitstring lo hi kind", kind in {L,C}.
inline GeneratorSpec parse_generator(std::istream& in) {
  GeneratorSpec spec;
  int k = 0;
  if (!(in >> spec.n >> k)) throw Error(ErrorCode::ParseError, "expected header 'n k'");
  if (k < 1) throw Error(ErrorCode::EmptyCode, "k must be >= 1");
  for (int r = 0; r < k; ++r) {
    std::string bits, kind;
    GeneratorRow row;
    if (!(in >> bits >> row.span.lo >> row.span.hi >> kind))
      throw Error(ErrorCode::ParseError, "row " + std::to_string(r + 1) + " is malformed");
    row.bits = bits_from_string(bits);
    if (kind == "L")
      row.span.kind = SpanKind::linear;
    else if (kind == "C")
      row.span.kind = SpanKind::circular;
    else
      throw Error(ErrorCode::ParseError, "span kind must be L or C, got '" + kind + "'");
    spec.rows.push_back(std::move(row));
  }
  validate_generator(spec);
  return spec;
}

inline GeneratorSpec parse_generator(const std::string& text) {
  std::istringstream in(text);
  return parse_generator(in);
}

inline std::string format_generator(const GeneratorSpec& spec) {
  std::ostringstream out;
  out << spec.n << ' ' << spec.k() << '\n';
  for (const auto& row : spec.rows)
    out << to_bit_string(row.bits) << ' ' << row.span.lo << ' ' << row.span.hi << ' '
        << (row.span.kind == SpanKind::linear ? 'L' : 'C') << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Tail-biting convolutional codes

struct ConvCodeSpec {
  int memory = 1;
  BitVec taps0;  // taps0[d] multiplies u_{t-d}
  BitVec taps1;
  int circle = 1;  // number of trellis sections, 2 output bits each

  int message_bits() const { return circle; }
  int codeword_bits() const { return 2 * circle; }
};

inline const ConvCodeSpec& validate_conv(const ConvCodeSpec& spec) {
  if (spec.memory < 1) throw Error(ErrorCode::InvalidArgument, "memory must be >= 1");
  if (spec.memory > 16) throw Error(ErrorCode::TooLarge, "memory above 16 is not supported");
  const auto taps = static_cast<std::size_t>(spec.memory + 1);
  if (spec.taps0.size() != taps || spec.taps1.size() != taps)
    throw Error(ErrorCode::LengthMismatch, "each tap vector needs memory+1 coefficients");
  for (auto b : spec.taps0)
    if (b > 1) throw Error(ErrorCode::InvalidArgument, "taps must be binary");
  for (auto b : spec.taps1)
    if (b > 1) throw Error(ErrorCode::InvalidArgument, "taps must be binary");
  if (spec.taps0[0] == 0 && spec.taps1[0] == 0)
    throw Error(ErrorCode::InvalidArgument, "at least one polynomial needs a leading 1 tap");
  if (spec.circle < spec.memory) throw Error(ErrorCode::InvalidArgument, "circle must be >= memory");
  return spec;
}

/// Output pair at step t is (sum_d taps0[d] u_{t-d}, sum_d taps1[d] u_{t-d}),
/// indices taken mod circle, so the register starts in the state it ends in.
inline BitVec encode_conv_tailbiting(const ConvCodeSpec& spec, const BitVec& msg) {
  const int L = spec.circle;
  if (msg.size() != static_cast<std::size_t>(L))
    throw Error(ErrorCode::LengthMismatch, "message length " + std::to_string(msg.size()) + " != circle");
  BitVec out(static_cast<std::size_t>(2 * L), 0);
  for (int t = 0; t < L; ++t) {
    std::uint8_t a = 0, b = 0;
    for (int d = 0; d <= spec.memory; ++d) {
      const std::uint8_t u = msg[static_cast<std::size_t>(((t - d) % L + L) % L)];
      a ^= spec.taps0[d] & u;
      b ^= spec.taps1[d] & u;
    }
    out[2 * t] = a;
    out[2 * t + 1] = b;
  }
  return out;
}

/// Expands an octal generator name MSB-first, drops trailing zero bits and
/// returns the remaining coefficients (e.g. 72 -> 11101).
inline BitVec taps_from_octal(std::string_view octal) {
  BitVec bits;
  for (char ch : octal) {
    if (ch < '0' || ch > '7') throw Error(ErrorCode::ParseError, "not an octal digit: " + std::string(1, ch));
    const int v = ch - '0';
    for (int s = 2; s >= 0; --s) bits.push_back(static_cast<std::uint8_t>((v >> s) & 1));
  }
  while (!bits.empty() && bits.front() == 0) bits.erase(bits.begin());
  while (!bits.empty() && bits.back() == 0) bits.pop_back();
  return bits;
}

/// Generator rows of the tail-biting code: row t is the response to a unit
/// impulse at step t. Responses that wrap past the last section get a
/// circular span. Needs circle > memory so every wrapped span has lo > hi.
inline GeneratorSpec conv_to_generator(const ConvCodeSpec& spec) {
  validate_conv(spec);
  if (spec.circle <= spec.memory)
    throw Error(ErrorCode::InvalidArgument, "generator form needs circle > memory");
  GeneratorSpec g;
  g.n = spec.codeword_bits();
  for (int t = 0; t < spec.circle; ++t) {
    BitVec msg(static_cast<std::size_t>(spec.circle), 0);
    msg[t] = 1;
    GeneratorRow row;
    row.bits = encode_conv_tailbiting(spec, msg);
    const int end = t + spec.memory;
    row.span.lo = 2 * t + 1;
    if (end < spec.circle) {
      row.span.hi = 2 * end + 2;
      row.span.kind = SpanKind::linear;
    } else {
      row.span.hi = 2 * (end - spec.circle) + 2;
      row.span.kind = SpanKind::circular;
    }
    g.rows.push_back(std::move(row));
  }
  validate_generator(g);
  return g;
}

}  // namespace tbt
