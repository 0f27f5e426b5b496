#pragma once

// BPSK over AWGN and the mapping from received samples to edge weights.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "tbt/bits.hpp"
#include "tbt/error.hpp"
#include "tbt/trellis.hpp"

namespace tbt {

inline std::vector<double> bpsk_modulate(std::span<const std::uint8_t> codeword) {
  std::vector<double> s(codeword.size());
  for (std::size_t i = 0; i < codeword.size(); ++i) s[i] = codeword[i] ? -1.0 : 1.0;
  return s;
}

struct ChannelParams {
  double ebn0_db = 0.0;
  double rate = 0.5;
  std::uint64_t seed = 0;

  /// Unit symbol energy: sigma^2 = 1 / (2 R 10^(Eb/N0 / 10)).
  double noise_variance() const {
    if (!(rate > 0.0 && rate <= 1.0)) throw Error(ErrorCode::InvalidArgument, "rate must lie in (0, 1]");
    return 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
  }
};

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, domain, index), so frames can be simulated in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t domain)
      : key_(mix(mix(seed ^ 0x6a09e667f3bcc909ULL) ^ mix(stream + 0x9e3779b97f4a7c15ULL) ^
                 (domain * 0xbb67ae8584caa73bULL))) {}

  std::uint64_t bits(std::uint64_t index) const { return mix(key_ ^ mix(index * 0xd1b54a32d192ed03ULL + 1)); }

  /// Uniform on (0, 1].
  double uniform(std::uint64_t index) const {
    return static_cast<double>((bits(index) >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; draws 2i and 2i+1 share one uniform pair.
  double normal(std::uint64_t index) const {
    const std::uint64_t pair = index / 2;
    const double radius = std::sqrt(-2.0 * std::log(uniform(2 * pair)));
    const double angle = 2.0 * std::numbers::pi * uniform(2 * pair + 1);
    return radius * ((index & 1U) ? std::sin(angle) : std::cos(angle));
  }

 private:
  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

inline constexpr std::uint64_t kNoiseDomain = 1;
inline constexpr std::uint64_t kMessageDomain = 2;

struct ReceivedVector {
  std::vector<double> r;

  std::vector<double> magnitudes() const {
    std::vector<double> m(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) m[i] = std::fabs(r[i]);
    return m;
  }

  /// r_l < 0 maps to 1.
  BitVec hard_decision() const {
    BitVec y(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) y[i] = r[i] < 0.0 ? 1 : 0;
    return y;
  }
};

inline ReceivedVector awgn_transmit(std::span<const double> signal, const ChannelParams& params, std::uint64_t stream) {
  const double sigma = std::sqrt(params.noise_variance());
  const CounterRng rng(params.seed, stream, kNoiseDomain);
  ReceivedVector rv;
  rv.r.resize(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) rv.r[i] = signal[i] + sigma * rng.normal(i);
  return rv;
}

inline BitVec random_message(std::size_t bits, std::uint64_t seed, std::uint64_t stream) {
  const CounterRng rng(seed, stream, kMessageDomain);
  BitVec msg(bits);
  for (std::size_t i = 0; i < bits; ++i) msg[i] = static_cast<std::uint8_t>(rng.bits(i) >> 63);
  return msg;
}

/// Squared Euclidean distance between a received block and a candidate.
inline double squared_distance(std::span<const double> r, std::span<const std::uint8_t> codeword) {
  if (r.size() != codeword.size()) throw Error(ErrorCode::LengthMismatch, "received/codeword length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = r[i] - (codeword[i] ? -1.0 : 1.0);
    acc += d * d;
  }
  return acc;
}

/// w(u,v) = sum over the label bits of (r_l - s(c_l))^2.
inline WeightAssignment edge_weights(const Trellis& t, const ReceivedVector& rv) {
  const std::size_t b = static_cast<std::size_t>(t.label_width());
  if (rv.r.size() != t.code_length())
    throw Error(ErrorCode::LengthMismatch, "received length " + std::to_string(rv.r.size()) +
                                               " != sections * label width " + std::to_string(t.code_length()));
  WeightAssignment w;
  w.w.resize(t.num_edges());
  std::vector<double> by_label(std::size_t{1} << b);
  for (std::size_t s = 0; s < t.num_sections(); ++s) {
    for (std::uint32_t lab = 0; lab < by_label.size(); ++lab) {
      double acc = 0.0;
      for (std::size_t j = 0; j < b; ++j) {
        const double d = rv.r[s * b + j] - (((lab >> j) & 1U) ? -1.0 : 1.0);
        acc += d * d;
      }
      by_label[lab] = acc;
    }
    const std::size_t base = t.edge_begin(s);
    const auto& edges = t.sections()[s];
    for (std::size_t i = 0; i < edges.size(); ++i) w.w[base + i] = by_label[edges[i].label];
  }
  return w;
}

}  // namespace tbt
