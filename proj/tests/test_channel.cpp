#include <cmath>

#include <gtest/gtest.h>

#include "tbt/tbt.hpp"

using namespace tbt;

TEST(Channel, BpskMapping) {
  EXPECT_EQ(bpsk_modulate(bits_from_string("0110")), (std::vector<double>{1, -1, -1, 1}));
}

TEST(Channel, NoiseVariance) {
  EXPECT_NEAR((ChannelParams{2.0, 0.5, 0}).noise_variance(), 0.630957344480193, 1e-12);
  EXPECT_NEAR((ChannelParams{0.0, 0.5, 0}).noise_variance(), 1.0, 1e-15);
  EXPECT_NEAR((ChannelParams{0.0, 0.25, 0}).noise_variance(), 2.0, 1e-15);
  EXPECT_THROW((ChannelParams{0.0, 0.0, 0}).noise_variance(), Error);
}

TEST(Channel, RngIsAPureFunctionOfItsKey) {
  const CounterRng a(5, 10, kNoiseDomain), b(5, 10, kNoiseDomain);
  const CounterRng other_stream(5, 11, kNoiseDomain), other_domain(5, 10, kMessageDomain);
  for (std::uint64_t i = 0; i < 100; ++i) EXPECT_EQ(a.bits(i), b.bits(i));
  EXPECT_NE(a.bits(0), other_stream.bits(0));
  EXPECT_NE(a.bits(0), other_domain.bits(0));
  // Reading out of order gives the same values.
  const double late = a.normal(37);
  EXPECT_EQ(b.normal(37), late);
}

TEST(Channel, NormalMoments) {
  const CounterRng rng(1, 0, kNoiseDomain);
  const std::uint64_t n = 200000;
  double s = 0, s2 = 0, s4 = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = rng.normal(i);
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 1.0, 0.02);
  EXPECT_NEAR(s4 / n, 3.0, 0.1);
}

TEST(Channel, UniformRange) {
  const CounterRng rng(3, 4, kNoiseDomain);
  double lo = 1, hi = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = rng.uniform(i);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
  }
  EXPECT_LT(lo, 0.01);
  EXPECT_GT(hi, 0.99);
}

TEST(Channel, MessagesAreBalanced) {
  std::size_t ones = 0;
  for (std::uint64_t f = 0; f < 1000; ++f) ones += hamming_weight(random_message(20, 9, f));
  EXPECT_NEAR(static_cast<double>(ones) / 20000.0, 0.5, 0.02);
  EXPECT_EQ(random_message(20, 9, 4), random_message(20, 9, 4));
}

TEST(Channel, NoiseScalesWithEbN0) {
  // Same frame id, different Eb/N0: identical normal draws, scaled by sigma.
  const std::vector<double> s(64, 1.0);
  const auto lo = awgn_transmit(s, {0.0, 0.5, 2}, 3);
  const auto hi = awgn_transmit(s, {6.0, 0.5, 2}, 3);
  const double ratio = std::sqrt(ChannelParams{6.0, 0.5, 0}.noise_variance());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(hi.r[i] - 1.0, (lo.r[i] - 1.0) * ratio, 1e-12);
}

TEST(Channel, HardDecisionAndMagnitudes) {
  const ReceivedVector rv{{0.3, -0.2, -1.5, 0.0}};
  EXPECT_EQ(to_bit_string(rv.hard_decision()), "0110");
  EXPECT_EQ(rv.magnitudes(), (std::vector<double>{0.3, 0.2, 1.5, 0.0}));
}

TEST(Channel, EdgeWeightsMatchSquaredDistance) {
  const auto code = catalog_lookup("toy-conv-m2-l8");
  const auto& t = code.trellis().trellis;
  const auto rv = awgn_transmit(std::vector<double>(t.code_length(), 1.0), {1.0, 0.5, 4}, 0);
  const auto w = edge_weights(t, rv);
  for_each_start_final_path(t, [&](std::size_t k, std::size_t j, std::span<const std::size_t> edges) {
    if (k != j) return;
    double s = 0;
    for (auto e : edges) s += w[e];
    EXPECT_NEAR(s, squared_distance(rv.r, path_labels(t, edges)), 1e-9);
  }, 1U << 12);
  EXPECT_THROW(edge_weights(t, ReceivedVector{{1.0, 2.0}}), Error);
  EXPECT_THROW(squared_distance(rv.r, BitVec(3, 0)), Error);
}
