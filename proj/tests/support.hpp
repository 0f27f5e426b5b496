#pragma once

// Test-side frame generation, kept separate from the library RNG.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tbt/tbt.hpp"

namespace tbt_test {

struct Frame {
  tbt::BitVec message;
  tbt::BitVec codeword;
  tbt::ReceivedVector rv;
};

inline Frame random_frame(const tbt::CodeUnderTest& code, std::mt19937_64& rng, double ebn0_db) {
  Frame f;
  std::bernoulli_distribution coin(0.5);
  f.message.resize(code.message_bits());
  for (auto& b : f.message) b = coin(rng) ? 1 : 0;
  f.codeword = code.encode(f.message);
  const double sigma = std::sqrt(1.0 / (2.0 * code.rate() * std::pow(10.0, ebn0_db / 10.0)));
  std::normal_distribution<double> noise(0.0, sigma);
  f.rv.r.resize(f.codeword.size());
  for (std::size_t i = 0; i < f.codeword.size(); ++i) f.rv.r[i] = (f.codeword[i] ? -1.0 : 1.0) + noise(rng);
  return f;
}

inline double rel_diff(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

inline std::vector<std::string> toy_codes() {
  return {"toy-conv-m2-l8", "toy-block-n4", "toy-product-n8k4c1", "toygen-conv-m2-l5", "toygen-conv-m2-l8"};
}

}  // namespace tbt_test
