#include <cstdlib>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tbt/tbt.hpp"

using namespace tbt;

namespace {

// Codeword labels per subtrellis, by exhaustive path walk.
std::map<std::size_t, std::set<std::string>> codeword_paths(const Trellis& t) {
  std::map<std::size_t, std::set<std::string>> out;
  for_each_start_final_path(t, [&](std::size_t k, std::size_t j, std::span<const std::size_t> edges) {
    if (k == j) out[k].insert(to_bit_string(path_labels(t, edges)));
  });
  return out;
}

std::set<std::string> all_codeword_labels(const Trellis& t) {
  std::set<std::string> s;
  for (const auto& [i, labels] : codeword_paths(t)) s.insert(labels.begin(), labels.end());
  return s;
}

std::set<std::string> code_set(const GeneratorSpec& g) {
  std::set<std::string> s;
  for (const auto& c : enumerate_codewords(g)) s.insert(to_bit_string(c));
  return s;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) { setenv("TBT_MAX_T", value, 1); }
  ~EnvGuard() { unsetenv("TBT_MAX_T"); }
};

}  // namespace

TEST(Trellis, ToyBlockGolden) {
  const auto t = build_reach_index(build_tbt_product(toy_block_n4())).trellis;
  const std::string golden =
      R"({"label_width":1,"vertex_counts":[2,2,1,1,2],"sections":[[[0,0,"0"],[1,0,"1"],[0,1,"1"],[1,1,"0"]],)"
      R"([[0,0,"0"],[1,0,"1"]],[[0,0,"0"]],[[0,0,"0"],[0,1,"1"]]],"starts":[0,1],"finals":[0,1]})";
  EXPECT_EQ(trellis_to_json(t).dump(), golden);
}

TEST(Trellis, JsonRoundTrip) {
  const auto t = build_tbt_conv(conv_from_octal(2, "7", "5", 5));
  const auto again = trellis_from_json(nlohmann::ordered_json::parse(trellis_to_json(t).dump()));
  EXPECT_EQ(trellis_to_json(again).dump(), trellis_to_json(t).dump());
  EXPECT_THROW(trellis_from_json(nlohmann::ordered_json::parse(R"({"label_width":1})")), Error);
}

TEST(Trellis, ConstructorRejectsBadShapes) {
  EXPECT_THROW(Trellis(1, {1, 1}, {{Edge{0, 1, 0}}}, {0}, {0}), Error);
  EXPECT_THROW(Trellis(1, {1, 1}, {{Edge{0, 0, 2}}}, {0}, {0}), Error);
  EXPECT_THROW(Trellis(1, {1, 1}, {{Edge{0, 0, 0}}}, {0}, {}), Error);
  EXPECT_THROW(Trellis(1, {1}, {}, {0}, {0}), Error);
}

TEST(Trellis, ElementaryLinear) {
  const GeneratorRow row{bits_from_string("0110"), {2, 3, SpanKind::linear}};
  const auto t = elementary_trellis(row.bits, row.span);
  EXPECT_EQ(t.vertex_counts(), (std::vector<std::uint32_t>{1, 1, 2, 1, 1}));
  EXPECT_EQ(t.num_subtrellises(), 1U);
  EXPECT_EQ(all_codeword_labels(t), (std::set<std::string>{"0000", "0110"}));
}

TEST(Trellis, ElementaryCircular) {
  const GeneratorRow row{bits_from_string("1001"), {4, 1, SpanKind::circular}};
  const auto t = elementary_trellis(row.bits, row.span);
  EXPECT_EQ(t.num_subtrellises(), 2U);
  const auto paths = codeword_paths(t);
  EXPECT_EQ(paths.at(0), std::set<std::string>{"0000"});
  EXPECT_EQ(paths.at(1), std::set<std::string>{"1001"});
}

TEST(Trellis, ProductCodewordsEqualCode) {
  for (const auto& g : {toy_block_n4(), toy_product_n8k4c1(), conv_to_generator(conv_from_octal(2, "7", "5", 5))}) {
    const auto it = build_reach_index(build_tbt_product(g));
    EXPECT_EQ(it.t(), std::size_t{1} << g.circular_count());
    EXPECT_EQ(all_codeword_labels(it.trellis), code_set(g));
  }
}

TEST(Trellis, SubtrellisLabelsAreCosets) {
  const auto g = toy_product_n8k4c1();
  const auto it = build_reach_index(build_tbt_product(g));
  const auto paths = codeword_paths(it.trellis);
  const auto& zero = paths.at(0);
  EXPECT_TRUE(zero.count(std::string(8, '0')));
  for (const auto& [i, labels] : paths) {
    EXPECT_EQ(labels.size(), zero.size());
    const auto rep = bits_from_string(*labels.begin());
    for (const auto& z : zero) EXPECT_TRUE(labels.count(to_bit_string(xor_of(rep, bits_from_string(z)))));
  }
}

TEST(Trellis, ConvCodewordsEqualEncoder) {
  const auto spec = conv_from_octal(2, "7", "5", 6);
  const auto it = build_reach_index(build_tbt_conv(spec));
  EXPECT_EQ(it.t(), 4U);
  EXPECT_EQ(it.trellis.label_width(), 2);
  std::set<std::string> direct;
  for (std::uint64_t m = 0; m < 64; ++m) direct.insert(to_bit_string(encode_conv_tailbiting(spec, unpack_bits(m, 6))));
  const auto labels = all_codeword_labels(it.trellis);
  EXPECT_EQ(labels, direct);
  // Each message has exactly one codeword path.
  std::size_t count = 0;
  for (const auto& [i, l] : codeword_paths(it.trellis)) count += l.size();
  EXPECT_EQ(count, 64U);
}

TEST(Trellis, MembershipMatchesPathEnumeration) {
  for (const auto& name : tbt_test::toy_codes()) {
    const auto code = catalog_lookup(name);
    const auto& it = code.trellis();
    const auto& t = it.trellis;
    std::vector<std::set<std::size_t>> on_path(t.num_edges());
    for_each_start_final_path(t, [&](std::size_t k, std::size_t j, std::span<const std::size_t> edges) {
      if (k != j) return;
      for (auto e : edges) on_path[e].insert(k);
    });
    for (std::size_t e = 0; e < t.num_edges(); ++e)
      for (std::size_t i = 0; i < it.t(); ++i) EXPECT_EQ(it.member(e, i), on_path[e].count(i) == 1) << name;
  }
}

TEST(Trellis, PruningKeepsOnlyUsefulVertices) {
  // Vertex 1 at time 1 leads nowhere.
  const Trellis raw(1, {1, 2, 1}, {{Edge{0, 0, 0}, Edge{0, 1, 1}}, {Edge{0, 0, 0}}}, {0}, {0});
  const auto it = build_reach_index(raw);
  EXPECT_EQ(it.trellis.vertex_counts(), (std::vector<std::uint32_t>{1, 1, 1}));
  EXPECT_EQ(it.trellis.num_edges(), 2U);
}

TEST(Trellis, ReachErrors) {
  const Trellis dead(1, {1, 1, 1}, {{Edge{0, 0, 0}}, {}}, {0}, {0});
  try {
    build_reach_index(dead);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyTrellis);
  }
  // s_1 only reaches f_0.
  const Trellis skew(1, {2, 2}, {{Edge{0, 0, 0}, Edge{1, 0, 1}}}, {0, 1}, {0, 1});
  try {
    build_reach_index(skew);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingSubtrellis);
  }
}

TEST(Trellis, SubtrellisCapFromEnvironment) {
  EXPECT_EQ(subtrellis_cap(), 64U);
  EnvGuard env("2");
  EXPECT_EQ(subtrellis_cap(), 2U);
  try {
    catalog_lookup("toy-conv-m2-l8");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
  EXPECT_NO_THROW(catalog_lookup("toy-product-n8k4c1"));
}

TEST(Trellis, VertexAndEdgeIds) {
  const auto code = catalog_lookup("toy-block-n4");
  const auto& t = code.trellis().trellis;
  EXPECT_EQ(t.num_vertices(), 8U);
  EXPECT_EQ(t.num_edges(), 9U);
  EXPECT_EQ(t.final_id(1), 7U);
  for (std::size_t e = 0; e < t.num_edges(); ++e) {
    const auto s = t.section_of_edge(e);
    EXPECT_EQ(t.time_of_vertex(t.edge_from(e)), s);
    EXPECT_EQ(t.time_of_vertex(t.edge_to(e)), s + 1);
  }
}

TEST(ShortestPaths, HammingWeightsByHand) {
  // m=1, taps (11, 10): unit weights are Hamming distance to the all-zero word.
  const ConvCodeSpec spec{1, bits_from_string("11"), bits_from_string("10"), 4};
  const auto it = build_reach_index(build_tbt_conv(spec));
  const auto& t = it.trellis;
  WeightAssignment w;
  for (std::size_t e = 0; e < t.num_edges(); ++e) w.w.push_back(static_cast<double>(std::popcount(t.edge_label(e))));
  const auto d = start_distances(t, w);
  // From state 0, input 0 -> 00 (cost 0) and input 1 -> 11 (cost 2); from state 1, input 0 -> 10, input 1 -> 01.
  EXPECT_EQ(d[0][t.vertex_id(1, 0)], 0.0);
  EXPECT_EQ(d[0][t.vertex_id(1, 1)], 2.0);
  EXPECT_EQ(d[1][t.vertex_id(1, 0)], 1.0);
  EXPECT_EQ(d[1][t.vertex_id(1, 1)], 1.0);
  const auto table = all_pairs_start_final_distances(t, w);
  EXPECT_EQ(table.at(0, 0), 0.0);
  EXPECT_EQ(table.at(1, 1), 3.0);  // lightest codeword through state 1: message 0001
}

TEST(ShortestPaths, AgreeWithPathEnumeration) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (const auto& name : {"toy-product-n8k4c1", "toy-conv-m2-l8"}) {
    const auto code = catalog_lookup(name);
    const auto& t = code.trellis().trellis;
    WeightAssignment w;
    for (std::size_t e = 0; e < t.num_edges(); ++e) w.w.push_back(u(rng));
    const auto table = all_pairs_start_final_distances(t, w);
    std::vector<double> best(table.d.size(), kInf);
    for_each_start_final_path(t, [&](std::size_t k, std::size_t j, std::span<const std::size_t> edges) {
      double s = 0.0;
      for (auto e : edges) s += w[e];
      best[k * table.t + j] = std::min(best[k * table.t + j], s);
    });
    for (std::size_t q = 0; q < best.size(); ++q) EXPECT_LE(tbt_test::rel_diff(table.d[q], best[q]), 1e-12);
  }
}
