#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "mutations.hpp"
#include "support.hpp"
#include "tbt/tbt.hpp"

using namespace tbt;
using tbt_test::random_frame;

namespace {

double dot_cost(const BitVec& x, const BitVec& e, const std::vector<double>& mag) {
  double s = 0;
  for (std::size_t l = 0; l < x.size(); ++l)
    if (x[l] != e[l]) s += mag[l];
  return s;
}

bool in_span(const std::vector<BitVec>& basis, const BitVec& x) {
  auto with = basis;
  with.push_back(x);
  return gf2_rank(with) == gf2_rank(basis);
}

}  // namespace

TEST(Theorem1, HandTable) {
  // d(k, j), row-major.
  DistanceTable t{3, {5, 9, 9,
                      9, 7, 9,
                      9, 4, 6}};
  auto w = check_theorem1(t, 0);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->k, 2U);
  EXPECT_EQ(w->j, 1U);
  EXPECT_TRUE(w->k_differs_from_i);
  EXPECT_FALSE(check_theorem1(t, 1));
  // Only a witness that starts in subtrellis i itself.
  DistanceTable u{2, {3, 2, 9, 1}};
  w = check_theorem1(u, 0);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->k, 0U);
  EXPECT_FALSE(w->k_differs_from_i);
  EXPECT_THROW(check_theorem1(u, 2), Error);
}

TEST(Theorem1, EveryMismatchHasAWitness) {
  const auto code = catalog_lookup("toygen-conv-m2-l8");
  const auto& it = code.trellis();
  std::mt19937_64 rng(21);
  int mismatches = 0;
  for (int f = 0; f < 3000; ++f) {
    const auto fr = random_frame(code, rng, 0.5);
    const auto w = edge_weights(it.trellis, fr.rv);
    const auto ml = decode_exact_ml(it, w);
    const auto out = decode_two_phase(it, w);
    if (out.codeword == ml.codeword) continue;
    ++mismatches;
    const auto table = all_pairs_start_final_distances(it.trellis, w);
    const auto wit = check_theorem1(table, ml.subtrellis());
    ASSERT_TRUE(wit);
    EXPECT_NE(wit->k, wit->j);
    EXPECT_NE(wit->j, ml.subtrellis());
    EXPECT_LE(table.at(wit->k, wit->j), ml.weight + 1e-9);
  }
  EXPECT_GT(mismatches, 0);
}

TEST(Theorem2, RejectsNonMismatch) {
  const auto g = toy_block_n4();
  const ReceivedVector rv{{1, 1, 1, 1}};
  EXPECT_THROW(check_theorem2(rv, BitVec(4, 0), BitVec(4, 0), semi_codeword_basis(g), g), Error);
}

TEST(Theorem2, WitnessesSatisfyTheInequality) {
  const auto code = catalog_lookup("toygen-conv-m2-l8");
  const auto& g = *code.generator();
  const auto& basis = *code.semi_basis();
  const auto& it = code.trellis();
  std::mt19937_64 rng(22);
  int checked = 0;
  for (int f = 0; f < 4000; ++f) {
    const auto fr = random_frame(code, rng, 0.5);
    const auto w = edge_weights(it.trellis, fr.rv);
    const auto ml = decode_exact_ml(it, w);
    const auto out = decode_two_phase(it, w);
    if (out.codeword == ml.codeword) continue;
    ++checked;
    const auto res = check_theorem2(fr.rv, ml.codeword, out.codeword, basis, g);
    EXPECT_TRUE(res.right_inequality_holds);
    ASSERT_TRUE(res.witness);
    // Recompute in the shifted frame.
    ReceivedVector shifted = fr.rv;
    for (std::size_t l = 0; l < shifted.r.size(); ++l)
      if (ml.codeword[l]) shifted.r[l] = -shifted.r[l];
    const auto e = shifted.hard_decision();
    const auto mag = shifted.magnitudes();
    EXPECT_NEAR(res.error_cost, dot_cost(BitVec(e.size(), 0), e, mag), 1e-12);
    EXPECT_LE(dot_cost(res.witness->semi_codeword, e, mag), dot_cost(BitVec(e.size(), 0), e, mag));
    EXPECT_NEAR(res.witness->shifted_cost, dot_cost(res.witness->semi_codeword, e, mag), 1e-12);
    EXPECT_FALSE(is_zero(res.witness->semi_codeword));
    EXPECT_TRUE(in_span(basis.rows, res.witness->semi_codeword));
    EXPECT_LT(res.witness->start, it.t());
    EXPECT_LT(res.witness->final, it.t());
  }
  EXPECT_GT(checked, 0);
}

TEST(Theorem2, WitnessPairLabelsAPath) {
  // The recorded start/final pair carries a path with the witness as labels.
  const auto code = catalog_lookup("toy-product-n8k4c1");
  const auto& t = code.trellis().trellis;
  const auto& basis = *code.semi_basis();
  std::map<std::uint64_t, std::set<std::pair<std::size_t, std::size_t>>> pairs;
  for_each_start_final_path(t, [&](std::size_t k, std::size_t j, std::span<const std::size_t> edges) {
    pairs[pack_bits(path_labels(t, edges))].insert({k, j});
  });
  std::mt19937_64 rng(23);
  int seen = 0;
  for (int f = 0; f < 20000 && seen < 50; ++f) {
    const auto fr = random_frame(code, rng, 0.0);
    const auto w = edge_weights(t, fr.rv);
    const auto ml = decode_exact_ml(code.trellis(), w);
    const auto out = decode_two_phase(code.trellis(), w);
    if (out.codeword == ml.codeword) continue;
    const auto res = check_theorem2(fr.rv, ml.codeword, out.codeword, basis, *code.generator());
    ASSERT_TRUE(res.witness);
    ++seen;
    // Witness is in the shifted frame, so shift back before looking up its path.
    const auto label = pack_bits(xor_of(res.witness->semi_codeword, ml.codeword));
    ASSERT_TRUE(pairs.count(label));
    // In the shifted frame the pair is expressed relative to the ML codeword's subtrellis.
    const auto start = res.witness->start ^ ml.subtrellis();
    const auto final = res.witness->final ^ ml.subtrellis();
    EXPECT_TRUE(pairs[label].count({start, final})) << "start " << start << " final " << final;
  }
  EXPECT_GT(seen, 0);
}

TEST(Lemma4, CatalogToys) {
  for (const auto& name : catalog_names()) {
    const auto code = catalog_lookup(name);
    if (!code.generator() || code.generator()->n > kMaxLemma4Length) continue;
    const auto rep = verify_lemma4(*code.generator(), code.trellis().trellis);
    EXPECT_TRUE(rep.pass) << name;
    EXPECT_EQ(rep.path_label_count, std::size_t{1} << code.semi_basis()->rows.size()) << name;
  }
}

TEST(Lemma4, DetectsCorruptedTrellis) {
  const auto code = catalog_lookup("toy-block-n4");
  auto j = trellis_to_json(code.trellis().trellis);
  j["sections"][2][0][2] = "1";
  const auto bad = trellis_from_json(j);
  EXPECT_FALSE(verify_lemma4(*code.generator(), bad).pass);
  EXPECT_THROW(verify_lemma4(*catalog_lookup("toygen-conv-m2-l8").generator(),
                             catalog_lookup("toygen-conv-m2-l8").trellis().trellis),
               Error);
}

// ---------------------------------------------------------------------------
// Audit

TEST(Audit, CleanOverRandomFrames) {
  for (const auto& name : tbt_test::toy_codes()) {
    const auto code = catalog_lookup(name);
    const auto& it = code.trellis();
    std::mt19937_64 rng(24);
    for (int f = 0; f < 400; ++f) {
      const auto fr = random_frame(code, rng, 0.5 + (f % 4));
      const auto w = edge_weights(it.trellis, fr.rv);
      const auto oracle = start_distances(it.trellis, w);
      for (std::size_t L : {1, 2, 3}) {
        const auto run = run_two_phase(it, w, {L, true});
        const auto rep = audit_decode_invariants(it, w, run, oracle);
        ASSERT_TRUE(rep.ok()) << name << " L=" << L << " rule " << rep.violations.front().rule << ": "
                              << rep.violations.front().detail;
      }
    }
  }
}

TEST(Audit, MutationsAreDetected) {
  const auto cases = tbt_test::mutation_cases();
  for (const auto& name : tbt_test::toy_codes()) {
    const auto code = catalog_lookup(name);
    const auto& it = code.trellis();
    std::mt19937_64 rng(25);
    std::map<std::string, int> applied;
    for (int f = 0; f < 200; ++f) {
      const auto fr = random_frame(code, rng, 1.0);
      const auto w = edge_weights(it.trellis, fr.rv);
      const auto oracle = start_distances(it.trellis, w);
      auto base = run_two_phase(it, w);
      if (!base.p2) base.p2 = phase2(it, w, base.p1);
      ASSERT_TRUE(audit_decode_invariants(it, w, base, oracle).ok());
      for (const auto& c : cases) {
        auto run = base;
        if (!c.mutate(run, it, oracle)) continue;
        ++applied[c.rule];
        EXPECT_TRUE(audit_decode_invariants(it, w, run, oracle).has(c.rule)) << name << " frame " << f << " " << c.rule;
      }
    }
    for (const auto& c : cases) EXPECT_GT(applied[c.rule], 0) << name << " " << c.rule;
  }
}

TEST(Audit, ListMutations) {
  const auto code = catalog_lookup("toygen-conv-m2-l8");
  const auto& it = code.trellis();
  std::mt19937_64 rng(26);
  int applied = 0;
  for (int f = 0; f < 300; ++f) {
    const auto fr = random_frame(code, rng, 0.5);
    const auto w = edge_weights(it.trellis, fr.rv);
    const auto oracle = start_distances(it.trellis, w);
    auto run = run_two_phase(it, w, {2, true});
    if (!run.list) continue;
    for (std::size_t v = 0; v < run.list->lists.size(); ++v) {
      auto& l = run.list->lists[v];
      if (l.size() < 2 || l[0].metric == l[1].metric) continue;
      std::swap(l[0], l[1]);
      ++applied;
      EXPECT_TRUE(audit_decode_invariants(it, w, run, oracle).has("list.sorted"));
      break;
    }
  }
  EXPECT_GT(applied, 0);
}

TEST(MismatchJson, Fields) {
  MismatchReport r;
  r.frame = 7;
  r.ebn0_db = 1.5;
  r.decoder = "two-phase-L1";
  r.ml_subtrellis = 2;
  r.ml_weight = 3.25;
  r.out_subtrellis = 1;
  r.out_weight = 4.0;
  r.theorem1 = Theorem1Witness{0, 1, true};
  r.theorem2_checked = true;
  r.theorem2 = Theorem2Result{true, 1.5, Theorem2Witness{bits_from_string("0110"), 1, 0, 0.75}};
  EXPECT_EQ(to_json(r).dump(),
            R"({"frame":7,"ebn0_db":1.5,"decoder":"two-phase-L1","ml_subtrellis":2,"ml_weight":3.25,)"
            R"("out_subtrellis":1,"out_weight":4.0,"theorem1":{"k":0,"j":1,"k_differs_from_i":true},)"
            R"("theorem2":{"right_inequality_holds":true,"error_cost":1.5,"semi_codeword":"0110","start":1,)"
            R"("final":0,"shifted_cost":0.75}})");
  r.theorem1.reset();
  r.theorem2_checked = false;
  const auto j = to_json(r);
  EXPECT_TRUE(j["theorem1"].is_null());
  EXPECT_TRUE(j["theorem2"].is_null());
}
