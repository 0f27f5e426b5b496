#pragma once

// Checkable forms of the decoder's failure conditions and of the structural
// facts it relies on: the witness searches run on frames where the two-phase
// decoder disagreed with exact ML, the audit runs on any decoded frame.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbt/bits.hpp"
#include "tbt/channel.hpp"
#include "tbt/code_model.hpp"
#include "tbt/decoder.hpp"
#include "tbt/error.hpp"
#include "tbt/trellis.hpp"

namespace tbt {

struct Theorem1Witness {
  std::size_t k = 0;
  std::size_t j = 0;
  bool k_differs_from_i = false;
};

/// Looks for a start/final pair (k, j) with k != j and j != i whose
/// distance does not exceed the codeword distance d(i, i). Witnesses with
/// k != i as well are preferred.
inline std::optional<Theorem1Witness> check_theorem1(const DistanceTable& table, std::size_t i) {
  if (i >= table.t) throw Error(ErrorCode::InvalidArgument, "subtrellis index out of range");
  const double bound = table.at(i, i);
  std::optional<Theorem1Witness> fallback;
  for (std::size_t k = 0; k < table.t; ++k)
    for (std::size_t j = 0; j < table.t; ++j) {
      if (k == j || j == i || !(table.at(k, j) <= bound)) continue;
      if (k != i) return Theorem1Witness{k, j, true};
      if (!fallback) fallback = Theorem1Witness{k, j, false};
    }
  return fallback;
}

struct Theorem2Witness {
  BitVec semi_codeword;  // in the shifted frame, where the ML codeword is zero
  std::size_t start = 0;
  std::size_t final = 0;
  double shifted_cost = 0.0;  // (C_s + e) . r'
};

struct Theorem2Result {
  bool right_inequality_holds = false;
  double error_cost = 0.0;  // e . r'
  std::optional<Theorem2Witness> witness;
};

inline constexpr int kMaxSemiBasisRows = 20;

/// Moves to the frame where c_ml is the zero codeword (r_l *= s(c_ml_l)),
/// takes e = hard decisions and r' = |r|, confirms e.r' < (C+e).r' for every
/// nonzero codeword C, and returns the nonzero semi-codeword C_s minimising
/// (C_s+e).r' if that value is <= e.r'. Ties in the minimum keep the first
/// coefficient pattern in counting order.
inline Theorem2Result check_theorem2(const ReceivedVector& rv, const BitVec& c_ml, const BitVec& c_out,
                                     const SemiCodewordBasis& basis, const GeneratorSpec& spec) {
  if (c_ml == c_out) throw Error(ErrorCode::InvalidArgument, "not a mismatch frame");
  const int rows = static_cast<int>(basis.rows.size());
  if (rows > kMaxSemiBasisRows) throw Error(ErrorCode::TooLarge, "semi-codeword basis too large to enumerate");
  const std::size_t n = rv.r.size();
  if (c_ml.size() != n || static_cast<std::size_t>(spec.n) != n)
    throw Error(ErrorCode::LengthMismatch, "frame length mismatch");

  ReceivedVector shifted = rv;
  for (std::size_t l = 0; l < n; ++l)
    if (c_ml[l]) shifted.r[l] = -shifted.r[l];
  const BitVec e = shifted.hard_decision();
  const std::vector<double> mag = shifted.magnitudes();
  auto cost_of = [&](const BitVec& x) {
    double acc = 0.0;
    for (std::size_t l = 0; l < n; ++l)
      if (x[l] ^ e[l]) acc += mag[l];
    return acc;
  };

  Theorem2Result res;
  res.error_cost = cost_of(BitVec(n, 0));
  res.right_inequality_holds = true;
  for_each_codeword(spec, [&](const BitVec&, const BitVec& cw) {
    if (!is_zero(cw) && !(res.error_cost < cost_of(cw))) res.right_inequality_holds = false;
  });

  const int circular = (rows - basis.linear_rows) / 2;
  BitVec x(n, 0);
  const std::uint64_t total = std::uint64_t{1} << rows;
  std::uint64_t coeffs = 0;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int flip = __builtin_ctzll(step);
    coeffs ^= std::uint64_t{1} << flip;
    xor_into(x, basis.rows[static_cast<std::size_t>(flip)]);
    if (is_zero(x)) continue;
    const double c = cost_of(x);
    if (!(c <= res.error_cost)) continue;
    if (res.witness && !(c < res.witness->shifted_cost)) continue;
    Theorem2Witness w;
    w.semi_codeword = x;
    w.shifted_cost = c;
    for (int q = 0; q < circular; ++q) {
      const auto head = (coeffs >> (basis.linear_rows + 2 * q)) & 1U;
      const auto tail = (coeffs >> (basis.linear_rows + 2 * q + 1)) & 1U;
      w.start = (w.start << 1) | head;
      w.final = (w.final << 1) | tail;
    }
    res.witness = std::move(w);
  }
  return res;
}

struct Lemma4Report {
  bool pass = false;
  std::size_t path_label_count = 0;
  std::size_t basis_span_count = 0;
};

inline constexpr int kMaxLemma4Length = 10;

/// Compares the set of all s_k -> f_j path labels of t with the row space of
/// the head/tail-split basis.
inline Lemma4Report verify_lemma4(const GeneratorSpec& spec, const Trellis& t) {
  if (spec.n > kMaxLemma4Length) throw Error(ErrorCode::TooLarge, "lemma check needs n <= 10");
  if (t.code_length() != static_cast<std::size_t>(spec.n)) throw Error(ErrorCode::LengthMismatch, "trellis/code length");
  std::set<std::uint64_t> labels;
  for_each_start_final_path(t, [&](std::size_t, std::size_t, std::span<const std::size_t> edges) {
    labels.insert(pack_bits(path_labels(t, edges)));
  });
  const auto basis = semi_codeword_basis(spec);
  std::set<std::uint64_t> span;
  const std::uint64_t total = std::uint64_t{1} << basis.rows.size();
  for (std::uint64_t m = 0; m < total; ++m) {
    BitVec x(static_cast<std::size_t>(spec.n), 0);
    for (std::size_t r = 0; r < basis.rows.size(); ++r)
      if ((m >> r) & 1U) xor_into(x, basis.rows[r]);
    span.insert(pack_bits(x));
  }
  return Lemma4Report{labels == span, labels.size(), span.size()};
}

// ---------------------------------------------------------------------------
// Invariant audit

struct Violation {
  std::string rule;
  std::size_t vertex = 0;
  std::string detail;
};

struct AuditReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view rule) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.rule == rule; });
  }
};

struct AuditOptions {
  double rel_tol = 1e-9;    // rounding slack for inequalities that add and subtract delta terms
  double exact_tol = 1e-12; // round-one exactness
};

/// Checks a finished two-phase run against l(s_k, u) computed independently
/// for every start k (see start_distances).
inline AuditReport audit_decode_invariants(const IndexedTrellis& it, const WeightAssignment& w, const TwoPhaseRun& run,
                                           const std::vector<std::vector<double>>& oracle,
                                           const AuditOptions& opts = {}) {
  const Trellis& t = it.trellis;
  const auto& p1 = run.p1;
  AuditReport rep;
  auto flag = [&](std::string rule, std::size_t v, std::string detail) {
    rep.violations.push_back({std::move(rule), v, std::move(detail)});
  };
  auto slack = [&](double x) { return opts.rel_tol * std::max(1.0, std::fabs(x)); };
  const std::size_t nt = t.num_subtrellises();
  const std::size_t nv = t.num_vertices();

  std::vector<double> delta(nv, kInf);
  for (std::size_t k = 0; k < nt; ++k)
    for (std::size_t v = 0; v < nv; ++v) delta[v] = std::min(delta[v], oracle[k][v]);
  double exact_ml = kInf;
  for (std::size_t i = 0; i < nt; ++i) exact_ml = std::min(exact_ml, oracle[i][t.final_id(i)]);

  for (std::size_t i = 0; i < nt; ++i) {
    const auto s = t.start_id(i);
    if (p1.cost[s] != 0.0 || p1.surv[s] != static_cast<std::int32_t>(i)) flag("phase1.init", s, "start not seeded");
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (std::fabs(p1.cost[v] - delta[v]) > opts.exact_tol * std::max(1.0, std::fabs(delta[v])) &&
        !(p1.cost[v] == kInf && delta[v] == kInf))
      flag("phase1.exact", v, "cost " + format_weight(p1.cost[v]) + " != delta " + format_weight(delta[v]));
    const auto pe = p1.pred_edge[v];
    if (pe < 0) continue;
    const auto u = t.edge_from(static_cast<std::size_t>(pe));
    if (p1.surv[v] != p1.surv[u] || std::fabs(p1.cost[u] + w[static_cast<std::size_t>(pe)] - p1.cost[v]) > slack(p1.cost[v]))
      flag("phase1.survivor", v, "survivor chain inconsistent");
  }
  for (std::size_t e = 0; e < t.num_edges(); ++e) {
    const auto u = t.edge_from(e), v = t.edge_to(e);
    if (p1.cost[v] > p1.cost[u] + w[e]) flag("lemma2", v, "delta(v) > delta(u) + w(u,v)");
  }
  double min_final = kInf;
  for (std::size_t i = 0; i < nt; ++i) min_final = std::min(min_final, p1.cost[t.final_id(i)]);
  if (min_final > exact_ml) flag("semi_lower_bound", 0, "lightest semi-codeword above exact ML");

  auto check_candidate = [&](std::size_t v, std::int32_t tr, double metric, double dist) {
    const auto j = static_cast<std::size_t>(tr);
    const double lj = oracle[j][v];
    if (dist < lj) flag("lemma1", v, "Dist below l(s_j,u)");
    const double mj = lj + p1.cost[t.final_id(j)] - p1.cost[v];
    if (metric < mj - slack(mj)) flag("lemma1", v, "Metric below m_j(u)");
    const double floor = p1.cost[t.final_id(j)];
    if (metric < floor - slack(floor)) flag("corollary1", v, "Metric below delta(f_Trellis[u])");
  };

  if (run.p2) {
    const auto& p2 = *run.p2;
    for (std::size_t i = 0; i < nt; ++i) {
      const auto s = t.start_id(i);
      const double want = p2.participants[i] ? p1.cost[t.final_id(i)] : kInf;
      if (p2.metric[s] != want) flag("phase2.init", s, "Metric[s_i] != delta(f_i)");
    }
    for (std::size_t v = 0; v < nv; ++v) {
      if (p2.trellis[v] == kNoTrellis || p2.dist[v] == kInf) continue;
      check_candidate(v, p2.trellis[v], p2.metric[v], p2.dist[v]);
      const auto pe = p2.pred_edge[v];
      if (pe < 0) continue;
      const auto e = static_cast<std::size_t>(pe);
      const auto u = t.edge_from(e);
      if (p2.metric[v] < p2.metric[u] - slack(p2.metric[u]))
        flag("lemma3", v, "Metric " + format_weight(p2.metric[v]) + " < predecessor " + format_weight(p2.metric[u]));
      if (p2.trellis[u] != p2.trellis[v] || !it.member(e, static_cast<std::size_t>(p2.trellis[v])) ||
          p2.dist[v] != p2.dist[u] + w[e])
        flag("phase2.chain", v, "predecessor chain inconsistent");
    }
  }
  if (run.list) {
    const auto& st = *run.list;
    for (std::size_t v = 0; v < nv; ++v) {
      const auto& cands = st.lists[v];
      for (std::size_t q = 0; q < cands.size(); ++q) {
        const auto& c = cands[q];
        if (q > 0 && cands[q - 1].metric > c.metric) flag("list.sorted", v, "list not ascending");
        check_candidate(v, c.trellis, c.metric, c.dist);
        if (c.pred_edge < 0) continue;
        const auto& pc = st.lists[t.edge_from(static_cast<std::size_t>(c.pred_edge))][static_cast<std::size_t>(c.pred_slot)];
        if (c.metric < pc.metric - slack(pc.metric)) flag("lemma3", v, "list Metric decreased along predecessor");
        if (pc.trellis != c.trellis) flag("phase2.chain", v, "list predecessor in another subtrellis");
      }
    }
  }

  const auto& out = run.outcome;
  if (!out.is_codeword_path()) flag("output.codeword", out.path.back(), "output is not a codeword path");
  if (out.codeword != path_labels(t, out.edges)) flag("output.codeword", out.path.back(), "labels differ from path");
  if (out.weight < exact_ml) flag("dominance", out.path.back(), "two-phase lighter than exact ML");
  return rep;
}

// ---------------------------------------------------------------------------
// Mismatch log records

struct MismatchReport {
  std::uint64_t frame = 0;
  double ebn0_db = 0.0;
  std::string decoder;
  std::size_t ml_subtrellis = 0;
  double ml_weight = 0.0;
  std::size_t out_subtrellis = 0;
  double out_weight = 0.0;
  std::optional<Theorem1Witness> theorem1;
  bool theorem2_checked = false;
  std::optional<Theorem2Result> theorem2;
};

inline nlohmann::ordered_json to_json(const MismatchReport& r) {
  nlohmann::ordered_json j;
  j["frame"] = r.frame;
  j["ebn0_db"] = r.ebn0_db;
  j["decoder"] = r.decoder;
  j["ml_subtrellis"] = r.ml_subtrellis;
  j["ml_weight"] = r.ml_weight;
  j["out_subtrellis"] = r.out_subtrellis;
  j["out_weight"] = r.out_weight;
  if (r.theorem1)
    j["theorem1"] = {{"k", r.theorem1->k}, {"j", r.theorem1->j}, {"k_differs_from_i", r.theorem1->k_differs_from_i}};
  else
    j["theorem1"] = nullptr;
  if (r.theorem2_checked && r.theorem2) {
    nlohmann::ordered_json t2;
    t2["right_inequality_holds"] = r.theorem2->right_inequality_holds;
    t2["error_cost"] = r.theorem2->error_cost;
    if (r.theorem2->witness) {
      t2["semi_codeword"] = to_bit_string(r.theorem2->witness->semi_codeword);
      t2["start"] = r.theorem2->witness->start;
      t2["final"] = r.theorem2->witness->final;
      t2["shifted_cost"] = r.theorem2->witness->shifted_cost;
    } else {
      t2["semi_codeword"] = nullptr;
    }
    j["theorem2"] = t2;
  } else {
    j["theorem2"] = nullptr;
  }
  return j;
}

}  // namespace tbt
