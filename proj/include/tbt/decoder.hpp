#pragma once

// Two-round approximate ML decoding on a tail-biting trellis.
//
// Round one is a Viterbi sweep from all starts at once: Cost[u] ends up as
// delta(u), the lightest path from any start to u, and SurvTrellis[u] names
// the start that path came from. If the lightest final f_j was reached from
// its own start s_j, that survivor is a codeword and also the ML codeword.
//
// Otherwise round two sweeps once more, pushing along every edge (u,v) of
// subtrellis Trellis[u] the estimate
//     Metric[v] = Dist[u] + w(u,v) + delta(f_Trellis[u]) - delta(v),
// so each vertex keeps the subtrellis whose best completion looks cheapest.
// The decision is taken over the final vertices whose recorded subtrellis
// matches their own index.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tbt/bits.hpp"
#include "tbt/channel.hpp"
#include "tbt/code_model.hpp"
#include "tbt/error.hpp"
#include "tbt/trellis.hpp"

namespace tbt {

enum class Stage { phase1, phase2, fallback, exact };

constexpr std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::phase1: return "phase1";
    case Stage::phase2: return "phase2";
    case Stage::fallback: return "fallback";
    case Stage::exact: return "exact";
  }
  return "unknown";
}

/// Comparisons are weight comparisons in relaxation and selection steps.
/// Work done by the fallback sweep is kept apart in fallback_comparisons.
struct OpCounters {
  std::uint64_t comparisons = 0;
  std::uint64_t edge_visits = 0;
  std::uint64_t fallback_comparisons = 0;

  OpCounters& operator+=(const OpCounters& o) {
    comparisons += o.comparisons;
    edge_visits += o.edge_visits;
    fallback_comparisons += o.fallback_comparisons;
    return *this;
  }
};

inline constexpr std::int64_t kNoEdge = -1;
inline constexpr std::int32_t kNoTrellis = -1;

struct DecodeOutcome {
  BitVec codeword;
  std::vector<std::size_t> path;   // global vertex ids, time index 0..n
  std::vector<std::size_t> edges;  // global edge ids, sections 1..n
  double weight = kInf;
  Stage stage = Stage::phase1;
  std::size_t start = 0;  // s_start .. f_final; equal for every codeword
  std::size_t final = 0;
  OpCounters counters;

  std::size_t subtrellis() const { return final; }
  bool is_codeword_path() const { return start == final; }
};

namespace detail {

/// Follows predecessor edges from v back to time index 0.
inline std::vector<std::size_t> trace_edges(const Trellis& t, std::span<const std::int64_t> pred_edge,
                                            std::size_t v) {
  std::vector<std::size_t> edges(t.num_sections());
  for (std::size_t s = t.num_sections(); s-- > 0;) {
    const std::int64_t e = pred_edge[v];
    if (e < 0) throw std::logic_error("broken predecessor chain");
    edges[s] = static_cast<std::size_t>(e);
    v = t.edge_from(edges[s]);
  }
  return edges;
}

inline DecodeOutcome make_outcome(const Trellis& t, const WeightAssignment& w, std::vector<std::size_t> edges,
                                  Stage stage, std::size_t final_index) {
  DecodeOutcome out;
  out.edges = std::move(edges);
  out.path.reserve(out.edges.size() + 1);
  out.path.push_back(t.edge_from(out.edges.front()));
  double acc = 0.0;
  for (auto e : out.edges) {
    acc += w[e];
    out.path.push_back(t.edge_to(e));
  }
  out.weight = acc;
  out.codeword = path_labels(t, out.edges);
  out.stage = stage;
  out.final = final_index;
  out.start = SIZE_MAX;
  for (std::size_t k = 0; k < t.num_subtrellises(); ++k)
    if (t.start_id(k) == out.path.front()) out.start = k;
  if (out.start == SIZE_MAX) throw std::logic_error("path does not begin at a start vertex");
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Round one

struct Phase1State {
  std::vector<double> cost;            // delta(u)
  std::vector<std::int32_t> surv;      // SurvTrellis[u]
  std::vector<std::int64_t> pred_edge; // kNoEdge at starts
  std::size_t best_final = 0;          // argmin_i Cost[f_i], lowest index on ties
  OpCounters counters;

  std::size_t pred_vertex(const Trellis& t, std::size_t v) const {
    return pred_edge[v] < 0 ? v : t.edge_from(static_cast<std::size_t>(pred_edge[v]));
  }
};

inline Phase1State phase1(const IndexedTrellis& it, const WeightAssignment& w) {
  const Trellis& t = it.trellis;
  Phase1State p;
  p.cost.assign(t.num_vertices(), kInf);
  p.surv.assign(t.num_vertices(), kNoTrellis);
  p.pred_edge.assign(t.num_vertices(), kNoEdge);
  for (std::size_t i = 0; i < t.num_subtrellises(); ++i) {
    p.cost[t.start_id(i)] = 0.0;
    p.surv[t.start_id(i)] = static_cast<std::int32_t>(i);
  }
  const std::size_t m = t.num_edges();
  for (std::size_t e = 0; e < m; ++e) {
    const std::size_t u = t.edge_from(e), v = t.edge_to(e);
    const double temp = p.cost[u] + w[e];
    if (p.cost[v] > temp) {
      p.cost[v] = temp;
      p.pred_edge[v] = static_cast<std::int64_t>(e);
      p.surv[v] = p.surv[u];
    }
  }
  p.counters.comparisons += m;
  p.counters.edge_visits += m;
  for (std::size_t i = 1; i < t.num_subtrellises(); ++i) {
    ++p.counters.comparisons;
    if (p.cost[t.final_id(i)] < p.cost[t.final_id(p.best_final)]) p.best_final = i;
  }
  return p;
}

/// Survivor at the lightest final, whether or not it is a codeword.
inline DecodeOutcome phase1_survivor(const IndexedTrellis& it, const WeightAssignment& w, const Phase1State& p1) {
  const Trellis& t = it.trellis;
  auto out = detail::make_outcome(t, w, detail::trace_edges(t, p1.pred_edge, t.final_id(p1.best_final)),
                                  Stage::phase1, p1.best_final);
  out.counters = p1.counters;
  return out;
}

/// Stops after round one when the lightest semi-codeword is a codeword.
inline std::optional<DecodeOutcome> phase1_decision(const IndexedTrellis& it, const WeightAssignment& w,
                                                    const Phase1State& p1) {
  const Trellis& t = it.trellis;
  const std::size_t j = p1.best_final;
  if (p1.surv[t.final_id(j)] != static_cast<std::int32_t>(j)) return std::nullopt;
  return phase1_survivor(it, w, p1);
}

/// Single full-trellis Viterbi sweep returning the lightest semi-codeword.
inline DecodeOutcome decode_phase1_only(const IndexedTrellis& it, const WeightAssignment& w) {
  return phase1_survivor(it, w, phase1(it, w));
}

// ---------------------------------------------------------------------------
// Round two

struct Phase2Options {
  /// Skip subtrellis i in round two when delta(f_i) already exceeds a
  /// codeword found in round one.
  bool participation_prune = true;
};

struct Phase2State {
  std::vector<double> metric;
  std::vector<std::int32_t> trellis;
  std::vector<double> dist;
  std::vector<std::int64_t> pred_edge;
  std::vector<std::uint8_t> participants;  // per subtrellis
  OpCounters counters;

  std::size_t pred_vertex(const Trellis& t, std::size_t v) const {
    return pred_edge[v] < 0 ? v : t.edge_from(static_cast<std::size_t>(pred_edge[v]));
  }
};

inline std::vector<std::uint8_t> select_participants(const Trellis& t, const Phase1State& p1,
                                                     const Phase2Options& opts, OpCounters& counters) {
  const std::size_t nt = t.num_subtrellises();
  std::vector<std::uint8_t> part(nt, 0);
  double best_codeword = kInf;
  bool have_codeword = false;
  for (std::size_t i = 0; i < nt; ++i) {
    const std::size_t f = t.final_id(i);
    if (p1.surv[f] != static_cast<std::int32_t>(i)) continue;
    if (have_codeword) ++counters.comparisons;
    if (!have_codeword || p1.cost[f] < best_codeword) best_codeword = p1.cost[f];
    have_codeword = true;
  }
  for (std::size_t i = 0; i < nt; ++i) {
    const std::size_t f = t.final_id(i);
    if (p1.surv[f] == static_cast<std::int32_t>(i)) continue;
    if (opts.participation_prune && have_codeword) {
      ++counters.comparisons;
      if (!(p1.cost[f] <= best_codeword)) continue;
    }
    part[i] = 1;
  }
  return part;
}

inline Phase2State phase2(const IndexedTrellis& it, const WeightAssignment& w, const Phase1State& p1,
                          const Phase2Options& opts = {}) {
  const Trellis& t = it.trellis;
  Phase2State p;
  const std::size_t nv = t.num_vertices();
  p.metric.assign(nv, kInf);
  p.trellis.assign(nv, kNoTrellis);
  p.dist.assign(nv, kInf);
  p.pred_edge.assign(nv, kNoEdge);
  p.participants = select_participants(t, p1, opts, p.counters);
  for (std::size_t i = 0; i < t.num_subtrellises(); ++i) {
    const std::size_t s = t.start_id(i);
    p.trellis[s] = static_cast<std::int32_t>(i);
    if (p.participants[i]) {
      p.metric[s] = p1.cost[t.final_id(i)];
      p.dist[s] = 0.0;
    }
  }
  const std::size_t m = t.num_edges();
  for (std::size_t e = 0; e < m; ++e) {
    const std::size_t u = t.edge_from(e);
    const std::int32_t tr = p.trellis[u];
    if (tr == kNoTrellis || p.dist[u] == kInf) continue;
    ++p.counters.edge_visits;
    if (!it.member(e, static_cast<std::size_t>(tr))) continue;
    const std::size_t v = t.edge_to(e);
    const double temp = p.dist[u] + w[e] + p1.cost[t.final_id(static_cast<std::size_t>(tr))] - p1.cost[v];
    ++p.counters.comparisons;
    if (p.metric[v] > temp) {
      p.metric[v] = temp;
      p.pred_edge[v] = static_cast<std::int64_t>(e);
      p.trellis[v] = tr;
      p.dist[v] = p.dist[u] + w[e];
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Oracles

struct SubtrellisPath {
  double weight = kInf;
  std::vector<std::size_t> edges;
  OpCounters counters;
};

/// Plain Viterbi over the edges of subtrellis i only.
inline SubtrellisPath viterbi_subtrellis(const IndexedTrellis& it, const WeightAssignment& w, std::size_t i) {
  const Trellis& t = it.trellis;
  if (i >= t.num_subtrellises()) throw Error(ErrorCode::InvalidArgument, "no subtrellis " + std::to_string(i));
  SubtrellisPath out;
  std::vector<double> cost(t.num_vertices(), kInf);
  std::vector<std::int64_t> pred(t.num_vertices(), kNoEdge);
  cost[t.start_id(i)] = 0.0;
  for (std::size_t e = 0; e < t.num_edges(); ++e) {
    const std::size_t u = t.edge_from(e);
    if (cost[u] == kInf) continue;
    ++out.counters.edge_visits;
    if (!it.member(e, i)) continue;
    const std::size_t v = t.edge_to(e);
    const double temp = cost[u] + w[e];
    ++out.counters.comparisons;
    if (cost[v] > temp) {
      cost[v] = temp;
      pred[v] = static_cast<std::int64_t>(e);
    }
  }
  const std::size_t f = t.final_id(i);
  if (cost[f] == kInf) throw Error(ErrorCode::NoPath, "subtrellis " + std::to_string(i) + " has no path");
  out.weight = cost[f];
  out.edges = detail::trace_edges(t, pred, f);
  return out;
}

/// Exact ML: the lightest codeword path over all subtrellises.
inline DecodeOutcome decode_exact_ml(const IndexedTrellis& it, const WeightAssignment& w) {
  OpCounters total;
  std::optional<SubtrellisPath> best;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < it.t(); ++i) {
    auto cand = viterbi_subtrellis(it, w, i);
    total += cand.counters;
    if (best) ++total.comparisons;
    if (!best || cand.weight < best->weight) {
      best = std::move(cand);
      best_i = i;
    }
  }
  auto out = detail::make_outcome(it.trellis, w, std::move(best->edges), Stage::exact, best_i);
  out.counters = total;
  return out;
}

struct BruteForceResult {
  BitVec codeword;
  double weight = kInf;
};

/// Exhaustive search over all codewords; ties go to the lexicographically
/// smallest codeword.
inline BruteForceResult brute_force_ml(const GeneratorSpec& spec, const ReceivedVector& rv) {
  BruteForceResult best;
  for_each_codeword(spec, [&](const BitVec&, const BitVec& cw) {
    const double d = squared_distance(rv.r, cw);
    if (d < best.weight || (d == best.weight && cw < best.codeword)) {
      best.weight = d;
      best.codeword = cw;
    }
  });
  return best;
}

inline BruteForceResult brute_force_ml(const ConvCodeSpec& spec, const ReceivedVector& rv) {
  validate_conv(spec);
  if (spec.circle > kMaxEnumerationDimension)
    throw Error(ErrorCode::TooLarge, "2^" + std::to_string(spec.circle) + " messages exceed the enumeration bound");
  BruteForceResult best;
  const std::uint64_t total = std::uint64_t{1} << spec.circle;
  for (std::uint64_t m = 0; m < total; ++m) {
    const BitVec cw = encode_conv_tailbiting(spec, unpack_bits(m, static_cast<std::size_t>(spec.circle)));
    const double d = squared_distance(rv.r, cw);
    if (d < best.weight || (d == best.weight && cw < best.codeword)) {
      best.weight = d;
      best.codeword = cw;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Decision and composition

/// Pool: round-one finals whose survivor is a codeword, then round-two finals
/// whose recorded subtrellis is their own, compared on path weight (Dist at a
/// final equals its Metric). Ties prefer round one, then the lower index.
/// With an empty pool the lightest-final subtrellis is decoded exactly.
inline DecodeOutcome final_decision(const IndexedTrellis& it, const WeightAssignment& w, const Phase1State& p1,
                                    const Phase2State& p2) {
  const Trellis& t = it.trellis;
  OpCounters counters = p1.counters;
  counters += p2.counters;
  struct Entry {
    double weight;
    Stage stage;
    std::size_t index;
  };
  std::optional<Entry> best;
  auto offer = [&](Entry e) {
    if (best) ++counters.comparisons;
    if (!best || e.weight < best->weight) best = e;
  };
  for (std::size_t i = 0; i < t.num_subtrellises(); ++i)
    if (p1.surv[t.final_id(i)] == static_cast<std::int32_t>(i)) offer({p1.cost[t.final_id(i)], Stage::phase1, i});
  for (std::size_t i = 0; i < t.num_subtrellises(); ++i) {
    const std::size_t f = t.final_id(i);
    if (p2.trellis[f] == static_cast<std::int32_t>(i) && p2.dist[f] != kInf) offer({p2.dist[f], Stage::phase2, i});
  }
  if (!best) {
    auto fb = viterbi_subtrellis(it, w, p1.best_final);
    auto out = detail::make_outcome(t, w, std::move(fb.edges), Stage::fallback, p1.best_final);
    counters.fallback_comparisons += fb.counters.comparisons;
    out.counters = counters;
    return out;
  }
  const auto& pred = best->stage == Stage::phase1 ? p1.pred_edge : p2.pred_edge;
  auto out = detail::make_outcome(t, w, detail::trace_edges(t, pred, t.final_id(best->index)), best->stage,
                                  best->index);
  out.counters = counters;
  return out;
}

// List variant: every vertex keeps up to L candidates. Slot "primary" is the
// candidate the single-list decoder would hold there (it is propagated only
// from primary candidates, by the same rule), so widening the list never
// loses the single-list answer. Remaining slots take the lightest other
// proposals, one per subtrellis first, then by metric.

struct ListCandidate {
  double metric = kInf;
  double dist = kInf;
  std::int32_t trellis = kNoTrellis;
  std::int64_t pred_edge = kNoEdge;
  std::int32_t pred_slot = -1;
  bool primary = false;
};

struct ListState {
  std::vector<std::vector<ListCandidate>> lists;  // per global vertex, ascending metric
  std::vector<std::uint8_t> participants;
  OpCounters counters;
};

inline ListState phase2_list(const IndexedTrellis& it, const WeightAssignment& w, const Phase1State& p1,
                             std::size_t list_size, const Phase2Options& opts = {}) {
  if (list_size < 1) throw Error(ErrorCode::InvalidArgument, "list size must be >= 1");
  const Trellis& t = it.trellis;
  ListState st;
  st.lists.resize(t.num_vertices());
  st.participants = select_participants(t, p1, opts, st.counters);
  for (std::size_t i = 0; i < t.num_subtrellises(); ++i)
    if (st.participants[i])
      st.lists[t.start_id(i)].push_back(
          ListCandidate{p1.cost[t.final_id(i)], 0.0, static_cast<std::int32_t>(i), kNoEdge, -1, true});

  struct Proposal {
    ListCandidate c;
    std::size_t order;
  };
  std::vector<std::vector<Proposal>> incoming;
  std::vector<std::uint8_t> seen_trellis(t.num_subtrellises());
  std::vector<Proposal> rest;
  for (std::size_t s = 0; s < t.num_sections(); ++s) {
    incoming.assign(t.vertex_counts()[s + 1], {});
    const std::size_t base = t.edge_begin(s), end = t.edge_begin(s + 1), vbase = t.time_begin(s + 1);
    std::size_t order = 0;
    for (std::size_t e = base; e < end; ++e) {
      const std::size_t u = t.edge_from(e), v = t.edge_to(e);
      const auto& cands = st.lists[u];
      for (std::size_t slot = 0; slot < cands.size(); ++slot) {
        const auto& c = cands[slot];
        ++st.counters.edge_visits;
        if (!it.member(e, static_cast<std::size_t>(c.trellis))) continue;
        ListCandidate next;
        next.metric = c.dist + w[e] + p1.cost[t.final_id(static_cast<std::size_t>(c.trellis))] - p1.cost[v];
        next.dist = c.dist + w[e];
        next.trellis = c.trellis;
        next.pred_edge = static_cast<std::int64_t>(e);
        next.pred_slot = static_cast<std::int32_t>(slot);
        next.primary = c.primary;
        incoming[v - vbase].push_back({next, order++});
      }
    }
    for (std::size_t lv = 0; lv < incoming.size(); ++lv) {
      auto& props = incoming[lv];
      if (props.empty()) continue;
      std::optional<std::size_t> prim;
      for (std::size_t q = 0; q < props.size(); ++q) {
        if (!props[q].c.primary) continue;
        ++st.counters.comparisons;
        if (!prim || props[q].c.metric < props[*prim].c.metric) prim = q;
      }
      std::vector<Proposal> chosen;
      std::fill(seen_trellis.begin(), seen_trellis.end(), 0);
      if (prim) {
        chosen.push_back(props[*prim]);
        seen_trellis[static_cast<std::size_t>(props[*prim].c.trellis)] = 1;
      }
      rest.clear();
      for (std::size_t q = 0; q < props.size(); ++q)
        if (!prim || q != *prim) {
          rest.push_back(props[q]);
          rest.back().c.primary = false;
        }
      std::stable_sort(rest.begin(), rest.end(),
                       [](const Proposal& a, const Proposal& b) { return a.c.metric < b.c.metric; });
      st.counters.comparisons += rest.size();
      std::vector<std::uint8_t> taken(rest.size(), 0);
      for (std::size_t q = 0; q < rest.size() && chosen.size() < list_size; ++q) {
        const auto tr = static_cast<std::size_t>(rest[q].c.trellis);
        if (seen_trellis[tr]) continue;
        seen_trellis[tr] = 1;
        taken[q] = 1;
        chosen.push_back(rest[q]);
      }
      for (std::size_t q = 0; q < rest.size() && chosen.size() < list_size; ++q)
        if (!taken[q]) chosen.push_back(rest[q]);
      std::stable_sort(chosen.begin(), chosen.end(), [](const Proposal& a, const Proposal& b) {
        if (a.c.metric != b.c.metric) return a.c.metric < b.c.metric;
        if (a.c.primary != b.c.primary) return a.c.primary;
        return a.order < b.order;
      });
      auto& dst = st.lists[vbase + lv];
      dst.clear();
      for (const auto& p : chosen) dst.push_back(p.c);
    }
  }
  return st;
}

inline DecodeOutcome final_decision_list(const IndexedTrellis& it, const WeightAssignment& w, const Phase1State& p1,
                                         const ListState& st) {
  const Trellis& t = it.trellis;
  OpCounters counters = p1.counters;
  counters += st.counters;
  struct Entry {
    double weight;
    Stage stage;
    std::size_t index;
    std::size_t slot;
  };
  std::optional<Entry> best;
  auto offer = [&](Entry e) {
    if (best) ++counters.comparisons;
    if (!best || e.weight < best->weight) best = e;
  };
  for (std::size_t i = 0; i < t.num_subtrellises(); ++i)
    if (p1.surv[t.final_id(i)] == static_cast<std::int32_t>(i)) offer({p1.cost[t.final_id(i)], Stage::phase1, i, 0});
  for (std::size_t i = 0; i < t.num_subtrellises(); ++i) {
    const auto& cands = st.lists[t.final_id(i)];
    for (std::size_t slot = 0; slot < cands.size(); ++slot)
      if (cands[slot].trellis == static_cast<std::int32_t>(i)) offer({cands[slot].dist, Stage::phase2, i, slot});
  }
  if (!best) {
    auto fb = viterbi_subtrellis(it, w, p1.best_final);
    auto out = detail::make_outcome(t, w, std::move(fb.edges), Stage::fallback, p1.best_final);
    counters.fallback_comparisons += fb.counters.comparisons;
    out.counters = counters;
    return out;
  }
  std::vector<std::size_t> edges;
  if (best->stage == Stage::phase1) {
    edges = detail::trace_edges(t, p1.pred_edge, t.final_id(best->index));
  } else {
    edges.resize(t.num_sections());
    std::size_t v = t.final_id(best->index);
    std::size_t slot = best->slot;
    for (std::size_t s = t.num_sections(); s-- > 0;) {
      const auto& c = st.lists[v][slot];
      edges[s] = static_cast<std::size_t>(c.pred_edge);
      v = t.edge_from(edges[s]);
      slot = static_cast<std::size_t>(c.pred_slot);
    }
  }
  auto out = detail::make_outcome(t, w, std::move(edges), best->stage, best->index);
  out.counters = counters;
  return out;
}

struct DecodeOptions {
  std::size_t list_size = 1;
  bool participation_prune = true;
};

/// Full record of one two-phase decode, kept for tracing and audits.
struct TwoPhaseRun {
  Phase1State p1;
  std::optional<Phase2State> p2;
  std::optional<ListState> list;
  DecodeOutcome outcome;
};

inline TwoPhaseRun run_two_phase(const IndexedTrellis& it, const WeightAssignment& w, const DecodeOptions& opts = {}) {
  if (opts.list_size < 1) throw Error(ErrorCode::InvalidArgument, "list size must be >= 1");
  TwoPhaseRun run;
  run.p1 = phase1(it, w);
  if (auto early = phase1_decision(it, w, run.p1)) {
    run.outcome = std::move(*early);
    return run;
  }
  const Phase2Options p2opts{opts.participation_prune};
  if (opts.list_size == 1) {
    run.p2 = phase2(it, w, run.p1, p2opts);
    run.outcome = final_decision(it, w, run.p1, *run.p2);
  } else {
    run.list = phase2_list(it, w, run.p1, opts.list_size, p2opts);
    run.outcome = final_decision_list(it, w, run.p1, *run.list);
  }
  return run;
}

inline DecodeOutcome decode_two_phase(const IndexedTrellis& it, const WeightAssignment& w,
                                      const DecodeOptions& opts = {}) {
  return run_two_phase(it, w, opts).outcome;
}

// ---------------------------------------------------------------------------
// Trace records

inline std::string format_weight(double x) {
  if (x == kInf) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// One "phase=1" record per vertex, then one "phase=2" record per vertex when
/// round two ran with a single list. Field order is fixed.
inline void write_trace(std::ostream& os, const Trellis& t, const Phase1State& p1, const Phase2State* p2) {
  for (std::size_t v = 0; v < t.num_vertices(); ++v)
    os << "phase=1 v=" << v << " cost=" << format_weight(p1.cost[v]) << " surv=" << p1.surv[v]
       << " pred=" << p1.pred_vertex(t, v) << '\n';
  if (!p2) return;
  for (std::size_t v = 0; v < t.num_vertices(); ++v) {
    os << "phase=2 v=" << v << " metric=" << format_weight(p2->metric[v]) << " trellis=" << p2->trellis[v]
       << " dist=" << format_weight(p2->dist[v]) << " pred=";
    if (p2->trellis[v] == kNoTrellis)
      os << -1;
    else
      os << p2->pred_vertex(t, v);
    os << '\n';
  }
}

}  // namespace tbt
