#pragma once

// Layered tail-biting trellises: elementary trellises and their product,
// trellises straight from a convolutional encoder, the per-vertex
// subtrellis reachability masks behind the O(1) membership test, and
// start-to-final shortest path tables.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tbt/bits.hpp"
#include "tbt/code_model.hpp"
#include "tbt/error.hpp"

namespace tbt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Edge of one section, endpoints numbered locally within their time index.
/// Label bit j is the j-th code bit the section emits.
struct Edge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::uint32_t label = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable layered graph with time indices 0..n and sections 1..n.
/// sections()[s] holds the edges of section s+1 (index s -> index s+1) in a
/// fixed order, which is the tie-breaking order of every decoder. starts()[i]
/// and finals()[i] are the paired vertices of subtrellis i.
///
/// Vertices also get dense global ids (index-major), used by the decoders.
class Trellis {
 public:
  Trellis() = default;

  Trellis(int label_width, std::vector<std::uint32_t> vertex_counts, std::vector<std::vector<Edge>> sections,
          std::vector<std::uint32_t> starts, std::vector<std::uint32_t> finals)
      : label_width_(label_width),
        vertex_counts_(std::move(vertex_counts)),
        sections_(std::move(sections)),
        starts_(std::move(starts)),
        finals_(std::move(finals)) {
    if (label_width_ < 1 || label_width_ > 16) throw Error(ErrorCode::InvalidArgument, "label width must be 1..16");
    if (sections_.empty() || vertex_counts_.size() != sections_.size() + 1)
      throw Error(ErrorCode::ShapeMismatch, "need n >= 1 sections and n+1 time indices");
    if (starts_.empty() || starts_.size() != finals_.size())
      throw Error(ErrorCode::ShapeMismatch, "starts and finals must pair up");
    for (auto s : starts_)
      if (s >= vertex_counts_.front()) throw Error(ErrorCode::ShapeMismatch, "start vertex out of range");
    for (auto f : finals_)
      if (f >= vertex_counts_.back()) throw Error(ErrorCode::ShapeMismatch, "final vertex out of range");
    const std::uint32_t label_limit = 1U << label_width_;
    vertex_offset_.resize(vertex_counts_.size() + 1, 0);
    for (std::size_t i = 0; i < vertex_counts_.size(); ++i)
      vertex_offset_[i + 1] = vertex_offset_[i] + vertex_counts_[i];
    edge_offset_.resize(sections_.size() + 1, 0);
    for (std::size_t s = 0; s < sections_.size(); ++s) {
      for (const auto& e : sections_[s]) {
        if (e.from >= vertex_counts_[s] || e.to >= vertex_counts_[s + 1])
          throw Error(ErrorCode::ShapeMismatch, "edge leaves its section in section " + std::to_string(s + 1));
        if (e.label >= label_limit) throw Error(ErrorCode::ShapeMismatch, "label wider than label width");
        flat_.push_back(Edge{static_cast<std::uint32_t>(vertex_offset_[s] + e.from),
                             static_cast<std::uint32_t>(vertex_offset_[s + 1] + e.to), e.label});
      }
      edge_offset_[s + 1] = edge_offset_[s] + sections_[s].size();
    }
  }

  int label_width() const { return label_width_; }
  std::size_t num_sections() const { return sections_.size(); }
  std::size_t num_subtrellises() const { return starts_.size(); }
  std::size_t code_length() const { return sections_.size() * static_cast<std::size_t>(label_width_); }

  const std::vector<std::uint32_t>& vertex_counts() const { return vertex_counts_; }
  const std::vector<std::vector<Edge>>& sections() const { return sections_; }
  const std::vector<std::uint32_t>& starts() const { return starts_; }
  const std::vector<std::uint32_t>& finals() const { return finals_; }

  std::size_t num_vertices() const { return vertex_offset_.back(); }
  std::size_t num_edges() const { return edge_offset_.back(); }

  std::size_t vertex_id(std::size_t time, std::uint32_t local) const { return vertex_offset_[time] + local; }
  std::size_t time_begin(std::size_t time) const { return vertex_offset_[time]; }
  std::size_t edge_begin(std::size_t section) const { return edge_offset_[section]; }
  std::size_t start_id(std::size_t i) const { return starts_[i]; }
  std::size_t final_id(std::size_t i) const { return vertex_offset_[sections_.size()] + finals_[i]; }

  /// Global endpoints of edge e.
  std::uint32_t edge_from(std::size_t e) const { return flat_[e].from; }
  std::uint32_t edge_to(std::size_t e) const { return flat_[e].to; }
  std::uint32_t edge_label(std::size_t e) const { return flat_[e].label; }
  std::size_t section_of_edge(std::size_t e) const {
    return static_cast<std::size_t>(std::upper_bound(edge_offset_.begin(), edge_offset_.end(), e) -
                                    edge_offset_.begin()) - 1;
  }
  std::size_t time_of_vertex(std::size_t v) const {
    return static_cast<std::size_t>(std::upper_bound(vertex_offset_.begin(), vertex_offset_.end(), v) -
                                    vertex_offset_.begin()) - 1;
  }

 private:
  int label_width_ = 1;
  std::vector<std::uint32_t> vertex_counts_;
  std::vector<std::vector<Edge>> sections_;
  std::vector<std::uint32_t> starts_, finals_;
  std::vector<std::size_t> vertex_offset_, edge_offset_;
  std::vector<Edge> flat_;  // global endpoints
};

/// Largest subtrellis count accepted; TBT_MAX_T raises it.
inline std::size_t subtrellis_cap() {
  std::size_t cap = 64;
  if (const char* env = std::getenv("TBT_MAX_T")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) cap = static_cast<std::size_t>(v);
  }
  return cap;
}

inline constexpr std::size_t kDefaultMaxVertices = std::size_t{1} << 22;

/// Single-path all-zero trellis, the identity of trellis_product.
inline Trellis zero_trellis(std::size_t n, int label_width = 1) {
  std::vector<std::vector<Edge>> sections(n, std::vector<Edge>{Edge{0, 0, 0}});
  return Trellis(label_width, std::vector<std::uint32_t>(n + 1, 1), std::move(sections), {0}, {0});
}

/// Minimal binary trellis of {0, row}: two vertices at time indices
/// lo..hi-1 (wrapping through index n == 0 for circular spans), one elsewhere.
inline Trellis elementary_trellis(const BitVec& row, const Span& span) {
  if (is_zero(row)) throw Error(ErrorCode::ZeroRow, "elementary trellis of the zero vector");
  const int n = static_cast<int>(row.size());
  GeneratorSpec probe{n, {GeneratorRow{row, span}}};
  validate_generator(probe);

  auto active = [&](int idx) {
    if (span.kind == SpanKind::linear) return span.lo <= idx && idx <= span.hi - 1;
    return idx >= span.lo || idx <= span.hi - 1;
  };
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(n + 1));
  for (int idx = 0; idx <= n; ++idx) counts[idx] = active(idx) ? 2 : 1;

  std::vector<std::vector<Edge>> sections(static_cast<std::size_t>(n));
  for (int p = 1; p <= n; ++p) {
    auto& edges = sections[p - 1];
    for (std::uint32_t a = 0; a < 2; ++a) {
      const Edge e{active(p - 1) ? a : 0U, active(p) ? a : 0U, a & row[p - 1]};
      if (std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(e);
    }
  }
  std::vector<std::uint32_t> ends = counts[0] == 2 ? std::vector<std::uint32_t>{0, 1} : std::vector<std::uint32_t>{0};
  return Trellis(1, std::move(counts), std::move(sections), ends, ends);
}

/// Sectionwise Cartesian product; labels add over GF(2). Vertex (v1, v2) gets
/// local id v1 * |V2(i)| + v2 and subtrellis (a, b) gets index a * t2 + b.
inline Trellis trellis_product(const Trellis& t1, const Trellis& t2, std::size_t max_vertices = kDefaultMaxVertices) {
  if (t1.num_sections() != t2.num_sections() || t1.label_width() != t2.label_width())
    throw Error(ErrorCode::ShapeMismatch, "product needs equal section counts and label widths");
  const std::size_t n = t1.num_sections();
  const auto& c1 = t1.vertex_counts();
  const auto& c2 = t2.vertex_counts();
  std::vector<std::uint32_t> counts(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const std::size_t c = std::size_t{c1[i]} * c2[i];
    if (c > max_vertices) throw Error(ErrorCode::TooLarge, "product has too many vertices at one time index");
    counts[i] = static_cast<std::uint32_t>(c);
  }
  std::vector<std::vector<Edge>> sections(n);
  for (std::size_t s = 0; s < n; ++s) {
    auto& out = sections[s];
    out.reserve(t1.sections()[s].size() * t2.sections()[s].size());
    for (const auto& e1 : t1.sections()[s])
      for (const auto& e2 : t2.sections()[s])
        out.push_back(Edge{e1.from * c2[s] + e2.from, e1.to * c2[s + 1] + e2.to, e1.label ^ e2.label});
  }
  std::vector<std::uint32_t> starts, finals;
  for (std::size_t a = 0; a < t1.num_subtrellises(); ++a)
    for (std::size_t b = 0; b < t2.num_subtrellises(); ++b) {
      starts.push_back(t1.starts()[a] * c2[0] + t2.starts()[b]);
      finals.push_back(t1.finals()[a] * c2[n] + t2.finals()[b]);
    }
  return Trellis(t1.label_width(), std::move(counts), std::move(sections), std::move(starts), std::move(finals));
}

/// Product of the elementary trellises of all rows, in row order; 2^c
/// subtrellises with subtrellis 0 carrying the subcode through zero.
inline Trellis build_tbt_product(const GeneratorSpec& spec, std::size_t max_vertices = kDefaultMaxVertices) {
  validate_generator(spec);
  if (spec.circular_count() >= 63 || (std::size_t{1} << spec.circular_count()) > subtrellis_cap())
    throw Error(ErrorCode::TooLarge, std::to_string(spec.circular_count()) + " circular rows exceed the subtrellis cap");
  Trellis acc = zero_trellis(static_cast<std::size_t>(spec.n));
  for (const auto& row : spec.rows) acc = trellis_product(acc, elementary_trellis(row.bits, row.span), max_vertices);
  return acc;
}

/// Encoder-state trellis: vertex sigma at every index holds u_{t-1..t-m}
/// (u_{t-d} at bit d-1); the input bit u moves sigma to (sigma<<1 | u).
/// Every state is both a start and its own final.
inline Trellis build_tbt_conv(const ConvCodeSpec& spec, std::size_t max_vertices = kDefaultMaxVertices) {
  validate_conv(spec);
  const std::uint32_t states = 1U << spec.memory;
  if (std::size_t{states} * static_cast<std::size_t>(spec.circle + 1) > max_vertices)
    throw Error(ErrorCode::TooLarge, "conv trellis exceeds the vertex bound");
  if (states > subtrellis_cap()) throw Error(ErrorCode::TooLarge, "2^memory exceeds the subtrellis cap");
  std::vector<Edge> section;
  section.reserve(2 * states);
  for (std::uint32_t sigma = 0; sigma < states; ++sigma)
    for (std::uint32_t u = 0; u < 2; ++u) {
      std::uint32_t a = spec.taps0[0] & u, b = spec.taps1[0] & u;
      for (int d = 1; d <= spec.memory; ++d) {
        const std::uint32_t past = (sigma >> (d - 1)) & 1U;
        a ^= spec.taps0[d] & past;
        b ^= spec.taps1[d] & past;
      }
      section.push_back(Edge{sigma, ((sigma << 1) | u) & (states - 1), a | (b << 1)});
    }
  std::vector<std::uint32_t> ends(states);
  for (std::uint32_t s = 0; s < states; ++s) ends[s] = s;
  return Trellis(2, std::vector<std::uint32_t>(static_cast<std::size_t>(spec.circle) + 1, states),
                 std::vector<std::vector<Edge>>(static_cast<std::size_t>(spec.circle), section), ends, ends);
}

// ---------------------------------------------------------------------------
// Reachability masks

/// fwd(u) has bit k iff some s_k -> u path exists; bwd(v) has bit j iff some
/// v -> f_j path exists. Edge (u,v) lies in subtrellis i iff both have bit i.
class ReachIndex {
 public:
  ReachIndex() = default;

  explicit ReachIndex(const Trellis& t) : t_(t.num_subtrellises()), words_((t_ + 63) / 64) {
    const std::size_t nv = t.num_vertices();
    fwd_.assign(nv * words_, 0);
    bwd_.assign(nv * words_, 0);
    for (std::size_t k = 0; k < t_; ++k) {
      set(fwd_, t.start_id(k), k);
      set(bwd_, t.final_id(k), k);
    }
    for (std::size_t e = 0; e < t.num_edges(); ++e) {
      const std::size_t u = t.edge_from(e), v = t.edge_to(e);
      for (std::size_t w = 0; w < words_; ++w) fwd_[v * words_ + w] |= fwd_[u * words_ + w];
    }
    for (std::size_t e = t.num_edges(); e-- > 0;) {
      const std::size_t u = t.edge_from(e), v = t.edge_to(e);
      for (std::size_t w = 0; w < words_; ++w) bwd_[u * words_ + w] |= bwd_[v * words_ + w];
    }
  }

  std::size_t subtrellises() const { return t_; }
  std::size_t words_per_vertex() const { return words_; }

  bool fwd_has(std::size_t v, std::size_t i) const { return test(fwd_, v, i); }
  bool bwd_has(std::size_t v, std::size_t i) const { return test(bwd_, v, i); }
  bool member(std::size_t from, std::size_t to, std::size_t i) const {
    return (fwd_[from * words_ + i / 64] & bwd_[to * words_ + i / 64]) >> (i % 64) & 1U;
  }
  bool fwd_empty(std::size_t v) const { return empty(fwd_, v); }
  bool bwd_empty(std::size_t v) const { return empty(bwd_, v); }

  std::span<const std::uint64_t> fwd(std::size_t v) const { return {fwd_.data() + v * words_, words_}; }
  std::span<const std::uint64_t> bwd(std::size_t v) const { return {bwd_.data() + v * words_, words_}; }

 private:
  void set(std::vector<std::uint64_t>& m, std::size_t v, std::size_t i) const {
    m[v * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
  }
  bool test(const std::vector<std::uint64_t>& m, std::size_t v, std::size_t i) const {
    return (m[v * words_ + i / 64] >> (i % 64)) & 1U;
  }
  bool empty(const std::vector<std::uint64_t>& m, std::size_t v) const {
    for (std::size_t w = 0; w < words_; ++w)
      if (m[v * words_ + w]) return false;
    return true;
  }

  std::size_t t_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> fwd_, bwd_;
};

struct IndexedTrellis {
  Trellis trellis;
  ReachIndex reach;

  std::size_t t() const { return trellis.num_subtrellises(); }
  bool member(std::size_t edge, std::size_t i) const {
    return reach.member(trellis.edge_from(edge), trellis.edge_to(edge), i);
  }
};

/// Removes every vertex that lies on no start-to-final path, then indexes
/// the result. Local ids are renumbered densely, keeping relative order.
inline IndexedTrellis build_reach_index(const Trellis& t) {
  if (t.num_subtrellises() > subtrellis_cap())
    throw Error(ErrorCode::TooLarge, std::to_string(t.num_subtrellises()) + " subtrellises exceed the cap");
  const ReachIndex raw(t);
  bool any = false;
  for (std::size_t j = 0; j < t.num_subtrellises(); ++j) any = any || !raw.fwd_empty(t.final_id(j));
  if (!any) throw Error(ErrorCode::EmptyTrellis, "no start reaches any final");
  for (std::size_t i = 0; i < t.num_subtrellises(); ++i)
    if (!raw.fwd_has(t.final_id(i), i))
      throw Error(ErrorCode::MissingSubtrellis, "subtrellis " + std::to_string(i) + " has no codeword path");

  const std::size_t n = t.num_sections();
  std::vector<std::vector<std::int64_t>> remap(n + 1);
  std::vector<std::uint32_t> counts(n + 1, 0);
  for (std::size_t i = 0; i <= n; ++i) {
    remap[i].assign(t.vertex_counts()[i], -1);
    for (std::uint32_t v = 0; v < t.vertex_counts()[i]; ++v) {
      const auto g = t.vertex_id(i, v);
      if (!raw.fwd_empty(g) && !raw.bwd_empty(g)) remap[i][v] = counts[i]++;
    }
  }
  std::vector<std::vector<Edge>> sections(n);
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& e : t.sections()[s]) {
      const auto a = remap[s][e.from], b = remap[s + 1][e.to];
      if (a >= 0 && b >= 0)
        sections[s].push_back(Edge{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), e.label});
    }
  std::vector<std::uint32_t> starts, finals;
  for (std::size_t i = 0; i < t.num_subtrellises(); ++i) {
    starts.push_back(static_cast<std::uint32_t>(remap[0][t.starts()[i]]));
    finals.push_back(static_cast<std::uint32_t>(remap[n][t.finals()[i]]));
  }
  Trellis pruned(t.label_width(), std::move(counts), std::move(sections), std::move(starts), std::move(finals));
  ReachIndex reach(pruned);
  return IndexedTrellis{std::move(pruned), std::move(reach)};
}

// ---------------------------------------------------------------------------
// Weights and shortest paths

/// One nonnegative weight per edge, indexed by global edge id.
struct WeightAssignment {
  std::vector<double> w;
  double operator[](std::size_t e) const { return w[e]; }
};

/// Shortest path weight from start k to every vertex (kInf where unreachable).
inline std::vector<double> single_start_costs(const Trellis& t, const WeightAssignment& w, std::size_t k) {
  std::vector<double> cost(t.num_vertices(), kInf);
  cost[t.start_id(k)] = 0.0;
  for (std::size_t e = 0; e < t.num_edges(); ++e) {
    const double c = cost[t.edge_from(e)];
    if (c == kInf) continue;
    const double cand = c + w[e];
    double& dst = cost[t.edge_to(e)];
    if (dst > cand) dst = cand;
  }
  return cost;
}

/// l(s_k, u) for every start k and vertex u, row-major by k.
inline std::vector<std::vector<double>> start_distances(const Trellis& t, const WeightAssignment& w) {
  std::vector<std::vector<double>> out;
  out.reserve(t.num_subtrellises());
  for (std::size_t k = 0; k < t.num_subtrellises(); ++k) out.push_back(single_start_costs(t, w, k));
  return out;
}

/// d(k, j) = l(s_k, f_j).
struct DistanceTable {
  std::size_t t = 0;
  std::vector<double> d;

  double at(std::size_t k, std::size_t j) const { return d[k * t + j]; }
};

inline DistanceTable all_pairs_start_final_distances(const Trellis& t, const WeightAssignment& w) {
  DistanceTable table{t.num_subtrellises(), std::vector<double>(t.num_subtrellises() * t.num_subtrellises(), kInf)};
  for (std::size_t k = 0; k < table.t; ++k) {
    const auto cost = single_start_costs(t, w, k);
    for (std::size_t j = 0; j < table.t; ++j) table.d[k * table.t + j] = cost[t.final_id(j)];
  }
  return table;
}

/// Code bits emitted along a sequence of global edge ids.
inline BitVec path_labels(const Trellis& t, std::span<const std::size_t> edges) {
  BitVec out;
  out.reserve(edges.size() * static_cast<std::size_t>(t.label_width()));
  for (auto e : edges) {
    const auto label = t.edge_label(e);
    for (int j = 0; j < t.label_width(); ++j) out.push_back(static_cast<std::uint8_t>((label >> j) & 1U));
  }
  return out;
}

/// Enumerates every start-to-final path as (start index, final index, edge
/// ids). Intended for toy-scale oracles only; throws TooLarge past max_paths.
template <typename Fn>
void for_each_start_final_path(const Trellis& t, Fn&& fn, std::size_t max_paths = 1U << 20) {
  const std::size_t n = t.num_sections();
  std::vector<std::size_t> final_index(t.vertex_counts().back(), SIZE_MAX);
  for (std::size_t j = 0; j < t.num_subtrellises(); ++j) final_index[t.finals()[j]] = j;
  std::vector<std::size_t> path;
  std::size_t count = 0;
  // Out-edges per global vertex.
  std::vector<std::vector<std::size_t>> out(t.num_vertices());
  for (std::size_t e = 0; e < t.num_edges(); ++e) out[t.edge_from(e)].push_back(e);

  auto rec = [&](auto&& self, std::size_t k, std::size_t v, std::size_t depth) -> void {
    if (depth == n) {
      const std::size_t j = final_index[v - t.time_begin(n)];
      if (j == SIZE_MAX) return;
      if (++count > max_paths) throw Error(ErrorCode::TooLarge, "path enumeration bound exceeded");
      fn(k, j, std::span<const std::size_t>(path));
      return;
    }
    for (auto e : out[v]) {
      path.push_back(e);
      self(self, k, t.edge_to(e), depth + 1);
      path.pop_back();
    }
  };
  for (std::size_t k = 0; k < t.num_subtrellises(); ++k) rec(rec, k, t.start_id(k), 0);
}

}  // namespace tbt
