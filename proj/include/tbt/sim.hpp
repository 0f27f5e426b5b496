#pragma once

// Monte Carlo harness: code catalog, per-frame simulation, tallies, CSV.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "tbt/bits.hpp"
#include "tbt/channel.hpp"
#include "tbt/code_model.hpp"
#include "tbt/decoder.hpp"
#include "tbt/diagnostics.hpp"
#include "tbt/error.hpp"
#include "tbt/trellis.hpp"

namespace tbt {

/// A code together with its indexed trellis. Bit errors are counted on
/// message bits for convolutional codes and on codeword bits otherwise.
class CodeUnderTest {
 public:
  CodeUnderTest(std::string name, GeneratorSpec spec)
      : name_(std::move(name)), spec_(std::move(spec)) {
    const auto& g = std::get<GeneratorSpec>(spec_);
    trellis_ = build_reach_index(build_tbt_product(g));
    basis_ = semi_codeword_basis(g);
  }
  CodeUnderTest(std::string name, ConvCodeSpec spec) : name_(std::move(name)), spec_(std::move(spec)) {
    trellis_ = build_reach_index(build_tbt_conv(std::get<ConvCodeSpec>(spec_)));
  }

  const std::string& name() const { return name_; }
  const IndexedTrellis& trellis() const { return trellis_; }
  bool is_conv() const { return std::holds_alternative<ConvCodeSpec>(spec_); }
  const GeneratorSpec* generator() const { return std::get_if<GeneratorSpec>(&spec_); }
  const ConvCodeSpec* conv() const { return std::get_if<ConvCodeSpec>(&spec_); }
  const SemiCodewordBasis* semi_basis() const { return basis_ ? &*basis_ : nullptr; }

  std::size_t message_bits() const {
    return is_conv() ? static_cast<std::size_t>(conv()->circle) : static_cast<std::size_t>(generator()->k());
  }
  std::size_t code_bits() const { return trellis_.trellis.code_length(); }
  double rate() const { return static_cast<double>(message_bits()) / static_cast<double>(code_bits()); }

  BitVec encode(const BitVec& msg) const {
    return is_conv() ? encode_conv_tailbiting(*conv(), msg) : encode_block(*generator(), msg);
  }

  std::size_t error_bits_per_frame() const { return is_conv() ? message_bits() : code_bits(); }
  std::string error_bits_description() const {
    return is_conv() ? "bit errors counted on message bits" : "bit errors counted on codeword bits";
  }

  BitVec reference_bits(const BitVec& msg, const BitVec& codeword) const { return is_conv() ? msg : codeword; }

  /// Message bits of a conv trellis path are the low bits of each next state.
  BitVec decoded_bits(const DecodeOutcome& out) const {
    if (!is_conv()) return out.codeword;
    const Trellis& t = trellis_.trellis;
    BitVec msg(out.edges.size());
    for (std::size_t s = 0; s < out.edges.size(); ++s)
      msg[s] = static_cast<std::uint8_t>((out.path[s + 1] - t.time_begin(s + 1)) & 1U);
    return msg;
  }

 private:
  std::string name_;
  std::variant<GeneratorSpec, ConvCodeSpec> spec_;
  IndexedTrellis trellis_;
  std::optional<SemiCodewordBasis> basis_;
};

// ---------------------------------------------------------------------------
// Catalog

inline ConvCodeSpec conv_from_octal(int memory, std::string_view g0, std::string_view g1, int circle) {
  ConvCodeSpec spec{memory, taps_from_octal(g0), taps_from_octal(g1), circle};
  spec.taps0.resize(static_cast<std::size_t>(memory + 1), 0);
  spec.taps1.resize(static_cast<std::size_t>(memory + 1), 0);
  return validate_conv(spec);
}

inline GeneratorSpec toy_block_n4() {
  return parse_generator("4 2\n1100 1 2 L\n1001 4 1 C\n");
}

inline GeneratorSpec toy_product_n8k4c1() {
  return parse_generator(
      "8 4\n"
      "11010000 1 4 L\n"
      "00110100 3 6 L\n"
      "00001101 5 8 L\n"
      "01000011 7 2 C\n");
}

inline std::vector<std::string> catalog_names() {
  return {"mem4-circle20",    "mem6-circle48",      "toy-conv-m2-l8",    "toy-block-n4",
          "toy-product-n8k4c1", "toygen-conv-m2-l5", "toygen-conv-m2-l8"};
}

inline CodeUnderTest catalog_lookup(const std::string& name) {
  if (name == "mem4-circle20") return {name, conv_from_octal(4, "72", "62", 20)};
  if (name == "mem6-circle48") return {name, conv_from_octal(6, "554", "744", 48)};
  if (name == "toy-conv-m2-l8") return {name, conv_from_octal(2, "7", "5", 8)};
  if (name == "toy-block-n4") return {name, toy_block_n4()};
  if (name == "toy-product-n8k4c1") return {name, toy_product_n8k4c1()};
  if (name == "toygen-conv-m2-l5") return {name, conv_to_generator(conv_from_octal(2, "7", "5", 5))};
  if (name == "toygen-conv-m2-l8") return {name, conv_to_generator(conv_from_octal(2, "7", "5", 8))};
  throw Error(ErrorCode::InvalidArgument, "no catalog code named '" + name + "'");
}

// ---------------------------------------------------------------------------
// Decoders

struct DecoderKind {
  enum class Type { two_phase, exact_ml, phase1_only } type = Type::two_phase;
  std::size_t list_size = 1;

  std::string name() const {
    switch (type) {
      case Type::exact_ml: return "exact-ml";
      case Type::phase1_only: return "phase1-only";
      case Type::two_phase: break;
    }
    return "two-phase-L" + std::to_string(list_size);
  }
};

inline DecoderKind parse_decoder(const std::string& s) {
  if (s == "exact-ml") return {DecoderKind::Type::exact_ml, 1};
  if (s == "phase1-only") return {DecoderKind::Type::phase1_only, 1};
  const std::string prefix = "two-phase-L";
  if (s.rfind(prefix, 0) == 0 && s.size() > prefix.size()) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s.substr(prefix.size()), &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == s.size() - prefix.size() && v >= 1) return {DecoderKind::Type::two_phase, v};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown decoder '" + s + "'");
}

struct SimConfig {
  std::vector<double> ebn0_db{0, 1, 2, 3, 4, 5, 6};
  std::uint64_t frames = 100000;
  std::uint64_t seed = 1;
  std::vector<std::string> decoders{"two-phase-L1", "two-phase-L2", "exact-ml"};
  bool participation_prune = true;
  bool genie_zero = false;
  unsigned workers = 1;

  void validate() const {
    if (frames < 1) throw Error(ErrorCode::InvalidArgument, "frames must be >= 1");
    if (ebn0_db.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one Eb/N0 point");
    if (decoders.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one decoder");
    for (const auto& d : decoders) parse_decoder(d);
    if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
  }
};

/// One CSV row; the fields after avg_comparisons are extra per-run checks
/// that the CSV does not carry.
struct SimResultRow {
  double ebn0_db = 0.0;
  std::string decoder;
  std::uint64_t frames = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t frame_errors = 0;
  double ber = 0.0;
  double fer = 0.0;
  std::uint64_t ml_mismatches = 0;
  std::uint64_t phase1_stops = 0;
  std::uint64_t fallbacks = 0;
  double avg_comparisons = 0.0;

  std::uint64_t total_comparisons = 0;
  std::uint64_t dominance_violations = 0;     // weight below exact ML, or list wider but heavier
  std::uint64_t invalid_outputs = 0;          // output not a codeword path
  std::uint64_t comparison_bound_violations = 0;
  std::uint64_t theorem1_checked = 0, theorem1_witnessed = 0;
  std::uint64_t theorem2_checked = 0, theorem2_witnessed = 0, theorem2_right_failures = 0;
};

struct FrameDecode {
  DecoderKind kind;
  DecodeOutcome outcome;
};

struct FrameResult {
  std::uint64_t frame = 0;
  BitVec message;
  BitVec codeword;
  ReceivedVector rv;
  std::vector<FrameDecode> decodes;  // in config order
};

inline FrameResult simulate_frame(const CodeUnderTest& code, const SimConfig& cfg, double ebn0_db,
                                  std::uint64_t frame) {
  FrameResult fr;
  fr.frame = frame;
  fr.message = cfg.genie_zero ? BitVec(code.message_bits(), 0) : random_message(code.message_bits(), cfg.seed, frame);
  fr.codeword = code.encode(fr.message);
  const auto signal = bpsk_modulate(fr.codeword);
  fr.rv = awgn_transmit(signal, ChannelParams{ebn0_db, code.rate(), cfg.seed}, frame);
  const auto w = edge_weights(code.trellis().trellis, fr.rv);
  for (const auto& name : cfg.decoders) {
    const DecoderKind kind = parse_decoder(name);
    FrameDecode d{kind, {}};
    switch (kind.type) {
      case DecoderKind::Type::exact_ml: d.outcome = decode_exact_ml(code.trellis(), w); break;
      case DecoderKind::Type::phase1_only: d.outcome = decode_phase1_only(code.trellis(), w); break;
      case DecoderKind::Type::two_phase:
        d.outcome = decode_two_phase(code.trellis(), w, DecodeOptions{kind.list_size, cfg.participation_prune});
        break;
    }
    fr.decodes.push_back(std::move(d));
  }
  return fr;
}

/// Weight comparisons of a single full-trellis Viterbi sweep with its final
/// selection over the t final vertices.
inline std::uint64_t viterbi_sweep_comparisons(const Trellis& t) {
  return t.num_edges() + t.num_subtrellises() - 1;
}

struct SimOutput {
  std::vector<SimResultRow> rows;
  std::vector<MismatchReport> mismatches;  // ordered by (point, frame, decoder)
};

namespace detail {

struct PointTally {
  std::vector<SimResultRow> rows;
  std::vector<MismatchReport> mismatches;
};

inline void tally_frame(const CodeUnderTest& code, const SimConfig& cfg, double ebn0, const FrameResult& fr,
                        PointTally& tally) {
  const Trellis& t = code.trellis().trellis;
  const DecodeOutcome* exact = nullptr;
  const DecodeOutcome* l1 = nullptr;
  for (const auto& d : fr.decodes) {
    if (d.kind.type == DecoderKind::Type::exact_ml) exact = &d.outcome;
    if (d.kind.type == DecoderKind::Type::two_phase && d.kind.list_size == 1) l1 = &d.outcome;
  }
  const BitVec ref = code.reference_bits(fr.message, fr.codeword);
  const std::uint64_t bound = 2 * viterbi_sweep_comparisons(t);
  std::optional<DistanceTable> table;
  std::optional<WeightAssignment> weights;

  for (std::size_t q = 0; q < fr.decodes.size(); ++q) {
    const auto& d = fr.decodes[q];
    const auto& out = d.outcome;
    auto& row = tally.rows[q];
    ++row.frames;
    const auto bit_err = hamming_distance(code.decoded_bits(out), ref);
    row.bit_errors += bit_err;
    if (out.codeword != fr.codeword) ++row.frame_errors;
    row.total_comparisons += out.counters.comparisons;
    if (d.kind.type != DecoderKind::Type::two_phase) {
      if (exact && d.kind.type != DecoderKind::Type::exact_ml && out.codeword != exact->codeword) ++row.ml_mismatches;
      continue;
    }
    if (out.stage == Stage::phase1) ++row.phase1_stops;
    if (out.stage == Stage::fallback) ++row.fallbacks;
    if (!out.is_codeword_path()) ++row.invalid_outputs;
    if (d.kind.list_size == 1 && out.counters.comparisons > bound) ++row.comparison_bound_violations;
    if (l1 && d.kind.list_size > 1 && out.weight > l1->weight) ++row.dominance_violations;
    if (!exact) continue;
    if (out.weight < exact->weight) ++row.dominance_violations;
    if (out.codeword == exact->codeword) continue;
    ++row.ml_mismatches;

    MismatchReport rep;
    rep.frame = fr.frame;
    rep.ebn0_db = ebn0;
    rep.decoder = d.kind.name();
    rep.ml_subtrellis = exact->subtrellis();
    rep.ml_weight = exact->weight;
    rep.out_subtrellis = out.subtrellis();
    rep.out_weight = out.weight;
    if (!weights) weights = edge_weights(t, fr.rv);
    if (!table) table = all_pairs_start_final_distances(t, *weights);
    rep.theorem1 = check_theorem1(*table, exact->subtrellis());
    ++row.theorem1_checked;
    if (rep.theorem1) ++row.theorem1_witnessed;
    const auto* basis = code.semi_basis();
    if (cfg.genie_zero && basis && basis->rows.size() <= static_cast<std::size_t>(kMaxSemiBasisRows) &&
        exact->codeword == fr.codeword) {
      rep.theorem2_checked = true;
      rep.theorem2 = check_theorem2(fr.rv, exact->codeword, out.codeword, *basis, *code.generator());
      ++row.theorem2_checked;
      if (rep.theorem2->witness) ++row.theorem2_witnessed;
      if (!rep.theorem2->right_inequality_holds) ++row.theorem2_right_failures;
    }
    tally.mismatches.push_back(std::move(rep));
  }
}

inline void merge_rows(std::vector<SimResultRow>& acc, const std::vector<SimResultRow>& part) {
  for (std::size_t q = 0; q < acc.size(); ++q) {
    auto& a = acc[q];
    const auto& b = part[q];
    a.frames += b.frames;
    a.bit_errors += b.bit_errors;
    a.frame_errors += b.frame_errors;
    a.ml_mismatches += b.ml_mismatches;
    a.phase1_stops += b.phase1_stops;
    a.fallbacks += b.fallbacks;
    a.total_comparisons += b.total_comparisons;
    a.dominance_violations += b.dominance_violations;
    a.invalid_outputs += b.invalid_outputs;
    a.comparison_bound_violations += b.comparison_bound_violations;
    a.theorem1_checked += b.theorem1_checked;
    a.theorem1_witnessed += b.theorem1_witnessed;
    a.theorem2_checked += b.theorem2_checked;
    a.theorem2_witnessed += b.theorem2_witnessed;
    a.theorem2_right_failures += b.theorem2_right_failures;
  }
}

}  // namespace detail

/// Frames are split into contiguous blocks, one per worker; every frame draws
/// from its own noise and message streams, so results do not depend on the
/// worker count.
inline SimOutput run_monte_carlo(const CodeUnderTest& code, const SimConfig& cfg) {
  cfg.validate();
  SimOutput res;
  for (double ebn0 : cfg.ebn0_db) {
    auto blank = [&] {
      std::vector<SimResultRow> rows;
      for (const auto& d : cfg.decoders) {
        SimResultRow r;
        r.ebn0_db = ebn0;
        r.decoder = parse_decoder(d).name();
        rows.push_back(r);
      }
      return rows;
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, cfg.frames));
    std::vector<detail::PointTally> parts(workers);
    auto work = [&](unsigned wi) {
      auto& part = parts[wi];
      part.rows = blank();
      const std::uint64_t lo = cfg.frames * wi / workers, hi = cfg.frames * (wi + 1) / workers;
      for (std::uint64_t f = lo; f < hi; ++f) detail::tally_frame(code, cfg, ebn0, simulate_frame(code, cfg, ebn0, f), part);
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned wi = 0; wi < workers; ++wi) pool.emplace_back(work, wi);
      for (auto& th : pool) th.join();
    }
    auto rows = blank();
    for (const auto& p : parts) {
      detail::merge_rows(rows, p.rows);
      res.mismatches.insert(res.mismatches.end(), p.mismatches.begin(), p.mismatches.end());
    }
    const double bits = static_cast<double>(code.error_bits_per_frame());
    for (auto& r : rows) {
      r.ber = static_cast<double>(r.bit_errors) / (static_cast<double>(r.frames) * bits);
      r.fer = static_cast<double>(r.frame_errors) / static_cast<double>(r.frames);
      r.avg_comparisons = static_cast<double>(r.total_comparisons) / static_cast<double>(r.frames);
      res.rows.push_back(r);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kCsvHeader =
    "ebn0_db,decoder,frames,bit_errors,frame_errors,ber,fer,ml_mismatches,phase1_stops,fallbacks,avg_comparisons";

inline std::string format_g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Header line, then one line per row. Metadata lines, if any, go first as
/// "# ..." comments.
inline void emit_results(std::ostream& os, const std::vector<SimResultRow>& rows,
                         const std::vector<std::string>& metadata = {}) {
  for (const auto& m : metadata) os << "# " << m << '\n';
  os << kCsvHeader << '\n';
  for (const auto& r : rows)
    os << format_g6(r.ebn0_db) << ',' << r.decoder << ',' << r.frames << ',' << r.bit_errors << ',' << r.frame_errors
       << ',' << format_g6(r.ber) << ',' << format_g6(r.fer) << ',' << r.ml_mismatches << ',' << r.phase1_stops << ','
       << r.fallbacks << ',' << format_g6(r.avg_comparisons) << '\n';
}

inline std::vector<SimResultRow> parse_results(std::istream& in) {
  std::vector<SimResultRow> rows;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kCsvHeader) throw Error(ErrorCode::ParseError, "unexpected CSV header");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 11) throw Error(ErrorCode::ParseError, "expected 11 fields: " + line);
    SimResultRow r;
    try {
      r.ebn0_db = std::stod(f[0]);
      r.decoder = f[1];
      r.frames = std::stoull(f[2]);
      r.bit_errors = std::stoull(f[3]);
      r.frame_errors = std::stoull(f[4]);
      r.ber = std::stod(f[5]);
      r.fer = std::stod(f[6]);
      r.ml_mismatches = std::stoull(f[7]);
      r.phase1_stops = std::stoull(f[8]);
      r.fallbacks = std::stoull(f[9]);
      r.avg_comparisons = std::stod(f[10]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad CSV field in: " + line);
    }
    rows.push_back(r);
  }
  if (!header) throw Error(ErrorCode::ParseError, "missing CSV header");
  return rows;
}

// ---------------------------------------------------------------------------
// Single-frame replay

struct TraceResult {
  DecodeOutcome outcome;
  AuditReport audit;
};

inline void write_list_trace(std::ostream& os, const Trellis& t, const ListState& st) {
  for (std::size_t v = 0; v < t.num_vertices(); ++v)
    for (std::size_t q = 0; q < st.lists[v].size(); ++q) {
      const auto& c = st.lists[v][q];
      os << "phase=2 v=" << v << " slot=" << q << " metric=" << format_weight(c.metric) << " trellis=" << c.trellis
         << " dist=" << format_weight(c.dist) << " pred="
         << (c.pred_edge < 0 ? v : t.edge_from(static_cast<std::size_t>(c.pred_edge))) << " pred_slot=" << c.pred_slot
         << '\n';
    }
}

/// Replays one frame of run_monte_carlo through the two-phase decoder, writing
/// every round-one and round-two record plus the audit to trace.
inline TraceResult trace_frame(const CodeUnderTest& code, const SimConfig& cfg, double ebn0_db, std::uint64_t frame,
                               std::size_t list_size, std::ostream& trace) {
  SimConfig one = cfg;
  one.decoders = {"two-phase-L" + std::to_string(list_size)};
  const auto fr = simulate_frame(code, one, ebn0_db, frame);
  const auto& it = code.trellis();
  const auto w = edge_weights(it.trellis, fr.rv);
  const auto run = run_two_phase(it, w, DecodeOptions{list_size, cfg.participation_prune});
  write_trace(trace, it.trellis, run.p1, run.p2 ? &*run.p2 : nullptr);
  if (run.list) write_list_trace(trace, it.trellis, *run.list);
  TraceResult res{run.outcome, audit_decode_invariants(it, w, run, start_distances(it.trellis, w))};
  for (const auto& v : res.audit.violations)
    trace << "audit rule=" << v.rule << " v=" << v.vertex << " detail=" << v.detail << '\n';
  trace << "audit violations=" << res.audit.violations.size() << '\n';
  trace << "outcome stage=" << to_string(run.outcome.stage) << " subtrellis=" << run.outcome.subtrellis()
        << " weight=" << format_weight(run.outcome.weight) << " codeword=" << to_bit_string(run.outcome.codeword)
        << '\n';
  return res;
}

}  // namespace tbt
