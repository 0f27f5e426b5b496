// Command-line driver for the tail-biting trellis decoders.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tbt/tbt.hpp"

namespace {

struct CodeSelector {
  std::string catalog;
  std::string gen_file;
  int memory = 0;
  std::string taps0, taps1;
  int circle = 0;

  void add_to(CLI::App& app) {
    app.add_option("--code", catalog, "Catalog code name");
    app.add_option("--gen-file", gen_file, "Generator file ('n k' then 'bits lo hi L|C' rows)");
    app.add_option("--memory", memory, "Convolutional code memory");
    app.add_option("--taps0", taps0, "First polynomial taps as a binary string, u_t coefficient first");
    app.add_option("--taps1", taps1, "Second polynomial taps");
    app.add_option("--circle", circle, "Number of trellis sections");
  }

  bool any() const { return !catalog.empty() || !gen_file.empty() || memory > 0; }

  tbt::CodeUnderTest resolve() const {
    const int chosen = (!catalog.empty() ? 1 : 0) + (!gen_file.empty() ? 1 : 0) + (memory > 0 ? 1 : 0);
    if (chosen != 1)
      throw tbt::Error(tbt::ErrorCode::InvalidArgument, "choose exactly one of --code, --gen-file, --memory");
    if (!catalog.empty()) return tbt::catalog_lookup(catalog);
    if (!gen_file.empty()) {
      std::ifstream in(gen_file);
      if (!in) throw tbt::Error(tbt::ErrorCode::Io, "cannot open " + gen_file);
      return {gen_file, tbt::parse_generator(in)};
    }
    tbt::ConvCodeSpec spec{memory, tbt::bits_from_string(taps0), tbt::bits_from_string(taps1), circle};
    tbt::validate_conv(spec);
    return {"conv-m" + std::to_string(memory) + "-" + taps0 + "-" + taps1 + "-L" + std::to_string(circle), spec};
  }
};

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(cell, &pos));
      if (pos != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw tbt::Error(tbt::ErrorCode::ParseError, "bad number '" + cell + "'");
    }
  }
  return out;
}

std::vector<std::string> parse_string_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ','))
    if (!cell.empty()) out.push_back(cell);
  return out;
}

/// Opens path for writing, or returns nullptr for "-"/empty (stdout).
std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  if (path.empty() || path == "-") return nullptr;
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*f) throw tbt::Error(tbt::ErrorCode::Io, "cannot write " + path);
  return f;
}

double rate_or_zero(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-round decoding on tail-biting trellises"};
  app.require_subcommand(1);

  CodeSelector code_sel;
  std::string ebn0 = "0,1,2,3,4,5,6";
  std::uint64_t frames = 100000;
  std::uint64_t seed = 1;
  std::string decoders = "two-phase-L1,two-phase-L2,exact-ml";
  std::size_t list_size = 1;
  bool no_prune = false;
  bool genie_zero = false;
  std::string out_path, trace_out, mismatch_log;
  unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  std::uint64_t frame_id = 0;

  auto* sim = app.add_subcommand("simulate", "Monte Carlo sweep over Eb/N0 points, CSV output");
  code_sel.add_to(*sim);
  sim->add_option("--ebn0", ebn0, "Comma-separated Eb/N0 values in dB");
  sim->add_option("--frames", frames, "Frames per point")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "Master seed");
  sim->add_option("--decoders", decoders, "Comma list of two-phase-L<N>, exact-ml, phase1-only");
  sim->add_flag("--no-participation-prune", no_prune, "Run round two for every subtrellis without a codeword");
  sim->add_flag("--genie-zero", genie_zero, "Transmit the all-zero codeword");
  sim->add_option("--out", out_path, "CSV path (stdout when omitted)");
  sim->add_option("--mismatch-log", mismatch_log, "Append one JSON record per decoder/ML mismatch");
  sim->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  auto* dec = app.add_subcommand("decode-frame", "Replay one frame with full trace and audit");
  code_sel.add_to(*dec);
  dec->add_option("--ebn0", ebn0, "Eb/N0 in dB (first value used)");
  dec->add_option("--frame", frame_id, "Frame id");
  dec->add_option("--seed", seed, "Master seed");
  dec->add_option("--list-size", list_size, "Candidates kept per vertex in round two")->check(CLI::PositiveNumber);
  dec->add_flag("--no-participation-prune", no_prune, "Run round two for every subtrellis without a codeword");
  dec->add_flag("--genie-zero", genie_zero, "Transmit the all-zero codeword");
  dec->add_option("--trace-out", trace_out, "Trace path (stdout when omitted)");

  auto* dump = app.add_subcommand("dump-trellis", "Write the pruned trellis as JSON");
  code_sel.add_to(*dump);
  dump->add_option("--out", out_path, "JSON path (stdout when omitted)");

  auto* lemmas = app.add_subcommand("check-lemmas", "Check the semi-codeword space against path labels");
  code_sel.add_to(*lemmas);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      const auto code = code_sel.resolve();
      tbt::SimConfig cfg;
      cfg.ebn0_db = parse_double_list(ebn0);
      cfg.frames = frames;
      cfg.seed = seed;
      cfg.decoders = parse_string_list(decoders);
      cfg.participation_prune = !no_prune;
      cfg.genie_zero = genie_zero;
      cfg.workers = workers;
      const auto res = tbt::run_monte_carlo(code, cfg);

      std::vector<std::string> meta{"code=" + code.name(), code.error_bits_description(),
                                    "seed=" + std::to_string(seed), "frames=" + std::to_string(frames)};
      if (genie_zero) meta.push_back("genie-zero");
      if (no_prune) meta.push_back("no-participation-prune");
      auto f = open_out(out_path);
      tbt::emit_results(f ? *f : std::cout, res.rows, meta);

      if (!mismatch_log.empty()) {
        std::ofstream log(mismatch_log, std::ios::app | std::ios::binary);
        if (!log) throw tbt::Error(tbt::ErrorCode::Io, "cannot write " + mismatch_log);
        for (const auto& m : res.mismatches) log << tbt::to_json(m).dump() << '\n';
      }
      for (const auto& r : res.rows) {
        if (r.decoder.rfind("two-phase", 0) != 0) continue;
        std::fprintf(stderr,
                     "%s @ %s dB: ml-mismatch rate %s, theorem1 witnesses %llu/%llu, theorem2 witnesses %llu/%llu, "
                     "dominance violations %llu, fallbacks %llu\n",
                     r.decoder.c_str(), tbt::format_g6(r.ebn0_db).c_str(),
                     tbt::format_g6(rate_or_zero(r.ml_mismatches, r.frames)).c_str(),
                     static_cast<unsigned long long>(r.theorem1_witnessed),
                     static_cast<unsigned long long>(r.theorem1_checked),
                     static_cast<unsigned long long>(r.theorem2_witnessed),
                     static_cast<unsigned long long>(r.theorem2_checked),
                     static_cast<unsigned long long>(r.dominance_violations),
                     static_cast<unsigned long long>(r.fallbacks));
      }
      return 0;
    }

    if (dec->parsed()) {
      const auto code = code_sel.resolve();
      tbt::SimConfig cfg;
      cfg.seed = seed;
      cfg.participation_prune = !no_prune;
      cfg.genie_zero = genie_zero;
      const auto points = parse_double_list(ebn0);
      if (points.empty()) throw tbt::Error(tbt::ErrorCode::InvalidArgument, "need an Eb/N0 value");
      auto f = open_out(trace_out);
      const auto res = tbt::trace_frame(code, cfg, points.front(), frame_id, list_size, f ? *f : std::cout);
      std::ostream& summary = f ? std::cout : std::cerr;
      summary << "frame=" << frame_id << " stage=" << tbt::to_string(res.outcome.stage)
              << " subtrellis=" << res.outcome.subtrellis() << " weight=" << tbt::format_weight(res.outcome.weight)
              << " comparisons=" << res.outcome.counters.comparisons
              << " audit_violations=" << res.audit.violations.size() << '\n';
      return res.audit.ok() ? 0 : 2;
    }

    if (dump->parsed()) {
      const auto code = code_sel.resolve();
      auto f = open_out(out_path);
      (f ? *f : std::cout) << tbt::trellis_to_json(code.trellis().trellis).dump() << '\n';
      return 0;
    }

    if (lemmas->parsed()) {
      std::vector<tbt::CodeUnderTest> codes;
      if (code_sel.any()) {
        codes.push_back(code_sel.resolve());
      } else {
        for (const auto& name : tbt::catalog_names()) {
          auto c = tbt::catalog_lookup(name);
          if (c.generator() && c.generator()->n <= tbt::kMaxLemma4Length) codes.push_back(std::move(c));
        }
      }
      bool all = true;
      for (const auto& c : codes) {
        if (!c.generator()) throw tbt::Error(tbt::ErrorCode::InvalidArgument, c.name() + " has no generator form");
        const auto rep = tbt::verify_lemma4(*c.generator(), c.trellis().trellis);
        std::cout << (rep.pass ? "PASS " : "FAIL ") << c.name() << " path_labels=" << rep.path_label_count
                  << " basis_span=" << rep.basis_span_count << '\n';
        all = all && rep.pass;
      }
      return all ? 0 : 1;
    }
  } catch (const tbt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
