/*
 * Copyright 2026 The mtskit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// mtskit command-line driver.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 parse or I/O error.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mtskit/block_io.hpp"
#include "mtskit/cost.hpp"
#include "mtskit/harness.hpp"
#include "mtskit/pipeline.hpp"
#include "mtskit/rom.hpp"

namespace {

using namespace mts;

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpecFlags {
  std::string type;
  std::string type_v;
  int size = 0;
  int bit_depth = 0;
  std::string dir = "both";
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f) {
  cmd->add_option("--tr-type,--type", f.type, "horizontal kind (dct2, dst7, dct8 or 0/1/2); default from the file");
  cmd->add_option("--tr-type-v", f.type_v, "vertical kind; defaults to --tr-type, or the file header");
  cmd->add_option("--tr-size,--size", f.size, "expected order in both directions (4..64)");
  cmd->add_option("--bit-depth", f.bit_depth, "8 or 10; default from the file");
}

std::optional<TransformKind> kind_flag(const std::string& s, const char* name) {
  if (s.empty()) return std::nullopt;
  auto k = parse_kind(s);
  if (!k) throw UsageError(std::string(name) + ": unknown transform kind '" + s + "'");
  return k;
}

// Flag-only checks, done before any input file is opened.
void precheck(const SpecFlags& f) {
  const auto kh = kind_flag(f.type, "--tr-type");
  const auto kv = kind_flag(f.type_v, "--tr-type-v");
  if (f.size != 0) {
    if (!is_valid_order(TransformKind::DCT2, f.size)) throw UsageError("--tr-size must be 4, 8, 16, 32 or 64");
    for (auto k : {kh, kv})
      if (k && !is_valid_order(*k, f.size))
        throw UsageError(std::string(to_string(*k)) + " is defined for orders 4 to 32 only");
  }
  if (f.bit_depth != 0 && f.bit_depth != 8 && f.bit_depth != 10) throw UsageError("--bit-depth must be 8 or 10");
  if (kh && kv && ((*kh == TransformKind::DCT2) != (*kv == TransformKind::DCT2)))
    throw UsageError("DCT2 in one direction requires DCT2 in the other");
}

TransformSpec resolve_spec(const SpecFlags& f, const BlockFile& file) {
  const auto kh = kind_flag(f.type, "--tr-type");
  const auto kv = kind_flag(f.type_v, "--tr-type-v");
  TransformSpec s;
  s.kind_h = kh.value_or(file.kind_h);
  s.kind_v = kv.value_or(kh.value_or(file.kind_v));
  s.size_h = file.block.width;
  s.size_v = file.block.height;
  s.bit_depth = f.bit_depth ? f.bit_depth : file.bit_depth;
  if (f.size != 0 && (f.size != s.size_h || f.size != s.size_v))
    throw UsageError("--tr-size " + std::to_string(f.size) + " does not match the " + std::to_string(s.size_h) +
                     "x" + std::to_string(s.size_v) + " input block");
  if (!s.is_legal()) throw UsageError("illegal transform spec " + s.label());
  return s;
}

BlockFormat format_flag(const std::string& s) { return s == "binary" ? BlockFormat::Binary : BlockFormat::Text; }

void write_text(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
  out << body;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

void print_block_summary(const Block& b, std::int64_t clips) {
  const auto [lo, hi] = std::minmax_element(b.samples.begin(), b.samples.end());
  std::cout << "min " << *lo << " max " << *hi << " clip-count " << clips << '\n';
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MTSKIT_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (end && *end == '\0' && end != env) return v;
    throw UsageError("MTSKIT_SEED is not an unsigned integer");
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mtskit: VVC multiple-transform-selection inverse transform engine model"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand all help");

  // transform
  SpecFlags tf;
  std::string tf_in, tf_out, tf_format = "text";
  bool tf_forward = false;
  auto* c_transform = app.add_subcommand("transform", "inverse (or forward) 2-D transform of a block file");
  c_transform->add_option("--in", tf_in, "input block file")->required();
  c_transform->add_option("--out", tf_out, "output block file")->required();
  c_transform->add_flag("--forward", tf_forward, "run the forward transform instead");
  c_transform->add_option("--format", tf_format, "output format")->check(CLI::IsMember({"text", "binary"}));
  add_spec_flags(c_transform, tf);

  // simulate
  SpecFlags sf;
  std::string sf_in, sf_out, sf_trace, sf_format = "text";
  auto* c_sim = app.add_subcommand("simulate", "run a block through the cycle-level engine");
  c_sim->add_option("--in", sf_in, "input coefficient block")->required();
  c_sim->add_option("--out", sf_out, "output block file");
  c_sim->add_option("--trace", sf_trace, "port trace CSV");
  c_sim->add_option("--format", sf_format, "output format")->check(CLI::IsMember({"text", "binary"}));
  c_sim->add_option("--tr-dir", sf.dir, "h (rows only), v (columns only) or both")
      ->check(CLI::IsMember({"h", "v", "both", "0", "1"}));
  add_spec_flags(c_sim, sf);

  // campaign
  std::optional<std::uint64_t> cp_seed;
  std::int64_t cp_count = 100000;
  int cp_blocks = 2;
  int cp_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string cp_summary, cp_golden;
  int cp_golden_count = 10;
  bool cp_fault = false;
  auto* c_camp = app.add_subcommand("campaign", "random self-check of the engine against the reference");
  c_camp->add_option("--seed", cp_seed, "PRNG seed (default $MTSKIT_SEED or 1)");
  c_camp->add_option("--count", cp_count, "vectors per separable stage")->check(CLI::NonNegativeNumber);
  c_camp->add_option("--blocks", cp_blocks, "2-D blocks per spec")->check(CLI::NonNegativeNumber);
  c_camp->add_option("--threads", cp_threads, "worker threads")->check(CLI::PositiveNumber);
  c_camp->add_option("--summary", cp_summary, "write the JSON summary here (default stdout)");
  c_camp->add_option("--golden", cp_golden, "also export golden vectors under this directory");
  c_camp->add_option("--golden-count", cp_golden_count, "golden vectors per spec")->check(CLI::NonNegativeNumber);
  c_camp->add_flag("--inject-fault", cp_fault, "flip one ROM coefficient first (harness self-test)");

  // rom
  std::string rom_out;
  auto* c_rom = app.add_subcommand("rom", "write the coefficient ROM image and its map");
  c_rom->add_option("--out", rom_out, "output directory")->required();

  // cost
  std::string cost_action = "report", cost_arch = "rm", cost_format = "text";
  auto* c_cost = app.add_subcommand("cost", "structural cost report");
  c_cost->add_option("action", cost_action, "report")->check(CLI::IsMember({"report"}));
  c_cost->add_option("--arch", cost_arch, "mcm or rm")->check(CLI::IsMember({"mcm", "rm"}));
  c_cost->add_option("--format", cost_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  // matrices
  std::string mx_kind = "dct2", mx_format = "text";
  int mx_size = 4;
  auto* c_mx = app.add_subcommand("matrices", "print an integer transform matrix");
  c_mx->add_option("--kind,--tr-type", mx_kind, "dct2, dst7 or dct8");
  c_mx->add_option("--size,--tr-size", mx_size, "order");
  c_mx->add_option("--format", mx_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*c_transform) {
      precheck(tf);
      const BlockFile file = read_block_file(tf_in);
      const TransformSpec spec = resolve_spec(tf, file);
      TransformStats stats;
      BlockFile out = file;
      out.bit_depth = spec.bit_depth;
      out.kind_h = spec.kind_h;
      out.kind_v = spec.kind_v;
      if (tf_forward) {
        file.block.validate();
        out.block = forward_2d(spec, file.block, &stats);
      } else {
        out.block = inverse_2d(spec, file.block, &stats);
      }
      write_block_file(out, tf_out, format_flag(tf_format));
      print_block_summary(out.block, stats.clip_count);
      return kExitOk;
    }

    if (*c_sim) {
      precheck(sf);
      const BlockFile file = read_block_file(sf_in);
      const TransformSpec spec = resolve_spec(sf, file);
      const bool keep = !sf_trace.empty();
      BlockFile out = file;
      out.bit_depth = spec.bit_depth;
      out.kind_h = spec.kind_h;
      out.kind_v = spec.kind_v;
      bool ok = true;
      std::vector<CycleReport> passes;
      PortTrace trace;
      if (sf.dir == "both") {
        Sim2dResult sim = simulate_2d(spec, file.block, keep);
        out.block = sim.block;
        ok = sim.block == inverse_2d(spec, file.block);
        passes = {sim.vertical, sim.horizontal};
        trace = std::move(sim.trace);
      } else {
        // One separable pass: columns for v, rows for h.
        const bool vert = sf.dir == "v" || sf.dir == "1";
        const Block full = expand_coefficients(spec, file.block);
        const TransformKind kind = vert ? spec.kind_v : spec.kind_h;
        const int n = vert ? spec.size_v : spec.size_h;
        const int vectors = vert ? spec.size_h : spec.size_v;
        const int keep_n = retained_count(kind, n);
        const int shift = vert ? kInverseShiftStage1 : spec.shift_stage2();
        std::vector<std::int32_t> stream;
        for (int v = 0; v < vectors; ++v)
          for (int i = 0; i < keep_n; ++i) stream.push_back(vert ? full.at(i, v) : full.at(v, i));
        BlockSimResult sim = simulate_block(spec, vert ? Direction::Vertical : Direction::Horizontal, stream, keep);
        out.block = Block::zeros(spec.size_h, spec.size_v, 16);
        for (int v = 0; v < vectors; ++v) {
          const std::span<const std::int32_t> in(stream.data() + v * keep_n, static_cast<std::size_t>(keep_n));
          const auto ref = inverse_1d_matrix(kind, n, in, shift);
          for (int i = 0; i < n; ++i) {
            const int got = sim.outputs[static_cast<std::size_t>(v * n + i)];
            (vert ? out.block.at(i, v) : out.block.at(v, i)) = got;
            ok = ok && got == ref[static_cast<std::size_t>(i)];
          }
        }
        passes = {sim.report};
        trace = std::move(sim.trace);
      }
      std::int64_t total = 0;
      for (std::size_t i = 0; i < passes.size(); ++i) {
        const auto& r = passes[i];
        const char* name = passes.size() == 2 ? (i == 0 ? "vertical" : "horizontal") : "pass";
        std::cout << name << ": output cycles " << r.output_cycles << ", latency " << r.latency_cycles
                  << ", total cycles " << r.total_cycles << ", throughput " << r.throughput_px_per_cycle()
                  << " px/cycle, input rate " << r.input_rate_px_per_cycle() << " px/cycle, peak multipliers "
                  << r.max_multiplications << '\n';
        total += r.total_cycles;
        ok = ok && r.output_samples == 2 * r.output_cycles && r.stall_free;
      }
      std::cout << "total cycles " << total << '\n';
      if (keep) write_text(sf_trace, trace.to_csv());
      if (!sf_out.empty()) write_block_file(out, sf_out, format_flag(sf_format));
      std::cout << (ok ? "match: engine output equals reference, 2 px/cycle" : "MISMATCH") << '\n';
      return ok ? kExitOk : kExitVerify;
    }

    if (*c_camp) {
      Campaign c;
      c.seed = cp_seed ? *cp_seed : default_seed();
      c.vector_count = cp_count;
      c.blocks_per_spec = cp_blocks;
      c.threads = cp_threads;
      c.specs = default_specs();
      RomImage rom = standard_rom();
      if (cp_fault) rom.words[0][0] = static_cast<std::int8_t>(rom.words[0][0] ^ 1);
      const auto t0 = std::chrono::steady_clock::now();
      c = run_selfcheck(std::move(c), rom);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const std::string json = campaign_summary_json(c);
      if (cp_summary.empty())
        std::cout << json;
      else
        write_text(cp_summary, json);
      std::cerr << "campaign: " << c.configs.size() << " stages x " << c.vector_count << " vectors, "
                << c.blocks_checked << " 2-D blocks, " << c.failure_count << " failures, " << secs << " s\n";
      if (!cp_golden.empty())
        for (const auto& s : c.specs) export_golden(s, cp_golden_count, cp_golden, c.seed);
      return c.passed() ? kExitOk : kExitVerify;
    }

    if (*c_rom) {
      const RomImage& rom = standard_rom();
      std::error_code ec;
      std::filesystem::create_directories(rom_out, ec);
      if (ec) throw std::runtime_error("cannot create " + rom_out + ": " + ec.message());
      write_rom_binary(rom, std::filesystem::path(rom_out) / "rom.bin");
      write_rom_map(rom, std::filesystem::path(rom_out) / "rom.map");
      const RomBudget b = rom_budget(rom);
      std::cout << "target " << b.target_bits << " bits (" << b.target_columns << " columns)\n"
                << "actual " << b.actual_bits << " bits (" << b.actual_columns << " columns, " << b.payload_bits
                << " payload)\n"
                << b.note << '\n';
      return kExitOk;
    }

    if (*c_cost) {
      const CostReport r = architecture_cost(cost_arch == "mcm" ? Architecture::MCM : Architecture::RM);
      std::cout << (cost_format == "json" ? cost_report_json(r) : cost_report_text(r));
      return kExitOk;
    }

    if (*c_mx) {
      const auto kind = parse_kind(mx_kind);
      if (!kind) throw UsageError("unknown transform kind '" + mx_kind + "'");
      if (!is_valid_order(*kind, mx_size))
        throw UsageError("invalid order " + std::to_string(mx_size) + " for " + std::string(to_string(*kind)));
      const CoeffMatrix& m = integer_matrix(*kind, mx_size);
      if (mx_format == "json") {
        nlohmann::ordered_json j;
        j["kind"] = std::string(to_string(*kind));
        j["n"] = mx_size;
        auto& rows = j["rows"] = nlohmann::ordered_json::array();
        for (int i = 0; i < mx_size; ++i) {
          auto r = m.row(i);
          rows.push_back(std::vector<int>(r.begin(), r.end()));
        }
        std::cout << j.dump(2) << '\n';
      } else {
        for (int i = 0; i < mx_size; ++i) {
          auto r = m.row(i);
          for (std::size_t k = 0; k < r.size(); ++k) std::cout << (k ? " " : "") << r[k];
          std::cout << '\n';
        }
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
