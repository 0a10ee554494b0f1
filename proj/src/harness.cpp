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

#include "mtskit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace mts {

namespace {

constexpr std::int64_t kChunkVectors = 4096;

__extension__ typedef unsigned __int128 u128;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// A legal spec and direction that make the engine run `cfg`.
std::pair<TransformSpec, Direction> carrier(const Config1d& cfg) {
  TransformSpec s{cfg.kind, cfg.kind, cfg.n, cfg.n, 8};
  if (cfg.shift == kInverseShiftStage1) return {s, Direction::Vertical};
  s.bit_depth = 20 - cfg.shift;
  s.validate();
  return {s, Direction::Horizontal};
}

struct ItemResult {
  std::vector<Failure> log;
  std::int64_t failures = 0;
  std::int64_t vectors = 0;
  std::int64_t blocks = 0;
  ConfigResult cfg;
};

ItemResult run_config(const Campaign& c, const Config1d& cfg, const RomImage& rom) {
  ItemResult out;
  out.cfg.config = cfg;
  const auto [spec, dir] = carrier(cfg);
  const int retained = retained_count(cfg.kind, cfg.n);
  const std::uint64_t key = (static_cast<std::uint64_t>(cfg.kind) << 16) |
                            (static_cast<std::uint64_t>(cfg.n) << 8) | static_cast<std::uint64_t>(cfg.shift);
  SplitMix64 rng = SplitMix64::substream(c.seed, key);
  std::vector<std::int32_t> stream;
  std::vector<std::int32_t> expect(static_cast<std::size_t>(cfg.n));
  for (std::int64_t done = 0; done < c.vector_count;) {
    const std::int64_t chunk = std::min(kChunkVectors, c.vector_count - done);
    stream.resize(static_cast<std::size_t>(chunk * retained));
    for (auto& v : stream) v = static_cast<std::int32_t>(rng.uniform(kCoeffMin, kCoeffMax));
    const BlockSimResult sim = simulate_block(spec, dir, stream, false, rom);
    out.cfg.max_multiplications = std::max(out.cfg.max_multiplications, sim.report.max_multiplications);
    out.cfg.latency_cycles = sim.report.latency_cycles;
    if (sim.report.output_samples != 2 * sim.report.output_cycles || !sim.report.stall_free)
      out.cfg.throughput_exact = false;
    for (std::int64_t v = 0; v < chunk; ++v) {
      const std::span<const std::int32_t> in(stream.data() + v * retained, static_cast<std::size_t>(retained));
      inverse_1d_matrix(cfg.kind, cfg.n, in, cfg.shift, expect);
      const auto* got = sim.outputs.data() + v * cfg.n;
      if (!std::equal(expect.begin(), expect.end(), got)) {
        ++out.failures;
        if (out.log.size() < c.max_logged)
          out.log.push_back({cfg.label(), done + v, expect, std::vector<std::int32_t>(got, got + cfg.n)});
      }
    }
    done += chunk;
    out.vectors += chunk;
  }
  out.cfg.vectors = out.vectors;
  out.cfg.failures = out.failures;
  return out;
}

ItemResult run_spec_blocks(const Campaign& c, const TransformSpec& spec, const RomImage& rom) {
  ItemResult out;
  SplitMix64 rng = SplitMix64::substream(c.seed, fnv1a(spec.label()));
  for (int b = 0; b < c.blocks_per_spec; ++b) {
    const Block coeffs = random_coefficients(spec, rng);
    const Sim2dResult sim = simulate_2d(spec, coeffs, false, rom);
    const Block ref = inverse_2d(spec, coeffs);
    ++out.blocks;
    if (!(sim.block == ref)) {
      ++out.failures;
      if (out.log.size() < c.max_logged) out.log.push_back({spec.label(), b, ref.samples, sim.block.samples});
    }
  }
  return out;
}

}  // namespace

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

std::uint64_t SplitMix64::bounded(std::uint64_t bound) {
  if (bound == 0) throw DomainError("bounded() needs a positive bound");
  u128 m = static_cast<u128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::int64_t SplitMix64::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw DomainError("uniform() needs lo <= hi");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(bounded(span));
}

SplitMix64 SplitMix64::substream(std::uint64_t seed, std::uint64_t key) {
  return SplitMix64(mix64(seed ^ mix64(key + 0x632be59bd9b4e019ULL)));
}

std::string Config1d::label() const {
  return std::string(to_string(kind)) + "-" + std::to_string(n) + " shift " + std::to_string(shift);
}

std::vector<TransformSpec> default_specs() {
  auto specs = all_legal_specs(8);
  auto ten = all_legal_specs(10);
  specs.insert(specs.end(), ten.begin(), ten.end());
  return specs;
}

std::vector<Config1d> distinct_configs(const std::vector<TransformSpec>& specs) {
  std::vector<Config1d> out;
  auto add = [&](Config1d c) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  for (const auto& s : specs) {
    s.validate();
    add({s.kind_v, s.size_v, kInverseShiftStage1});
    add({s.kind_h, s.size_h, s.shift_stage2()});
  }
  return out;
}

Block random_coefficients(const TransformSpec& spec, SplitMix64& rng) {
  spec.validate();
  Block b = Block::zeros(spec.size_h, spec.size_v, 16);
  const int rw = retained_count(spec.kind_h, spec.size_h);
  const int rh = retained_count(spec.kind_v, spec.size_v);
  for (int r = 0; r < rh; ++r)
    for (int c = 0; c < rw; ++c) b.at(r, c) = static_cast<std::int32_t>(rng.uniform(kCoeffMin, kCoeffMax));
  return b;
}

Campaign run_selfcheck(Campaign c, const RomImage& rom) {
  c.failure_log.clear();
  c.failure_count = 0;
  c.configs.clear();
  c.vectors_checked = 0;
  c.blocks_checked = 0;
  if (c.vector_count <= 0) return c;  // vacuous

  const auto configs = distinct_configs(c.specs);
  const std::size_t items = configs.size() + (c.blocks_per_spec > 0 ? c.specs.size() : 0);
  std::vector<ItemResult> results(items);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(items);
  auto worker = [&] {
    for (std::size_t i = next++; i < items; i = next++) {
      try {
        results[i] = i < configs.size() ? run_config(c, configs[i], rom)
                                        : run_spec_blocks(c, c.specs[i - configs.size()], rom);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, c.threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t i = 0; i < items; ++i) {
    auto& r = results[i];
    if (i < configs.size()) c.configs.push_back(r.cfg);
    c.failure_count += r.failures;
    c.vectors_checked += r.vectors;
    c.blocks_checked += r.blocks;
    for (auto& f : r.log)
      if (c.failure_log.size() < c.max_logged) c.failure_log.push_back(std::move(f));
  }
  return c;
}

std::string campaign_summary_json(const Campaign& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["vector_count"] = c.vector_count;
  j["blocks_per_spec"] = c.blocks_per_spec;
  j["spec_count"] = c.specs.size();
  j["vectors_checked"] = c.vectors_checked;
  j["blocks_checked"] = c.blocks_checked;
  j["failure_count"] = c.failure_count;
  j["passed"] = c.passed();
  auto& cfgs = j["configs"] = nlohmann::ordered_json::array();
  for (const auto& r : c.configs) {
    cfgs.push_back({{"kind", std::string(to_string(r.config.kind))},
                    {"n", r.config.n},
                    {"shift", r.config.shift},
                    {"vectors", r.vectors},
                    {"failures", r.failures},
                    {"max_multiplications", r.max_multiplications},
                    {"latency_cycles", r.latency_cycles},
                    {"throughput_exact", r.throughput_exact}});
  }
  auto& fl = j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : c.failure_log)
    fl.push_back({{"where", f.where}, {"index", f.index}, {"expected", f.expected}, {"actual", f.actual}});
  return j.dump(2) + "\n";
}

std::filesystem::path golden_dir(const TransformSpec& spec, const std::filesystem::path& root) {
  return root / (lower(to_string(spec.kind_h)) + "-" + lower(to_string(spec.kind_v))) /
         (std::to_string(spec.size_h) + "x" + std::to_string(spec.size_v) + "-bd" + std::to_string(spec.bit_depth));
}

std::filesystem::path export_golden(const TransformSpec& spec, int vectors, const std::filesystem::path& dir,
                                    std::uint64_t seed) {
  spec.validate();
  if (vectors < 0) throw DomainError("vector count must be non-negative");
  const auto out_dir = golden_dir(spec, dir);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
  std::ofstream manifest(out_dir / "manifest.txt");
  if (!manifest) throw std::runtime_error("cannot write " + (out_dir / "manifest.txt").string());
  manifest << "# mtskit golden " << spec.label() << " vectors " << vectors << " seed " << seed << '\n';
  SplitMix64 rng = SplitMix64::substream(seed, fnv1a(spec.label()));
  for (int i = 0; i < vectors; ++i) {
    BlockFile in{random_coefficients(spec, rng), spec.bit_depth, spec.kind_h, spec.kind_v};
    BlockFile out{inverse_2d(spec, in.block), spec.bit_depth, spec.kind_h, spec.kind_v};
    const std::string stem = "vec" + std::to_string(i);
    write_block_file(in, out_dir / (stem + ".in"), BlockFormat::Text);
    write_block_file(out, out_dir / (stem + ".out"), BlockFormat::Text);
    manifest << stem << ".in " << stem << ".out\n";
  }
  if (!manifest) throw std::runtime_error("write failed for " + (out_dir / "manifest.txt").string());
  return out_dir;
}

std::vector<GoldenPair> import_golden(const std::filesystem::path& spec_dir) {
  std::ifstream manifest(spec_dir / "manifest.txt");
  if (!manifest) throw std::runtime_error("cannot open " + (spec_dir / "manifest.txt").string());
  std::vector<GoldenPair> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(manifest, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a >> b)) throw ParseError("manifest entry needs an input and an output file", lineno);
    pairs.push_back({spec_dir / a, read_block_file(spec_dir / a), read_block_file(spec_dir / b)});
  }
  return pairs;
}

}  // namespace mts
