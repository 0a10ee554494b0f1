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

// Verification campaigns: seeded random vectors through the simulator and the
// reference transforms, plus golden-vector export/import.

#ifndef MTSKIT_HARNESS_HPP_
#define MTSKIT_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mtskit/block_io.hpp"
#include "mtskit/pipeline.hpp"
#include "mtskit/transform.hpp"

namespace mts {

/// SplitMix64. Stateless per step apart from a 64-bit counter, so results
/// match on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, bound) via Lemire's multiply-shift with rejection.
  std::uint64_t bounded(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  /// Independent generator for a labelled substream.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t key);

 private:
  std::uint64_t state_;
};

/// One separable stage the engine can be asked to run.
struct Config1d {
  TransformKind kind = TransformKind::DCT2;
  int n = 4;
  int shift = 7;
  std::string label() const;
  bool operator==(const Config1d&) const = default;
};

struct Failure {
  std::string where;   // config or spec label
  std::int64_t index = 0;
  std::vector<std::int32_t> expected;
  std::vector<std::int32_t> actual;
};

struct ConfigResult {
  Config1d config;
  std::int64_t vectors = 0;
  std::int64_t failures = 0;
  int max_multiplications = 0;
  std::int64_t latency_cycles = 0;
  bool throughput_exact = true;  // 2 samples per output cycle
};

struct Campaign {
  std::uint64_t seed = 1;
  std::int64_t vector_count = 100000;
  std::vector<TransformSpec> specs;
  int blocks_per_spec = 2;     // 2-D simulate_2d checks per spec
  int threads = 1;
  std::size_t max_logged = 64; // failure_log cap; failure_count stays exact

  // Results.
  std::vector<Failure> failure_log;
  std::int64_t failure_count = 0;
  std::vector<ConfigResult> configs;
  std::int64_t vectors_checked = 0;
  std::int64_t blocks_checked = 0;
  bool passed() const { return failure_count == 0; }
};

/// Every legal spec at bit depths 8 and 10.
std::vector<TransformSpec> default_specs();

/// Distinct separable stages used by `specs`, in first-use order.
std::vector<Config1d> distinct_configs(const std::vector<TransformSpec>& specs);

/// Runs the campaign against the given ROM (the standard one by default;
/// pass a modified copy for fault injection).
Campaign run_selfcheck(Campaign c, const RomImage& rom = standard_rom());

std::string campaign_summary_json(const Campaign& c);

/// Random coefficient block over the retained region of `spec`, full size.
Block random_coefficients(const TransformSpec& spec, SplitMix64& rng);

/// Writes <dir>/<kh>-<kv>/<W>x<H>-bd<B>/vec<i>.in and .out plus manifest.txt.
/// Returns the directory written.
std::filesystem::path export_golden(const TransformSpec& spec, int vectors, const std::filesystem::path& dir,
                                    std::uint64_t seed);

struct GoldenPair {
  std::filesystem::path input;
  BlockFile in;
  BlockFile out;
};

/// Reads every pair listed in `<spec dir>/manifest.txt`.
std::vector<GoldenPair> import_golden(const std::filesystem::path& spec_dir);

std::filesystem::path golden_dir(const TransformSpec& spec, const std::filesystem::path& root);

}  // namespace mts

#endif  // MTSKIT_HARNESS_HPP_
