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

// Cycle-level model of the 32-multiplier (RM) 1-D transform engine.
//
// Port protocol, one call to MtsCore::tick() per clock:
//   * input_enable high in cycle t starts one N-point vector with the tr_* fields
//     of that cycle. Its coefficients arrive on data_in in cycles t+1 .. t+N/2:
//     two per cycle (lane 0 = even index), or for the zeroed sizes (64-point
//     DCT2, 32-point DST7/DCT8) one per cycle with both lanes carrying it.
//     The next input_enable may coincide with the last data cycle.
//   * Loaded vectors enter the MAC array, which runs N/2 steps per vector. Each
//     step reads one ROM column and drives at most 32 multipliers.
//   * Output pair p of a vector whose first data cycle was d appears in cycle
//     d + kLatencyCycles + p, on data_out_inter for vertical passes (tr_dir 1)
//     and data_out_fin for horizontal ones (tr_dir 0). data_enable pulses with
//     the last pair of each vector.
// A result that would miss its output slot is a stall and raises StallError.

#ifndef MTSKIT_PIPELINE_HPP_
#define MTSKIT_PIPELINE_HPP_

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtskit/rom.hpp"
#include "mtskit/transform.hpp"

namespace mts {

inline constexpr int kMultipliers = 32;
inline constexpr int kPipelineDepth = 4;
inline constexpr int kLatencyCycles = 2048 + kPipelineDepth;

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class StallError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Direction { Horizontal = 0, Vertical = 1 };

/// Cycles for one full 1-D pass over an n x n block at 2 samples per cycle.
int block_cycles(int n);

int tr_size_code(int n);
int order_from_tr_size(int code);

/// One clock of the port interface. Samples are 16 bits wide.
struct PortState {
  bool rst_n = true;
  bool input_enable = false;
  bool avc_vvc = true;
  std::uint8_t tr_type = 0;
  std::uint8_t tr_size = 0;
  std::uint8_t tr_dir = 0;
  std::array<std::int16_t, 2> data_in{};
  bool data_enable = false;
  std::array<std::int16_t, 2> data_out_inter{};
  std::array<std::int16_t, 2> data_out_fin{};
};

/// Multiplier array activity in one cycle.
struct MacArrayState {
  std::array<std::int32_t, kMultipliers> mult_products{};
  std::uint32_t active_mask = 0;
  bool sel = false;
  int coeff_column = -1;  // absolute ROM word, -1 when idle
  std::array<std::int16_t, 2> lanes{};
  int multiplications() const;
};

struct CycleReport {
  std::int64_t total_cycles = 0;
  std::int64_t latency_cycles = 0;   // first data_in cycle to first output cycle
  std::int64_t input_cycles = 0;     // cycles carrying data_in
  std::int64_t output_cycles = 0;    // cycles carrying output pairs
  std::int64_t output_samples = 0;
  std::int64_t input_samples = 0;
  int max_multiplications = 0;       // per cycle, over the run
  std::int64_t max_abs_accumulator = 0;
  bool stall_free = true;

  double throughput_px_per_cycle() const {
    return output_cycles ? static_cast<double>(output_samples) / static_cast<double>(output_cycles) : 0.0;
  }
  double input_rate_px_per_cycle() const {
    return input_cycles ? static_cast<double>(input_samples) / static_cast<double>(input_cycles) : 0.0;
  }
};

struct PortTrace {
  std::vector<PortState> rows;
  static const char* csv_header();
  std::string to_csv() const;
};

/// One MAC cycle of a per-configuration schedule.
struct MacStep {
  int word = 0;               // absolute ROM word
  bool sel = true;            // false: both lanes carry in[0]
  std::array<int, 2> in{-1, -1};        // input index per lane, -1 when idle
  std::array<int, 2> slot_base{0, 16};  // first ROM slot per lane
  std::array<int, 2> len{0, 0};         // entries used per lane
  std::array<int, 2> acc_base{0, 0};    // first accumulator per lane
};

/// Post-processing recipe for one configuration.
struct MacSchedule {
  TransformKind kind = TransformKind::DCT2;
  int n = 0;
  int accumulators = 0;
  std::vector<MacStep> steps;
  // DCT2 only: accumulator offsets of the odd banks for orders n, n/2, ..., 8,
  // then E2 and O2 of the 4-point core.
  std::vector<std::pair<int, int>> odd_banks;  // (order, offset)
  int e2 = 0;
  int o2 = 0;
};

/// Builds the MAC schedule for (kind, n) against `rom`. DCT8 uses the DST7
/// segments.
MacSchedule build_schedule(const RomImage& rom, TransformKind kind, int n);

class MtsCore {
 public:
  explicit MtsCore(const RomImage& rom = standard_rom(), int bit_depth = 8);

  /// Advances one clock. Reads the input fields of `io`, writes its outputs.
  void tick(PortState& io);

  std::int64_t cycle() const { return cycle_; }
  bool idle() const;
  /// Debug probe, not a port: whether the last tick drove an output pair.
  bool output_valid() const { return out_valid_; }
  int max_multiplications() const { return max_mults_; }
  std::int64_t max_abs_accumulator() const { return max_acc_; }
  void set_observer(std::function<void(std::int64_t, const MacArrayState&)> f) { observer_ = std::move(f); }

 private:
  struct Config {
    TransformKind kind;
    int n;
    Direction dir;
  };
  struct Job {
    Config cfg;
    std::vector<std::int32_t> in;
    std::int64_t first_data_cycle = 0;
    std::int64_t start_cycle = 0;
    std::size_t step = 0;
    std::vector<std::int64_t> acc;
  };
  struct OutPair {
    std::array<std::int16_t, 2> v{};
    Direction dir = Direction::Horizontal;
    bool last = false;
  };

  const MacSchedule& schedule(TransformKind kind, int n) const;
  void finish_job(Job& job);

  const RomImage* rom_;
  int bit_depth_;
  std::map<std::pair<int, int>, MacSchedule> schedules_;
  std::int64_t cycle_ = 0;
  std::optional<Job> loading_;
  int load_cycles_left_ = 0;
  std::deque<Job> mac_queue_;
  std::map<std::int64_t, OutPair> delay_line_;
  bool out_valid_ = false;
  int max_mults_ = 0;
  std::int64_t max_acc_ = 0;
  std::function<void(std::int64_t, const MacArrayState&)> observer_;
};

struct BlockSimResult {
  std::vector<std::int32_t> outputs;  // vectors concatenated, n samples each
  PortTrace trace;
  CycleReport report;
};

/// Streams `coeff_stream` (vectors of retained_count samples each, for the
/// kind and order of `direction`) through a fresh core. Vertical passes use
/// shift 7, horizontal ones 20 - bit_depth.
BlockSimResult simulate_block(const TransformSpec& spec, Direction direction,
                              std::span<const std::int32_t> coeff_stream, bool keep_trace = true,
                              const RomImage& rom = standard_rom());

struct Sim2dResult {
  Block block;
  CycleReport vertical;
  CycleReport horizontal;
  CycleReport total;
  std::int64_t transpose_peak_words = 0;  // 16-bit words held between passes
  PortTrace trace;                        // vertical pass rows, then horizontal
};

/// Folded 2-D inverse: vertical pass over all columns, transpose memory,
/// horizontal pass over all rows.
Sim2dResult simulate_2d(const TransformSpec& spec, const Block& coeffs, bool keep_trace = true,
                        const RomImage& rom = standard_rom());

}  // namespace mts

#endif  // MTSKIT_PIPELINE_HPP_
