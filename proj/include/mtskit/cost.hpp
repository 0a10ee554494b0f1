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

// Structural cost model: adder/multiplier/ROM counts for the multiplierless
// (MCM) and regular-multiplier (RM) datapaths, and a frame-rate estimate.
//
// The MCM adder graphs come from a CSD heuristic, not an optimal search, so
// every MCM adder count is an upper bound.

#ifndef MTSKIT_COST_HPP_
#define MTSKIT_COST_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace mts {

/// Shift-and-add network fed by the input x (node 0 holds the constant 1).
/// Every other node is value = (a << shift_a) +/- (b << shift_b).
struct AdderNode {
  int value = 1;
  int a = 0;
  int shift_a = 0;
  int b = 0;
  int shift_b = 0;
  bool subtract = false;
};

struct AdderGraph {
  std::set<int> target_constants;  // as requested (signed, unreduced)
  std::vector<AdderNode> nodes;    // nodes[0] is the input
  int adder_count = 0;
  int max_shift = 0;

  /// Recomputes node values from input 1 using only the stored operations.
  std::vector<std::int64_t> evaluate() const;
  /// True when c (after dropping sign and factors of two) is a node value.
  bool realizes(int c) const;
};

/// Odd part of |c|; 0 stays 0.
int odd_reduce(int c);

/// Canonical signed digits of c, least significant first, each in {-1, 0, 1}.
std::vector<int> csd_digits(int c);

/// CSD chain per constant, shared across constants wherever partial sums
/// coincide. The adder count never decreases when constants are added.
/// Throws DomainError for 0 or |c| >= 256.
AdderGraph mcm_adder_graph(const std::set<int>& constants);

enum class Architecture { MCM, RM };

struct CostReport {
  Architecture architecture = Architecture::RM;
  int adders = 0;
  int constant_adders = 0;    // MCM shift-add networks
  int accumulate_adders = 0;
  int butterfly_adders = 0;
  int multipliers = 0;
  int rom_bits = 0;           // bits of the canonical ROM layout
  int rom_bits_target = 0;    // 68 x 256 reference budget
  int rom_columns = 0;
  int mcm_rows = 0;           // MCM: coefficient rows, one constant network each
  double adder_ratio_mcm_over_rm = 0.0;
  double fps_4k = 0.0;             // 600 MHz, 2160p, 4:2:0, folded 2-D
  double fps_reported_alt = 30.0;  // the design's 3840x2160p30 operating point
  std::vector<std::string> notes;
};

CostReport architecture_cost(Architecture arch);

/// fps = 2 * clock_hz / (width * height * chroma_factor * passes).
double fps_estimate(double clock_hz, double width, double height, double chroma_factor, int passes);

std::string to_string(Architecture arch);
std::string cost_report_json(const CostReport& r);
std::string cost_report_text(const CostReport& r);

}  // namespace mts

#endif  // MTSKIT_COST_HPP_
