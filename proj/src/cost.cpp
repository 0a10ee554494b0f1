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

#include "mtskit/cost.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

#include "json.hpp"

#include "mtskit/coeff.hpp"
#include "mtskit/pipeline.hpp"
#include "mtskit/rom.hpp"

namespace mts {

namespace {

constexpr int kButterflyAdders = 4 + 8 + 16 + 32 + 64;  // combine stages of the unified DCT2
constexpr int kRmAccumulateAdders = kMultipliers;       // one feedback adder per product

struct Part {
  std::string name;
  std::vector<std::vector<std::int16_t>> rows;  // one row per input sample
  int outputs = 0;
  int accumulate_adders = 0;
};

// Constant blocks of the multiplierless datapath: the unified DCT2 parts and
// one DST7 module per order.
std::vector<Part> mcm_parts() {
  std::vector<Part> parts;
  for (int n : kAllOrders) {
    Part p;
    p.name = "DCT2-" + std::to_string(n);
    p.rows = segment_rows(integer_matrix(TransformKind::DCT2, n));
    p.outputs = static_cast<int>(p.rows.front().size());
    const int r = static_cast<int>(p.rows.size());
    // The 4-point core holds two 2-row banks (E2 and O2).
    p.accumulate_adders = n == 4 ? 2 * p.outputs * (r / 2 - 1) : p.outputs * (r - 1);
    parts.push_back(std::move(p));
  }
  for (int n : {4, 8, 16, 32}) {
    Part p;
    p.name = "DST7-" + std::to_string(n);
    p.rows = segment_rows(integer_matrix(TransformKind::DST7, n));
    p.outputs = n;
    p.accumulate_adders = p.outputs * (static_cast<int>(p.rows.size()) - 1);
    parts.push_back(std::move(p));
  }
  return parts;
}

CostReport mcm_cost() {
  CostReport r;
  r.architecture = Architecture::MCM;
  for (const auto& part : mcm_parts()) {
    for (const auto& row : part.rows) {
      std::set<int> cs;
      for (auto v : row)
        if (v != 0) cs.insert(v);
      r.constant_adders += mcm_adder_graph(cs).adder_count;
      ++r.mcm_rows;
    }
    r.accumulate_adders += part.accumulate_adders;
  }
  r.butterfly_adders = kButterflyAdders;
  r.adders = r.constant_adders + r.accumulate_adders + r.butterfly_adders;
  r.notes.push_back("constant-network adders come from a CSD heuristic and are an upper bound");
  r.notes.push_back("DCT8 shares the DST7 modules through input sign flips and output reversal");
  return r;
}

CostReport rm_cost() {
  CostReport r;
  r.architecture = Architecture::RM;
  r.multipliers = kMultipliers;
  r.accumulate_adders = kRmAccumulateAdders;
  r.butterfly_adders = kButterflyAdders;
  r.adders = r.accumulate_adders + r.butterfly_adders;
  const RomBudget b = rom_budget(standard_rom());
  r.rom_bits = b.actual_bits;
  r.rom_columns = b.actual_columns;
  r.rom_bits_target = b.target_bits;
  r.notes.push_back(b.note);
  return r;
}

}  // namespace

std::vector<std::int64_t> AdderGraph::evaluate() const {
  std::vector<std::int64_t> v(nodes.size(), 0);
  if (nodes.empty()) return v;
  v[0] = 1;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const auto& nd = nodes[i];
    const std::int64_t a = v[static_cast<std::size_t>(nd.a)] << nd.shift_a;
    const std::int64_t b = v[static_cast<std::size_t>(nd.b)] << nd.shift_b;
    v[i] = nd.subtract ? a - b : a + b;
  }
  return v;
}

bool AdderGraph::realizes(int c) const {
  const int t = odd_reduce(c);
  if (t == 0) return false;
  const auto v = evaluate();
  if (t == 1) return true;
  return std::find(v.begin(), v.end(), t) != v.end();
}

int odd_reduce(int c) {
  int t = std::abs(c);
  if (t == 0) return 0;
  while (t % 2 == 0) t /= 2;
  return t;
}

std::vector<int> csd_digits(int c) {
  std::vector<int> d;
  int x = c;
  while (x != 0) {
    if (x % 2 == 0) {
      d.push_back(0);
    } else {
      // Pick the digit that leaves a multiple of 4.
      const int digit = ((x % 4) + 4) % 4 == 1 ? 1 : -1;
      d.push_back(digit);
      x -= digit;
    }
    x /= 2;
  }
  return d;
}

AdderGraph mcm_adder_graph(const std::set<int>& constants) {
  AdderGraph g;
  g.target_constants = constants;
  if (constants.empty()) return g;
  g.nodes.push_back({});  // input
  std::map<int, int> index{{1, 0}};
  for (int c : constants) {
    if (c == 0 || std::abs(c) >= 256) throw DomainError("constants must be nonzero with magnitude below 256");
    const auto digits = csd_digits(odd_reduce(c));
    // Walk the nonzero digits from the most significant one.
    int prev = 0;
    int prev_pos = static_cast<int>(digits.size()) - 1;
    int value = 1;
    for (int pos = prev_pos - 1; pos >= 0; --pos) {
      const int d = digits[static_cast<std::size_t>(pos)];
      if (d == 0) continue;
      const int shift = prev_pos - pos;
      value = (value << shift) + d;
      auto it = index.find(value);
      if (it == index.end()) {
        AdderNode nd;
        nd.value = value;
        nd.a = prev;
        nd.shift_a = shift;
        nd.b = 0;
        nd.subtract = d < 0;
        g.nodes.push_back(nd);
        g.max_shift = std::max(g.max_shift, shift);
        it = index.emplace(value, static_cast<int>(g.nodes.size()) - 1).first;
      }
      prev = it->second;
      prev_pos = pos;
    }
  }
  g.adder_count = static_cast<int>(g.nodes.size()) - 1;
  return g;
}

double fps_estimate(double clock_hz, double width, double height, double chroma_factor, int passes) {
  if (!(clock_hz > 0) || !(width > 0) || !(height > 0) || !(chroma_factor > 0) || passes <= 0)
    throw DomainError("fps_estimate needs positive clock, dimensions, chroma factor and passes");
  return 2.0 * clock_hz / (width * height * chroma_factor * passes);
}

CostReport architecture_cost(Architecture arch) {
  CostReport mcm = mcm_cost();
  CostReport rm = rm_cost();
  CostReport r = arch == Architecture::MCM ? mcm : rm;
  r.adder_ratio_mcm_over_rm = static_cast<double>(mcm.adders) / static_cast<double>(rm.adders);
  r.fps_4k = fps_estimate(600e6, 3840, 2160, 1.5, 2);
  r.fps_reported_alt = 30.0;
  r.notes.push_back("fps assumes 2 px/cycle at 600 MHz, 4:2:0 chroma and two folded passes; "
                    "the 3840x2160p30 operating point is listed alongside");
  r.notes.push_back("structural counts only; no gate-level translation");
  return r;
}

std::string to_string(Architecture arch) { return arch == Architecture::MCM ? "mcm" : "rm"; }

std::string cost_report_json(const CostReport& r) {
  nlohmann::ordered_json j;
  j["architecture"] = to_string(r.architecture);
  j["adders"] = r.adders;
  j["constant_adders"] = r.constant_adders;
  j["accumulate_adders"] = r.accumulate_adders;
  j["butterfly_adders"] = r.butterfly_adders;
  j["multipliers"] = r.multipliers;
  j["rom_bits"] = r.rom_bits;
  j["rom_bits_target"] = r.rom_bits_target;
  j["rom_columns"] = r.rom_columns;
  j["mcm_rows"] = r.mcm_rows;
  j["adder_ratio_mcm_over_rm"] = r.adder_ratio_mcm_over_rm;
  j["fps_4k"] = r.fps_4k;
  j["fps_reported_alt"] = r.fps_reported_alt;
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

std::string cost_report_text(const CostReport& r) {
  std::ostringstream os;
  os << "architecture        " << to_string(r.architecture) << '\n'
     << "adders              " << r.adders << " (constant " << r.constant_adders << ", accumulate "
     << r.accumulate_adders << ", butterfly " << r.butterfly_adders << ")\n"
     << "multipliers         " << r.multipliers << '\n'
     << "rom bits            " << r.rom_bits << " (target " << r.rom_bits_target << ")\n";
  if (r.architecture == Architecture::MCM) os << "coefficient rows    " << r.mcm_rows << '\n';
  os.setf(std::ios::fixed);
  os.precision(3);
  os << "adder ratio mcm/rm  " << r.adder_ratio_mcm_over_rm << '\n'
     << "fps 3840x2160       " << r.fps_4k << " estimated, " << r.fps_reported_alt << " listed\n";
  for (const auto& n : r.notes) os << "note: " << n << '\n';
  return os.str();
}

}  // namespace mts
