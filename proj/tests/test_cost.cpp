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

#include <gtest/gtest.h>

#include "json.hpp"
#include "mtskit/coeff.hpp"
#include "mtskit/cost.hpp"
#include "oracles.hpp"

using namespace mts;

TEST(Cost, TrivialConstantsNeedNoAdders) {
  EXPECT_EQ(mcm_adder_graph({64}).adder_count, 0);
  EXPECT_EQ(mcm_adder_graph({1, 2, 4, 128, -32}).adder_count, 0);
  EXPECT_EQ(mcm_adder_graph({}).adder_count, 0);
  EXPECT_THROW(mcm_adder_graph({0}), DomainError);
  EXPECT_THROW(mcm_adder_graph({256}), DomainError);
  EXPECT_THROW(mcm_adder_graph({-300}), DomainError);
}

TEST(Cost, SmallSetsAgainstExhaustiveOptimum) {
  // The oracle finds 83 = 3, {83, 9} = 3, 45 = 2.
  EXPECT_EQ(oracle::optimal_adders({83}), 3);
  EXPECT_EQ(oracle::optimal_adders({83, 9}), 3);
  EXPECT_EQ(oracle::optimal_adders({45}), 2);
  EXPECT_EQ(mcm_adder_graph({83}).adder_count, 3);
  EXPECT_LE(mcm_adder_graph({83, 36}).adder_count, 4);
  for (const std::set<int>& s : {std::set<int>{83}, std::set<int>{83, 9}, std::set<int>{45},
                                 std::set<int>{29, 55, 74, 84}, std::set<int>{83, 36}, std::set<int>{7, 9}})
    EXPECT_GE(mcm_adder_graph(s).adder_count, oracle::optimal_adders(s)) << *s.begin();
}

TEST(Cost, CsdDigitsForAllBytes) {
  for (int c = -255; c <= 255; ++c) {
    const auto d = csd_digits(c);
    long long v = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      ASSERT_TRUE(d[i] >= -1 && d[i] <= 1);
      v += static_cast<long long>(d[i]) << i;
      if (i > 0) {
        ASSERT_FALSE(d[i] != 0 && d[i - 1] != 0) << c;  // no adjacent nonzeros
      }
    }
    ASSERT_EQ(v, c);
  }
  EXPECT_EQ(odd_reduce(-84), 21);
  EXPECT_EQ(odd_reduce(0), 0);
}

TEST(Cost, GraphsRealizeEveryMatrixRow) {
  for (auto k : kAllKinds)
    for (int n : kAllOrders) {
      if (!is_valid_order(k, n)) continue;
      const auto& m = integer_matrix(k, n);
      for (int i = 0; i < n; ++i) {
        std::set<int> row;
        for (int j = 0; j < n; ++j)
          if (m.at(i, j)) row.insert(m.at(i, j));
        const AdderGraph g = mcm_adder_graph(row);
        const auto vals = g.evaluate();
        ASSERT_EQ(vals.size(), g.nodes.size());
        for (std::size_t x = 0; x < vals.size(); ++x) ASSERT_EQ(vals[x], g.nodes[x].value);
        for (int c : row) ASSERT_TRUE(g.realizes(c)) << c;
        ASSERT_EQ(g.adder_count, static_cast<int>(g.nodes.size()) - 1);
      }
    }
}

TEST(Cost, AdderCountMonotoneUnderUnion) {
  const std::vector<int> pool = {83, 36, 89, 75, 50, 18, 29, 55, 74, 84, 90, 87, 80, 70, 57, 43, 25, 9};
  std::set<int> acc;
  int prev = 0;
  for (int c : pool) {
    acc.insert(c);
    const int now = mcm_adder_graph(acc).adder_count;
    EXPECT_GE(now, prev);
    prev = now;
  }
}

// Regression values frozen from the first run.
TEST(Cost, ArchitectureFiguresFrozen) {
  const CostReport mcm = architecture_cost(Architecture::MCM);
  const CostReport rm = architecture_cost(Architecture::RM);
  EXPECT_EQ(mcm.adders, 3240);
  EXPECT_EQ(mcm.constant_adders, 1536);
  EXPECT_EQ(mcm.accumulate_adders, 1580);
  EXPECT_EQ(mcm.butterfly_adders, 124);
  EXPECT_EQ(mcm.mcm_rows, 92);
  EXPECT_EQ(mcm.multipliers, 0);
  EXPECT_EQ(mcm.rom_bits, 0);
  EXPECT_EQ(mcm.rom_bits_target, 0);
  EXPECT_EQ(rm.adders, 156);
  EXPECT_EQ(rm.accumulate_adders, 32);
  EXPECT_EQ(rm.butterfly_adders, 124);
  EXPECT_EQ(rm.multipliers, 32);
  EXPECT_EQ(rm.rom_bits, 14080);
  EXPECT_EQ(rm.rom_bits_target, 17408);
  EXPECT_EQ(rm.rom_columns, 55);
  EXPECT_GT(mcm.adders, rm.adders);
  EXPECT_NEAR(mcm.adder_ratio_mcm_over_rm, 3240.0 / 156.0, 1e-9);
  EXPECT_NEAR(rm.fps_4k, 48.225, 1e-3);
  EXPECT_DOUBLE_EQ(rm.fps_reported_alt, 30.0);
}

TEST(Cost, FrameRateModel) {
  EXPECT_NEAR(fps_estimate(600e6, 3840, 2160, 1.5, 2), 48.225, 1e-3);
  EXPECT_NEAR(fps_estimate(600e6, 3840, 2160, 1.0, 1), 144.676, 1e-3);
  EXPECT_NEAR(fps_estimate(1200e6, 3840, 2160, 1.5, 2), 2 * fps_estimate(600e6, 3840, 2160, 1.5, 2), 1e-9);
  EXPECT_THROW(fps_estimate(0, 3840, 2160, 1.5, 2), DomainError);
  EXPECT_THROW(fps_estimate(600e6, -1, 2160, 1.5, 2), DomainError);
  EXPECT_THROW(fps_estimate(600e6, 3840, 2160, 1.5, 0), DomainError);
}

TEST(Cost, ReportsSerialize) {
  for (auto a : {Architecture::MCM, Architecture::RM}) {
    const CostReport r = architecture_cost(a);
    const auto j = nlohmann::json::parse(cost_report_json(r));
    EXPECT_EQ(j.at("architecture"), to_string(a));
    EXPECT_EQ(j.at("adders").get<int>(), r.adders);
    EXPECT_FALSE(cost_report_text(r).empty());
  }
}
