// Copyright 2026 The IHS-WCSP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ihs/hitting.h"

#include <gtest/gtest.h>

#include <atomic>

#include "ihs/bruteforce.h"

namespace ihs {
namespace {

const std::vector<std::vector<Cost>> kFig1Levels = {{0, 5, 20}, {0, 5, 20}};

HittingProblem Fig1Problem(const std::vector<CostVector>& cores) {
  HittingProblem p(kFig1Levels);
  for (const auto& c : cores) p.AddCore(c);
  return p;
}

TEST(HittingTest, EmptyPoolGivesMinimumVector) {
  const HittingResult r = MinCostHittingVector(Fig1Problem({}));
  ASSERT_EQ(r.status, HittingStatus::kFound);
  EXPECT_EQ(r.vector, (CostVector{0, 0}));
  EXPECT_EQ(r.cost, 0u);
}

TEST(HittingTest, Fig1TieBreaks) {
  HittingResult r = MinCostHittingVector(Fig1Problem({{5, 5}}));
  ASSERT_EQ(r.status, HittingStatus::kFound);
  EXPECT_EQ(r.vector, (CostVector{0, 20}));
  EXPECT_EQ(r.cost, 20u);

  r = MinCostHittingVector(Fig1Problem({{0, 0}}));
  EXPECT_EQ(r.vector, (CostVector{0, 5}));
  EXPECT_EQ(r.cost, 5u);
}

TEST(HittingTest, BoundedFig1) {
  HittingResult r = CostBoundedHittingVector(Fig1Problem({{5, 5}}), kInfiniteCost);
  ASSERT_EQ(r.status, HittingStatus::kFound);
  EXPECT_TRUE(r.vector[0] > 5 || r.vector[1] > 5);

  r = CostBoundedHittingVector(Fig1Problem({{5, 5}}), 20);
  EXPECT_EQ(r.status, HittingStatus::kNoneBelowBound);

  r = CostBoundedHittingVector(Fig1Problem({}), 1);
  ASSERT_EQ(r.status, HittingStatus::kFound);
  EXPECT_EQ(r.vector, (CostVector{0, 0}));
}

TEST(HittingTest, SaturatedPool) {
  EXPECT_EQ(MinCostHittingVector(Fig1Problem({{20, 20}})).status, HittingStatus::kSaturated);
  EXPECT_EQ(CostBoundedHittingVector(Fig1Problem({{20, 20}}), 100).status,
            HittingStatus::kSaturated);
}

TEST(HittingTest, AddCoreKeepsAntichain) {
  HittingProblem p(kFig1Levels);
  EXPECT_TRUE(p.AddCore({0, 5}));
  EXPECT_FALSE(p.AddCore({0, 0}));
  EXPECT_FALSE(p.AddCore({0, 5}));
  EXPECT_TRUE(p.AddCore({5, 5}));
  EXPECT_EQ(p.cores().size(), 1u);
  EXPECT_THROW(p.AddCore({1, 5}), ContractViolation);
  EXPECT_THROW(HittingProblem({{3, 3}}), ContractViolation);
}

TEST(HittingTest, StopFlagInterrupts) {
  std::atomic<bool> stop{true};
  HittingOptions options;
  options.stop = &stop;
  EXPECT_EQ(MinCostHittingVector(Fig1Problem({{5, 5}}), options).status, HittingStatus::kStopped);
}

struct RandomProblem {
  std::vector<std::vector<Cost>> levels;
  std::vector<CostVector> pool;
};

RandomProblem MakeProblem(SplitMix64& rng) {
  RandomProblem r;
  const int m = 1 + static_cast<int>(rng.Below(5));
  for (int i = 0; i < m; ++i) {
    const int count = 1 + static_cast<int>(rng.Below(4));
    Cost c = rng.Below(4);
    std::vector<Cost> l;
    for (int j = 0; j < count; ++j) {
      l.push_back(c);
      c += 1 + rng.Below(9);
    }
    r.levels.push_back(l);
  }
  const int cores = static_cast<int>(rng.Below(7));
  for (int k = 0; k < cores; ++k) {
    std::vector<Cost> v(m);
    for (int i = 0; i < m; ++i) {
      // Mostly below the top level so the pool rarely saturates.
      const auto& l = r.levels[i];
      const std::uint64_t span = l.size() > 1 && rng.Below(8) != 0 ? l.size() - 1 : l.size();
      v[i] = l[rng.Below(span)];
    }
    r.pool.emplace_back(std::move(v));
  }
  return r;
}

TEST(HittingTest, MatchesExhaustiveSearch) {
  SplitMix64 rng(99);
  for (int round = 0; round < 400; ++round) {
    const RandomProblem rp = MakeProblem(rng);
    HittingProblem p(rp.levels);
    for (const auto& c : rp.pool) p.AddCore(c);
    const ExhaustiveMhvResult ex = ExhaustiveMhv(rp.levels, rp.pool);
    for (int threads : {1, 3}) {
      HittingOptions options;
      options.threads = threads;
      const HittingResult r = MinCostHittingVector(p, options);
      if (ex.saturated) {
        ASSERT_EQ(r.status, HittingStatus::kSaturated) << round;
        continue;
      }
      ASSERT_EQ(r.status, HittingStatus::kFound) << round;
      EXPECT_EQ(r.cost, ex.cost) << round;
      EXPECT_EQ(r.vector, ex.vector) << round << " threads " << threads;
      EXPECT_TRUE(Hits(r.vector, rp.pool));

      const HittingResult at = CostBoundedHittingVector(p, ex.cost, options);
      EXPECT_EQ(at.status, HittingStatus::kNoneBelowBound) << round;
      const HittingResult above = CostBoundedHittingVector(p, ex.cost + 1, options);
      ASSERT_EQ(above.status, HittingStatus::kFound) << round;
      EXPECT_TRUE(Hits(above.vector, rp.pool));
      EXPECT_LE(above.cost, ex.cost);
    }
  }
}

TEST(HittingTest, BoundLimitsOptimalSearch) {
  HittingOptions options;
  options.bound = 20;
  EXPECT_EQ(MinCostHittingVector(Fig1Problem({{5, 5}}), options).status,
            HittingStatus::kNoneBelowBound);
  options.bound = 21;
  EXPECT_EQ(MinCostHittingVector(Fig1Problem({{5, 5}}), options).cost, 20u);
}

}  // namespace
}  // namespace ihs
