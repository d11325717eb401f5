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

#include "ihs/model.h"

#include <gtest/gtest.h>

#include <limits>

#include "test_support.h"

namespace ihs {
namespace {

using testing::A;
using testing::Fig1;

TEST(CostTest, CheckedAddDetectsOverflow) {
  EXPECT_EQ(CheckedAdd(2, 3), 5u);
  EXPECT_THROW(CheckedAdd(kInfiniteCost - 1, 1), std::overflow_error);
  EXPECT_THROW(CheckedAdd(kInfiniteCost, 0), std::overflow_error);
  EXPECT_EQ(SaturatingAdd(kInfiniteCost - 1, 5), kInfiniteCost);
  EXPECT_EQ(CostToString(kInfiniteCost), "inf");
  EXPECT_EQ(CostToString(42), "42");
}

TEST(CostVectorTest, CostOfSumsComponents) {
  EXPECT_EQ(CostOf(CostVector{5, 5}), 10u);
  EXPECT_EQ(CostOf(CostVector{0, 0}), 0u);
  EXPECT_EQ(CostOf(CostVector{20, 0}), 20u);
}

TEST(CostVectorTest, LeqIsComponentwise) {
  EXPECT_TRUE(Leq({0, 5}, {5, 5}));
  EXPECT_FALSE(Leq({20, 0}, {5, 5}));
  EXPECT_TRUE(Leq({5, 5}, {5, 5}));
  EXPECT_THROW(Leq({1}, {1, 2}), ContractViolation);
}

TEST(CostVectorTest, Hits) {
  const std::vector<CostVector> none;
  EXPECT_TRUE(Hits({0, 0}, none));
  const std::vector<CostVector> pool = {{5, 5}};
  EXPECT_TRUE(Hits({20, 0}, pool));
  EXPECT_FALSE(Hits({5, 5}, pool));
  EXPECT_FALSE(Hits({0, 5}, pool));
}

TEST(CostVectorTest, ToStringFormatsTuple) { EXPECT_EQ(ToString(CostVector{0, 20}), "(0,20)"); }

TEST(WcspTest, Fig1Shape) {
  const Wcsp w = Fig1();
  EXPECT_EQ(w.num_vars(), 3);
  EXPECT_EQ(w.num_functions(), 2);
  EXPECT_EQ(w.function(0).levels(), (std::vector<Cost>{0, 5, 20}));
  EXPECT_EQ(w.function(1).levels(), (std::vector<Cost>{0, 5, 20}));
  EXPECT_EQ(w.MinVector(), (CostVector{0, 0}));
  EXPECT_EQ(w.MaxVector(), (CostVector{20, 20}));
  EXPECT_TRUE(w.IsValidVector({5, 20}));
  EXPECT_FALSE(w.IsValidVector({6, 20}));
  EXPECT_FALSE(w.IsValidVector({5}));
  EXPECT_EQ(w.AssignmentSpaceSize(), 8u);
}

TEST(WcspTest, EvaluateFig1) {
  const Wcsp w = Fig1();
  Evaluation e = Evaluate(w, A({0, 1, 1}));
  EXPECT_EQ(e.total, 20u);
  EXPECT_EQ(e.per_function, (CostVector{20, 0}));
  EXPECT_TRUE(e.feasible);

  e = Evaluate(w, A({0, 0, 0}));
  EXPECT_EQ(e.total, 20u);
  EXPECT_EQ(e.per_function, (CostVector{0, 20}));

  e = Evaluate(w, A({1, 0, 1}));
  EXPECT_EQ(e.total, 25u);
  EXPECT_EQ(e.per_function, (CostVector{5, 20}));
}

TEST(WcspTest, EvaluateFlagsHardViolations) {
  std::vector<Value> domains = {2, 2};
  HardConstraint h{{0, 1}, {{0, 0}}, -1};
  CostFunction f({0}, {1, 2}, 100, domains);
  const Wcsp w("h", domains, {h}, {f}, 100);
  EXPECT_FALSE(Evaluate(w, A({0, 0})).feasible);
  EXPECT_EQ(Evaluate(w, A({0, 0})).per_function, (CostVector{1}));
  EXPECT_TRUE(Evaluate(w, A({0, 1})).feasible);
  EXPECT_EQ(Evaluate(w, A({0, 1})).total, 1u);
}

TEST(WcspTest, TopCostTuplesBecomeHard) {
  std::vector<Value> domains = {3};
  CostFunction f({0}, {4, 9, 50}, 9, domains);
  EXPECT_EQ(f.levels(), (std::vector<Cost>{4}));
  const Wcsp w("lift", domains, {}, {f}, 9);
  ASSERT_EQ(w.hard_constraints().size(), 1u);
  EXPECT_EQ(w.hard_constraints()[0].lifted_from, 0);
  EXPECT_EQ(w.hard_constraints()[0].forbidden_tuples.size(), 2u);
  EXPECT_FALSE(Evaluate(w, A({1})).feasible);
  EXPECT_TRUE(Evaluate(w, A({0})).feasible);
}

TEST(WcspTest, RejectsDegenerateInstances) {
  std::vector<Value> domains = {2};
  EXPECT_THROW(Wcsp("empty", domains, {}, {}, 10), std::invalid_argument);
  // Every tuple at or above top leaves no level.
  CostFunction all_hard({0}, {10, 10}, 10, domains);
  EXPECT_THROW(Wcsp("nolevel", domains, {}, {all_hard}, 10), std::invalid_argument);
  EXPECT_THROW(CostFunction({0}, {1, 2, 3}, 10, domains), std::invalid_argument);
  EXPECT_THROW(CostFunction({1}, {1, 2}, 10, domains), std::invalid_argument);
}

TEST(WcspTest, TupleIndexRoundTrips) {
  std::vector<Value> domains = {2, 3, 2};
  std::vector<Cost> table(12);
  for (std::size_t k = 0; k < table.size(); ++k) table[k] = k;
  CostFunction f({0, 1, 2}, table, 100, domains);
  for (std::size_t k = 0; k < table.size(); ++k) {
    const auto tuple = f.TupleAt(k);
    EXPECT_EQ(f.CostOf(Assignment{tuple}), k);
  }
  // First scope variable is most significant.
  EXPECT_EQ(f.CostOf(A({1, 0, 0})), 6u);
  EXPECT_EQ(f.CostOf(A({0, 0, 1})), 1u);
}

TEST(WcspTest, NextAssignmentEnumeratesAll) {
  const Wcsp w = Fig1();
  Assignment a{{0, 0, 0}};
  int count = 1;
  while (NextAssignment(w, a)) ++count;
  EXPECT_EQ(count, 8);
  EXPECT_EQ(a.values, (std::vector<Value>{0, 0, 0}));
}

}  // namespace
}  // namespace ihs
