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

#include "ihs/encoding.h"

#include <gtest/gtest.h>

#include <sstream>

#include "test_support.h"

namespace ihs {
namespace {

using testing::A;
using testing::Fig1;

TEST(EncodingTest, Fig1Counts) {
  const Wcsp w = Fig1();
  CspEncoding e(w);
  EXPECT_EQ(e.stats().value_literals, 6);
  EXPECT_EQ(e.stats().exactly_one_groups, 3);
  EXPECT_EQ(e.stats().selectors, 4);
  // Tuples above the minimum level: costs {5,20,20} in each function.
  EXPECT_EQ(e.stats().guarded_clauses, 6);
  EXPECT_EQ(e.stats().hard_clauses, 0);
}

TEST(EncodingTest, SingleLevelHasNoSelectors) {
  std::vector<Value> domains = {3};
  const Wcsp w("flat", domains, {}, {CostFunction({0}, {4, 4, 4}, 100, domains)}, 100);
  CspEncoding e(w);
  EXPECT_EQ(e.stats().selectors, 0);
  EXPECT_EQ(e.stats().guarded_clauses, 0);
}

TEST(EncodingTest, HardTupleIsOneBinaryClause) {
  std::vector<Value> domains = {2, 2};
  HardConstraint h{{0, 1}, {{0, 0}}, -1};
  const Wcsp w("hard", domains, {h}, {CostFunction({0}, {0, 1}, 100, domains)}, 100);
  CspEncoding e(w);
  EXPECT_EQ(e.stats().hard_clauses, 1);
  std::ostringstream out;
  e.WriteDimacs(out);
  // Literal of x0=a is var 1, x1=a is var 3 in DIMACS numbering.
  EXPECT_NE(out.str().find("\n-1 -3 0\n"), std::string::npos) << out.str();
}

TEST(EncodingTest, Fig1Verdicts) {
  const Wcsp w = Fig1();
  CspEncoding e(w);
  EXPECT_EQ(e.SolveUnderVector({5, 5}).verdict, Verdict::kUnsat);
  EXPECT_EQ(e.SolveUnderVector({0, 0}).verdict, Verdict::kUnsat);
  const OracleVerdict v = e.SolveUnderVector({20, 0});
  ASSERT_TRUE(v.satisfiable());
  EXPECT_EQ(*v.witness, A({0, 1, 1}));
  EXPECT_EQ(e.SolveUnderVector({0, 20}).verdict, Verdict::kSat);
  EXPECT_EQ(e.num_calls(), 4);
}

TEST(EncodingTest, BelowMinimumIsUnsat) {
  std::vector<Value> domains = {2};
  const Wcsp w("min", domains, {}, {CostFunction({0}, {3, 7}, 100, domains)}, 100);
  CspEncoding e(w);
  EXPECT_EQ(e.SolveUnderVector({2}).verdict, Verdict::kUnsat);
  EXPECT_EQ(e.SolveUnderVector({3}).verdict, Verdict::kSat);
  // Non-level thresholds are accepted.
  EXPECT_EQ(e.SolveUnderVector({6}).verdict, Verdict::kSat);
}

// Both backends against brute force on every vector of the level space:
// verdicts agree and witnesses are feasible and within the vector.
TEST(EncodingTest, AgreesWithBruteForceOnGeneratedInstances) {
  for (int seed = 1; seed <= 40; ++seed) {
    GeneratorParams p;
    p.seed = seed;
    p.num_vars = 4;
    p.max_domain = 3;
    p.num_functions = 3;
    p.max_arity = 2;
    p.max_cost = 6;
    p.hard_density = seed % 4 == 0 ? 0.3 : 0.0;
    const Wcsp w = GenerateWcsp(p);
    const VectorClassification cls = ClassifyAllVectors(w);
    for (OracleBackend backend : {OracleBackend::kCdcl, OracleBackend::kBacktracking}) {
      CspEncoding e(w, backend);
      for (const auto* group : {&cls.cores, &cls.solutions}) {
        const bool sat = group == &cls.solutions;
        for (const auto& v : *group) {
          const OracleVerdict r = e.SolveUnderVector(v);
          ASSERT_EQ(r.satisfiable(), sat) << "seed " << seed << " v " << ToString(v);
          if (sat) {
            const Evaluation ev = Evaluate(w, *r.witness);
            EXPECT_TRUE(ev.feasible);
            EXPECT_TRUE(Leq(ev.per_function, v));
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace ihs
