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

#include "ihs/engine.h"

#include <gtest/gtest.h>

#include "test_support.h"

namespace ihs {
namespace {

using testing::Fig1;

int Count(const std::vector<TraceEvent>& trace, TraceKind kind) {
  return static_cast<int>(std::count_if(trace.begin(), trace.end(),
                                        [&](const TraceEvent& e) { return e.kind == kind; }));
}

class AlgorithmTest : public ::testing::TestWithParam<Algorithm> {};

TEST_P(AlgorithmTest, Fig1IsOptimal20) {
  const Wcsp w = Fig1();
  CorePool pool;
  const SolveResult r = Solve(GetParam(), w, pool);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.optimum, Cost{20});
  EXPECT_EQ(r.lb, 20u);
  EXPECT_EQ(r.ub, 20u);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(Evaluate(w, *r.witness).total, 20u);
  const auto trace = pool.trace();
  ASSERT_FALSE(trace.empty());
  EXPECT_EQ(trace.back().kind, TraceKind::kDone);
  EXPECT_EQ(trace.back().value, 20u);
  EXPECT_TRUE(testing::TraceMonotone(trace));
  EXPECT_TRUE(testing::TraceBrackets(trace, Cost{20}));
}

TEST_P(AlgorithmTest, SingleLevelSolvesInOneIteration) {
  std::vector<Value> domains = {2};
  const Wcsp w("one", domains, {}, {CostFunction({0}, {3, 3}, 100, domains)}, 100);
  CorePool pool;
  const SolveResult r = Solve(GetParam(), w, pool);
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.optimum, Cost{3});
  EXPECT_LE(r.lb_iterations + r.ub_iterations, 2);
  EXPECT_EQ(r.cores_used, 0u);
}

TEST_P(AlgorithmTest, InfeasibleHardConstraints) {
  std::vector<Value> domains = {2};
  HardConstraint h{{0}, {{0}, {1}}, -1};
  const Wcsp w("x", domains, {h}, {CostFunction({0}, {0, 1}, 100, domains)}, 100);
  CorePool pool;
  const SolveResult r = Solve(GetParam(), w, pool);
  EXPECT_EQ(r.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_EQ(Count(pool.trace(), TraceKind::kDone), 0);
}

TEST_P(AlgorithmTest, ZeroBudgetTimesOut) {
  const Wcsp w = Fig1();
  CorePool pool;
  SolveOptions options;
  options.time_limit = std::chrono::milliseconds(0);
  const SolveResult r = Solve(GetParam(), w, pool, options);
  EXPECT_EQ(r.status, SolveStatus::kTimeout);
  EXPECT_EQ(r.lb, 0u);
  // The feasibility check may still finish and leave its incumbent.
  EXPECT_TRUE(r.ub == kInfiniteCost || r.ub >= 20u);
  EXPECT_EQ(Count(pool.trace(), TraceKind::kDone), 0);
}

TEST_P(AlgorithmTest, MatchesBruteForceOnCorpusSample) {
  for (int k = 0; k < testing::kCorpusSize; k += 7) {
    const Wcsp w = GenerateWcsp(testing::CorpusParams(k));
    const std::optional<Cost> expected = BruteForceOptimum(w);
    CorePool pool;
    SolveOptions options;
    options.seed_disjoint_cores = k % 2 == 1;
    const SolveResult r = Solve(GetParam(), w, pool, options);
    if (!expected) {
      EXPECT_EQ(r.status, SolveStatus::kInfeasible) << k;
      continue;
    }
    ASSERT_EQ(r.status, SolveStatus::kOptimal) << k;
    EXPECT_EQ(r.optimum, expected) << k;
    EXPECT_EQ(Evaluate(w, *r.witness).total, *expected) << k;
    std::string why;
    EXPECT_TRUE(testing::TraceBrackets(pool.trace(), expected, &why)) << k << ": " << why;
    EXPECT_TRUE(testing::TraceMonotone(pool.trace())) << k;
  }
}

INSTANTIATE_TEST_SUITE_P(All, AlgorithmTest,
                         ::testing::Values(Algorithm::kLb, Algorithm::kUb, Algorithm::kLub),
                         [](const auto& info) {
                           switch (info.param) {
                             case Algorithm::kLb:
                               return std::string("Lb");
                             case Algorithm::kUb:
                               return std::string("Ub");
                             case Algorithm::kLub:
                               return std::string("Lub");
                           }
                           return std::string("X");
                         });

TEST(HsLbTest, Fig1TakesTwoIterationsAndOneCore) {
  const Wcsp w = Fig1();
  CorePool pool;
  const SolveResult r = HsLb(w, pool);
  EXPECT_EQ(r.lb_iterations, 2);
  EXPECT_EQ(r.cores_used, 1u);
  EXPECT_EQ(pool.cores(), (std::vector<CostVector>{{5, 5}}));
}

TEST(HsUbTest, LowerBoundMovesOnce) {
  for (int k = 0; k < 40; ++k) {
    const Wcsp w = GenerateWcsp(testing::CorpusParams(k));
    CorePool pool;
    HsUb(w, pool);
    int changes = 0;
    for (const auto& e : pool.trace()) {
      if (e.kind == TraceKind::kLb && e.source != TraceSource::kMain) ++changes;
    }
    EXPECT_LE(changes, 1) << k;
  }
}

TEST(HsLubTest, DeterministicModeIsRepeatable) {
  const Wcsp w = GenerateWcsp(testing::CorpusParams(3));
  SolveOptions options;
  options.deterministic = true;
  std::vector<std::vector<CostVector>> runs;
  for (int k = 0; k < 3; ++k) {
    CorePool pool;
    HsLub(w, pool, options);
    runs.push_back(pool.cores());
  }
  EXPECT_EQ(runs[0], runs[1]);
  EXPECT_EQ(runs[1], runs[2]);
}

TEST(HsLubTest, LbSideAloneBehavesLikeHsLb) {
  for (int k = 0; k < 30; ++k) {
    const Wcsp w = GenerateWcsp(testing::CorpusParams(k));
    SolveOptions options;
    options.run_ub_worker = false;
    CorePool a, b;
    const SolveResult lub = HsLub(w, a, options);
    const SolveResult lb = HsLb(w, b);
    EXPECT_EQ(lub.status, lb.status) << k;
    EXPECT_EQ(lub.optimum, lb.optimum) << k;
    EXPECT_EQ(a.cores(), b.cores()) << k;
  }
  SolveOptions none;
  none.run_lb_worker = none.run_ub_worker = false;
  CorePool pool;
  EXPECT_THROW(HsLub(Fig1(), pool, none), ContractViolation);
}

TEST(HsLubTest, JitteredInterleavingsAgree) {
  for (int k = 0; k < 20; ++k) {
    const Wcsp w = GenerateWcsp(testing::CorpusParams(k));
    const std::optional<Cost> expected = BruteForceOptimum(w);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SolveOptions options;
      options.jitter_seed = seed;
      options.lb_threads = 2;
      CorePool pool;
      const SolveResult r = HsLub(w, pool, options);
      if (!expected) {
        EXPECT_EQ(r.status, SolveStatus::kInfeasible);
      } else {
        EXPECT_EQ(r.optimum, expected) << k << " jitter " << seed;
      }
    }
  }
}

TEST(CorePoolTest, BoundsMergeAndClose) {
  std::vector<TraceEvent> seen;
  CorePool pool([&](const TraceEvent& e) { seen.push_back(e); });
  pool.RaiseLowerBound(5, TraceSource::kLbWorker);
  pool.RaiseLowerBound(3, TraceSource::kLbWorker);  // ignored
  pool.OfferUpperBound(9, Assignment{{0}}, TraceSource::kUbWorker);
  pool.OfferUpperBound(12, Assignment{{1}}, TraceSource::kUbWorker);  // ignored
  EXPECT_EQ(pool.lb(), 5u);
  EXPECT_EQ(pool.ub(), 9u);
  EXPECT_EQ(pool.best_witness(), Assignment{{0}});
  EXPECT_FALSE(pool.Closed());
  EXPECT_EQ(pool.AddCore({1, 2}, TraceSource::kLbWorker), 1u);
  EXPECT_EQ(pool.CoresSince(1).size(), 0u);
  pool.RaiseLowerBound(9, TraceSource::kLbWorker);
  EXPECT_TRUE(pool.Closed());
  EXPECT_TRUE(pool.StopRequested());
  EXPECT_THROW(pool.RaiseLowerBound(10, TraceSource::kLbWorker), std::logic_error);
  EXPECT_EQ(seen, pool.trace());
  EXPECT_EQ(seen.size(), 4u);
}

TEST(SeedTest, Fig1GivesOneCore) {
  const Wcsp w = Fig1();
  CorePool pool;
  EXPECT_EQ(SeedDisjointCores(w, pool), 1);
  EXPECT_EQ(pool.cores(), (std::vector<CostVector>{{5, 5}}));
  // Hitting (5,5) needs some function at 20.
  EXPECT_EQ(pool.lb(), 20u);
}

TEST(SeedTest, SatisfiableAtMinimaGivesNone) {
  std::vector<Value> domains = {2, 2};
  const Wcsp w("easy", domains, {},
               {CostFunction({0}, {0, 4}, 100, domains), CostFunction({1}, {0, 4}, 100, domains)},
               100);
  CorePool pool;
  EXPECT_EQ(SeedDisjointCores(w, pool), 0);
  EXPECT_EQ(pool.lb(), 0u);
}

TEST(SeedTest, IndependentConflictsGiveDisjointCores) {
  // f0/f1 disagree on x0, f2/f3 on x1.
  std::vector<Value> domains = {2, 2};
  const Wcsp w("two", domains, {},
               {CostFunction({0}, {0, 5}, 100, domains), CostFunction({0}, {5, 0}, 100, domains),
                CostFunction({1}, {0, 5}, 100, domains), CostFunction({1}, {5, 0}, 100, domains)},
               100);
  CorePool pool;
  EXPECT_EQ(SeedDisjointCores(w, pool), 2);
  const auto cores = pool.cores();
  ASSERT_EQ(cores.size(), 2u);
  for (int i = 0; i < 4; ++i) {
    // No function is below its top level in both cores.
    EXPECT_FALSE(cores[0][i] < 5 && cores[1][i] < 5) << i;
  }
  EXPECT_EQ(pool.lb(), 10u);
  EXPECT_EQ(BruteForceOptimum(w), Cost{10});
}

TEST(SeedTest, SeededLbIsTraced) {
  const Wcsp w = Fig1();
  CorePool pool;
  SolveOptions options;
  options.seed_disjoint_cores = true;
  const SolveResult r = HsUb(w, pool, options);
  EXPECT_EQ(r.optimum, Cost{20});
  bool seeded = false;
  for (const auto& e : pool.trace()) {
    seeded = seeded || (e.kind == TraceKind::kLb && e.source == TraceSource::kSeed);
  }
  EXPECT_TRUE(seeded);
}

TEST(TimeoutTest, HardInstanceStopsWithBounds) {
  GeneratorParams p;
  p.seed = 5;
  p.num_vars = 40;
  p.max_domain = 4;
  p.num_functions = 120;
  p.max_arity = 3;
  p.max_cost = 100;
  const Wcsp w = GenerateWcsp(p);
  CorePool pool;
  SolveOptions options;
  options.time_limit = std::chrono::milliseconds(300);
  const auto start = std::chrono::steady_clock::now();
  const SolveResult r = HsLb(w, pool, options);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(r.status, SolveStatus::kTimeout);
  EXPECT_LT(r.lb, r.ub);
  EXPECT_LT(elapsed, std::chrono::seconds(5));
  EXPECT_TRUE(testing::TraceMonotone(pool.trace()));
}

}  // namespace
}  // namespace ihs
