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

#include "ihs/core_grow.h"

#include <algorithm>
#include <vector>

namespace ihs {

GrowResult MaximalCore(CspEncoding& encoding, const CostVector& h,
                       BoundSink* sink, const std::atomic<bool>* stop) {
  const Wcsp& w = encoding.wcsp();
  Require(w.IsValidVector(h), "MaximalCore: not a valid cost vector");
  const SolveLimits limits{-1, stop};

  GrowResult result;
  result.core = h;
  OracleVerdict first = encoding.SolveUnderVector(h, limits);
  result.oracle_calls++;
  if (first.verdict == Verdict::kSat) {
    throw ContractViolation("MaximalCore: input vector is not a core");
  }
  if (first.verdict == Verdict::kBudgetExhausted) {
    result.interrupted = true;
    return result;
  }

  const int m = w.num_functions();
  std::vector<int> level(m);
  std::vector<bool> blocked(m, false);
  for (int i = 0; i < m; ++i) level[i] = w.function(i).LevelIndex(h[i]);

  auto raisable = [&](int i) {
    return !blocked[i] && level[i] + 1 < w.function(i).num_levels();
  };
  auto increment = [&](int i) {
    const auto& levels = w.function(i).levels();
    return levels[level[i] + 1] - levels[level[i]];
  };

  CostVector& k = result.core;
  std::vector<int> order;
  for (bool changed = true; changed;) {
    changed = false;
    order.clear();
    for (int i = 0; i < m; ++i) {
      if (raisable(i)) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return increment(a) < increment(b); });
    for (int i : order) {
      if (!raisable(i)) continue;
      CostVector probe = k;
      probe[i] = w.function(i).levels()[level[i] + 1];
      OracleVerdict v = encoding.SolveUnderVector(probe, limits);
      result.oracle_calls++;
      switch (v.verdict) {
        case Verdict::kUnsat:
          k = std::move(probe);
          level[i]++;
          changed = true;
          break;
        case Verdict::kSat: {
          blocked[i] = true;
          if (sink != nullptr) {
            const Cost cost = Evaluate(w, *v.witness).total;
            if (cost < sink->CurrentUpperBound()) sink->OfferSolution(*v.witness, cost);
          }
          break;
        }
        case Verdict::kBudgetExhausted:
          result.interrupted = true;
          return result;
      }
    }
  }
  return result;
}

}  // namespace ihs
