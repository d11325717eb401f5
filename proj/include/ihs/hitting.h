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

// Minimum-cost and cost-bounded hitting vectors over a pool of cores.
//
// A vector h hits a core k iff h_i > k_i for some i. Both searches are
// depth-first branch and bound over per-function level indices. A node
// holds, for each function, the level index reached so far and a cap it may
// not exceed. The search branches on the unhit core with the fewest ways to
// be raised; the branch for function i raises it to just above the core,
// and later siblings cap i at the core's level so the children partition
// the node. A leaf (every core hit) is optimal for its subtree because the
// levels are strictly increasing.
//
// The node lower bound is the node cost plus, for a greedily chosen set of
// unhit cores whose raisable functions are pairwise disjoint, the cheapest
// raise of each.

#ifndef IHS_HITTING_H_
#define IHS_HITTING_H_

#include <atomic>
#include <cstdint>
#include <vector>

#include "ihs/model.h"

namespace ihs {

class HittingProblem {
 public:
  struct Raise {
    int function;
    int to_level;  // level index that hits the core through `function`
  };

  struct Core {
    std::vector<int> level_index;  // per function
    std::vector<Raise> raises;     // functions not at their top level
  };

  // levels[i] must be nonempty, strictly ascending.
  explicit HittingProblem(std::vector<std::vector<Cost>> levels);
  static HittingProblem ForInstance(const Wcsp& w);

  // Adds a core given by its cost components. Returns false when an existing
  // core already dominates it; cores the new one dominates are dropped.
  // Throws ContractViolation if a component is not a level.
  bool AddCore(const CostVector& core);

  int num_functions() const { return static_cast<int>(levels_.size()); }
  const std::vector<Cost>& levels(int i) const { return levels_[i]; }
  const std::vector<Core>& cores() const { return cores_; }

  CostVector ToVector(const std::vector<int>& level_index) const;

 private:
  std::vector<std::vector<Cost>> levels_;
  std::vector<Core> cores_;
};

enum class HittingStatus {
  kFound,
  kNoneBelowBound,  // no hitting vector costs less than the bound
  kSaturated,       // some core sits at every top level: nothing hits it
  kStopped,         // interrupted through the stop flag
};

struct HittingOptions {
  // Only vectors costing strictly less than this are of interest.
  Cost bound = kInfiniteCost;
  // Subtrees explored concurrently.
  int threads = 1;
  const std::atomic<bool>* stop = nullptr;
};

struct HittingResult {
  HittingStatus status = HittingStatus::kStopped;
  CostVector vector;  // set when kFound
  Cost cost = 0;
  std::int64_t nodes = 0;
};

// Exact minimum-cost hitting vector; among optimal vectors the
// lexicographically smallest level-index tuple wins, so the answer does not
// depend on `threads`.
HittingResult MinCostHittingVector(const HittingProblem& p,
                                   const HittingOptions& options = {});

// Any hitting vector with cost < ub, found first-feasible with cheapest
// raises tried first. kNoneBelowBound when there is none.
HittingResult CostBoundedHittingVector(const HittingProblem& p, Cost ub,
                                       const HittingOptions& options = {});

}  // namespace ihs

#endif  // IHS_HITTING_H_
