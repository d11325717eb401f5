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

// Exhaustive reference oracles and a reproducible instance generator. None
// of this goes through the propositional encoding or the branch and bound;
// it exists to check them.

#ifndef IHS_BRUTEFORCE_H_
#define IHS_BRUTEFORCE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ihs/model.h"

namespace ihs {

class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kMaxBruteForceAssignments = 10'000'000;
inline constexpr std::size_t kMaxClassifiedVectors = 100'000;
inline constexpr std::size_t kMaxEnumeratedHitters = 1'000'000;

// Minimum Evaluate() total over feasible assignments; nullopt if there is
// none. Throws SizeGuardError above kMaxBruteForceAssignments.
std::optional<Cost> BruteForceOptimum(const Wcsp& w);

// Some assignment satisfying the CSP induced by v, by enumeration.
std::optional<Assignment> BruteForceInducedSolution(const Wcsp& w, const CostVector& v);

struct VectorClassification {
  std::vector<CostVector> cores;
  std::vector<CostVector> solutions;
};

// Labels every vector of the level product space, enumerated with the last
// function's level varying fastest.
VectorClassification ClassifyAllVectors(const Wcsp& w);

// Cores of `cores` not dominated by another member.
std::vector<CostVector> MaximalElements(std::span<const CostVector> cores);

struct ExhaustiveMhvResult {
  bool saturated = false;
  CostVector vector;
  Cost cost = 0;
};

// Cheapest vector of the level product hitting `pool`, ties to the
// lexicographically smallest level-index tuple.
ExhaustiveMhvResult ExhaustiveMhv(std::span<const std::vector<Cost>> levels,
                                  std::span<const CostVector> pool);

// SplitMix64: state += 0x9E3779B97F4A7C15; z = state;
// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
// z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) by modulo reduction; n > 0.
  std::uint64_t Below(std::uint64_t n) { return Next() % n; }

  // Uniform in [0, 1) from the top 53 bits.
  double Unit() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct GeneratorParams {
  std::uint64_t seed = 1;
  int num_vars = 3;
  int max_domain = 2;
  int num_functions = 2;
  int max_arity = 2;
  Cost min_cost = 0;
  Cost max_cost = 20;
  double hard_density = 0.0;
};

// Deterministic random instance; the draw order is documented in the
// README so other implementations can reproduce it. Throws
// std::invalid_argument on nonsensical parameters (num_functions < 1, ...).
Wcsp GenerateWcsp(const GeneratorParams& params);

}  // namespace ihs

#endif  // IHS_BRUTEFORCE_H_
