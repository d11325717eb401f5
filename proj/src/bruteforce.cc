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

#include "ihs/bruteforce.h"

#include <algorithm>
#include <numeric>
#include <string>

namespace ihs {

namespace {

void GuardAssignments(const Wcsp& w) {
  if (w.AssignmentSpaceSize() > kMaxBruteForceAssignments) {
    throw SizeGuardError("instance too large for exhaustive enumeration (" +
                         std::to_string(w.AssignmentSpaceSize()) + " assignments)");
  }
}

// Advances a mixed-radix counter, last digit fastest.
bool NextTuple(std::vector<int>& digits, std::span<const std::vector<Cost>> levels) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < static_cast<int>(levels[i].size())) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

std::optional<Cost> BruteForceOptimum(const Wcsp& w) {
  GuardAssignments(w);
  Assignment a{std::vector<Value>(w.num_vars(), 0)};
  std::optional<Cost> best;
  do {
    Evaluation e = Evaluate(w, a);
    if (e.feasible && (!best || e.total < *best)) best = e.total;
  } while (NextAssignment(w, a));
  return best;
}

std::optional<Assignment> BruteForceInducedSolution(const Wcsp& w, const CostVector& v) {
  GuardAssignments(w);
  Require(v.size() == static_cast<std::size_t>(w.num_functions()),
          "BruteForceInducedSolution: vector length mismatch");
  Assignment a{std::vector<Value>(w.num_vars(), 0)};
  do {
    Evaluation e = Evaluate(w, a);
    if (e.feasible && Leq(e.per_function, v)) return a;
  } while (NextAssignment(w, a));
  return std::nullopt;
}

std::vector<CostVector> MaximalElements(std::span<const CostVector> cores) {
  std::vector<CostVector> out;
  for (std::size_t i = 0; i < cores.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < cores.size() && !dominated; ++j) {
      dominated = j != i && Leq(cores[i], cores[j]) &&
                  (!(cores[i] == cores[j]) || j < i);
    }
    if (!dominated) out.push_back(cores[i]);
  }
  return out;
}

VectorClassification ClassifyAllVectors(const Wcsp& w) {
  GuardAssignments(w);
  std::vector<std::vector<Cost>> levels;
  std::size_t space = 1;
  for (const auto& f : w.cost_functions()) {
    levels.push_back(f.levels());
    space *= f.levels().size();
    if (space > kMaxClassifiedVectors) {
      throw SizeGuardError("level product space too large to classify");
    }
  }

  // Pareto-minimal cost profiles of feasible assignments. A vector is a
  // solution iff it dominates one of them.
  std::vector<CostVector> profiles;
  Assignment a{std::vector<Value>(w.num_vars(), 0)};
  do {
    Evaluation e = Evaluate(w, a);
    if (!e.feasible) continue;
    bool dominated = false;
    for (const auto& p : profiles) {
      if (Leq(p, e.per_function)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    std::erase_if(profiles, [&](const CostVector& p) { return Leq(e.per_function, p); });
    profiles.push_back(e.per_function);
  } while (NextAssignment(w, a));

  VectorClassification out;
  std::vector<int> digits(levels.size(), 0);
  do {
    std::vector<Cost> c(levels.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = levels[i][digits[i]];
    CostVector v(std::move(c));
    const bool solution = std::any_of(profiles.begin(), profiles.end(),
                                      [&](const CostVector& p) { return Leq(p, v); });
    (solution ? out.solutions : out.cores).push_back(std::move(v));
  } while (NextTuple(digits, levels));
  return out;
}

ExhaustiveMhvResult ExhaustiveMhv(std::span<const std::vector<Cost>> levels,
                                  std::span<const CostVector> pool) {
  std::size_t space = 1;
  for (const auto& l : levels) {
    Require(!l.empty(), "ExhaustiveMhv: empty level list");
    space *= l.size();
    if (space > kMaxEnumeratedHitters) {
      throw SizeGuardError("level product space too large for exhaustive MHV");
    }
  }
  ExhaustiveMhvResult best;
  best.saturated = true;
  std::vector<int> digits(levels.size(), 0);
  do {
    std::vector<Cost> c(levels.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = levels[i][digits[i]];
    CostVector v(std::move(c));
    if (!Hits(v, pool)) continue;
    const Cost cost = CostOf(v);
    if (best.saturated || cost < best.cost) {
      best.saturated = false;
      best.cost = cost;
      best.vector = std::move(v);
    }
  } while (NextTuple(digits, levels));
  return best;
}

Wcsp GenerateWcsp(const GeneratorParams& params) {
  if (params.num_vars < 1) throw std::invalid_argument("num_vars must be >= 1");
  if (params.max_domain < 1) throw std::invalid_argument("max_domain must be >= 1");
  if (params.num_functions < 1) throw std::invalid_argument("num_functions must be >= 1");
  if (params.max_arity < 1) throw std::invalid_argument("max_arity must be >= 1");
  if (params.min_cost > params.max_cost) {
    throw std::invalid_argument("min_cost must not exceed max_cost");
  }
  if (!(params.hard_density >= 0.0 && params.hard_density <= 1.0)) {
    throw std::invalid_argument("hard_density must be in [0, 1]");
  }

  SplitMix64 rng(params.seed);
  const int n = params.num_vars;
  std::vector<Value> domains(n);
  for (int x = 0; x < n; ++x) {
    domains[x] = params.max_domain >= 2
                     ? static_cast<Value>(2 + rng.Below(params.max_domain - 1))
                     : 1;
  }

  auto draw_scope = [&](int arity) {
    std::vector<int> vars(n);
    std::iota(vars.begin(), vars.end(), 0);
    for (int k = 0; k < arity; ++k) {
      const int j = k + static_cast<int>(rng.Below(n - k));
      std::swap(vars[k], vars[j]);
    }
    std::vector<int> scope(vars.begin(), vars.begin() + arity);
    std::sort(scope.begin(), scope.end());
    return scope;
  };
  auto table_size = [&](const std::vector<int>& scope) {
    std::size_t size = 1;
    for (int x : scope) size *= domains[x];
    return size;
  };

  const Cost top = CheckedAdd(params.max_cost * static_cast<Cost>(params.num_functions), 1);
  const Cost span = params.max_cost - params.min_cost + 1;
  std::vector<CostFunction> functions;
  for (int f = 0; f < params.num_functions; ++f) {
    const int arity = 1 + static_cast<int>(rng.Below(std::min(params.max_arity, n)));
    std::vector<int> scope = draw_scope(arity);
    std::vector<Cost> table(table_size(scope));
    for (Cost& c : table) c = params.min_cost + rng.Below(span);
    functions.emplace_back(std::move(scope), std::move(table), top, domains);
  }

  std::vector<HardConstraint> hard;
  if (params.hard_density > 0.0) {
    const int count = std::max(1, n / 2);
    for (int c = 0; c < count; ++c) {
      HardConstraint h{draw_scope(std::min(2, n)), {}, -1};
      const std::size_t size = table_size(h.scope);
      for (std::size_t t = 0; t < size; ++t) {
        if (rng.Unit() < params.hard_density) {
          std::vector<Value> tuple(h.scope.size());
          std::size_t index = t;
          for (std::size_t k = h.scope.size(); k-- > 0;) {
            tuple[k] = static_cast<Value>(index % domains[h.scope[k]]);
            index /= domains[h.scope[k]];
          }
          h.forbidden_tuples.push_back(std::move(tuple));
        }
      }
      hard.push_back(std::move(h));
    }
  }

  return Wcsp("gen_s" + std::to_string(params.seed), std::move(domains), std::move(hard),
              std::move(functions), top);
}

}  // namespace ihs
