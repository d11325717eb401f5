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

// Domain types for weighted CSP instances (cost function networks) and for
// the cost vectors the hitting set loops reason about.

#ifndef IHS_MODEL_H_
#define IHS_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ihs {

using Cost = std::uint64_t;
using Value = std::uint32_t;

// Sentinel for an unbounded upper bound. No checked sum ever reaches it.
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void Require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

// Sum that throws std::overflow_error instead of wrapping. A result equal to
// kInfiniteCost is treated as overflow too.
Cost CheckedAdd(Cost a, Cost b);

// Sum that clamps at kInfiniteCost.
inline Cost SaturatingAdd(Cost a, Cost b) {
  return a > kInfiniteCost - b ? kInfiniteCost : a + b;
}

std::string CostToString(Cost c);

// A full assignment: values[x] is the value index of variable x.
struct Assignment {
  std::vector<Value> values;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Table cost function over an ordered scope. The table is dense and indexed
// in mixed radix with the first scope variable most significant.
class CostFunction {
 public:
  // `domains` are the instance's domain sizes; the table must hold exactly
  // one entry per scope tuple. Tuples whose cost is >= top are forbidden and
  // excluded from levels(). Throws std::invalid_argument.
  CostFunction(std::vector<int> scope, std::vector<Cost> table, Cost top,
               std::span<const Value> domains);

  const std::vector<int>& scope() const { return scope_; }
  int arity() const { return static_cast<int>(scope_.size()); }
  const std::vector<Cost>& table() const { return table_; }

  // Distinct sub-top costs, ascending. Empty only when every tuple is >= top.
  const std::vector<Cost>& levels() const { return levels_; }
  int num_levels() const { return static_cast<int>(levels_.size()); }
  Cost min_level() const { return levels_.front(); }
  Cost max_level() const { return levels_.back(); }

  // Index of `cost` in levels(), or -1.
  int LevelIndex(Cost cost) const;

  Cost CostOf(const Assignment& a) const { return table_[TupleIndex(a)]; }
  std::size_t TupleIndex(const Assignment& a) const;

  // Tuple values for a table index, in scope order.
  std::vector<Value> TupleAt(std::size_t index) const;

 private:
  std::vector<int> scope_;
  std::vector<Value> radix_;  // domain sizes of the scope
  std::vector<Cost> table_;
  std::vector<Cost> levels_;
};

struct HardConstraint {
  std::vector<int> scope;
  std::vector<std::vector<Value>> forbidden_tuples;
  // Index of the cost function whose >= top tuples produced this
  // constraint, or -1 for a constraint declared as such.
  int lifted_from = -1;

  bool Forbids(const Assignment& a) const;
};

// One cost level per cost function.
class CostVector {
 public:
  CostVector() = default;
  explicit CostVector(std::vector<Cost> components)
      : components_(std::move(components)) {}
  CostVector(std::initializer_list<Cost> components)
      : components_(components) {}

  std::size_t size() const { return components_.size(); }
  Cost operator[](std::size_t i) const { return components_[i]; }
  Cost& operator[](std::size_t i) { return components_[i]; }
  const std::vector<Cost>& components() const { return components_; }

  friend bool operator==(const CostVector&, const CostVector&) = default;

 private:
  std::vector<Cost> components_;
};

std::string ToString(const CostVector& v);

class Wcsp {
 public:
  // Validates every invariant and lifts >= top tuples of each cost function
  // into a HardConstraint with lifted_from set. Throws std::invalid_argument.
  Wcsp(std::string name, std::vector<Value> domains,
       std::vector<HardConstraint> hard_constraints,
       std::vector<CostFunction> cost_functions, Cost top);

  const std::string& name() const { return name_; }
  int num_vars() const { return static_cast<int>(domains_.size()); }
  const std::vector<Value>& domains() const { return domains_; }
  Value max_domain_size() const;
  const std::vector<HardConstraint>& hard_constraints() const {
    return hard_constraints_;
  }
  const std::vector<CostFunction>& cost_functions() const {
    return cost_functions_;
  }
  int num_functions() const { return static_cast<int>(cost_functions_.size()); }
  const CostFunction& function(int i) const { return cost_functions_[i]; }
  Cost top() const { return top_; }

  // Vector with every function at its lowest (resp. highest) level.
  CostVector MinVector() const;
  CostVector MaxVector() const;

  // True iff every component is a level of its function.
  bool IsValidVector(const CostVector& v) const;

  // Number of full assignments, saturating at SIZE_MAX.
  std::size_t AssignmentSpaceSize() const;

 private:
  std::string name_;
  std::vector<Value> domains_;
  std::vector<HardConstraint> hard_constraints_;
  std::vector<CostFunction> cost_functions_;
  Cost top_;
};

// Component sum, checked against overflow.
Cost CostOf(const CostVector& v);

// u <= v componentwise ("v dominates u").
bool Leq(const CostVector& u, const CostVector& v);

// True iff no vector of `pool` dominates u.
bool Hits(const CostVector& u, std::span<const CostVector> pool);

struct Evaluation {
  Cost total = 0;  // saturating when infeasible
  CostVector per_function;
  bool feasible = true;
};

Evaluation Evaluate(const Wcsp& w, const Assignment& a);

// Advances `a` to the next assignment in lexicographic order (last variable
// fastest). Returns false after the last one.
bool NextAssignment(const Wcsp& w, Assignment& a);

}  // namespace ihs

#endif  // IHS_MODEL_H_
