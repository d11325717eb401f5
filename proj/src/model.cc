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

#include <algorithm>
#include <sstream>

namespace ihs {

namespace {

void ValidateScope(const std::vector<int>& scope,
                   std::span<const Value> domains, const char* what) {
  const int n = static_cast<int>(domains.size());
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (scope[i] < 0 || scope[i] >= n) {
      throw std::invalid_argument(std::string(what) +
                                  ": scope variable out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (scope[j] == scope[i]) {
        throw std::invalid_argument(std::string(what) +
                                    ": repeated variable in scope");
      }
    }
  }
}

}  // namespace

Cost CheckedAdd(Cost a, Cost b) {
  if (a >= kInfiniteCost - b) throw std::overflow_error("cost overflow");
  return a + b;
}

std::string CostToString(Cost c) {
  return c == kInfiniteCost ? std::string("inf") : std::to_string(c);
}

CostFunction::CostFunction(std::vector<int> scope, std::vector<Cost> table,
                           Cost top, std::span<const Value> domains)
    : scope_(std::move(scope)), table_(std::move(table)) {
  ValidateScope(scope_, domains, "cost function");
  std::size_t size = 1;
  for (int x : scope_) {
    radix_.push_back(domains[x]);
    size *= domains[x];
  }
  if (table_.size() != size) {
    throw std::invalid_argument("cost function: table size does not match scope");
  }
  for (Cost c : table_) {
    if (c < top) levels_.push_back(c);
  }
  std::sort(levels_.begin(), levels_.end());
  levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
}

int CostFunction::LevelIndex(Cost cost) const {
  auto it = std::lower_bound(levels_.begin(), levels_.end(), cost);
  if (it == levels_.end() || *it != cost) return -1;
  return static_cast<int>(it - levels_.begin());
}

std::size_t CostFunction::TupleIndex(const Assignment& a) const {
  std::size_t index = 0;
  for (std::size_t k = 0; k < scope_.size(); ++k) {
    index = index * radix_[k] + a.values[scope_[k]];
  }
  return index;
}

std::vector<Value> CostFunction::TupleAt(std::size_t index) const {
  std::vector<Value> tuple(scope_.size());
  for (std::size_t k = scope_.size(); k-- > 0;) {
    tuple[k] = static_cast<Value>(index % radix_[k]);
    index /= radix_[k];
  }
  return tuple;
}

bool HardConstraint::Forbids(const Assignment& a) const {
  for (const auto& t : forbidden_tuples) {
    bool match = true;
    for (std::size_t k = 0; k < scope.size() && match; ++k) {
      match = a.values[scope[k]] == t[k];
    }
    if (match) return true;
  }
  return false;
}

std::string ToString(const CostVector& v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out << ',';
    out << v[i];
  }
  out << ')';
  return out.str();
}

Wcsp::Wcsp(std::string name, std::vector<Value> domains,
           std::vector<HardConstraint> hard_constraints,
           std::vector<CostFunction> cost_functions, Cost top)
    : name_(std::move(name)),
      domains_(std::move(domains)),
      hard_constraints_(std::move(hard_constraints)),
      cost_functions_(std::move(cost_functions)),
      top_(top) {
  for (Value d : domains_) {
    if (d < 1) throw std::invalid_argument("domain size must be >= 1");
  }
  if (cost_functions_.empty()) {
    throw std::invalid_argument("instance needs at least one cost function");
  }
  for (const auto& c : hard_constraints_) {
    ValidateScope(c.scope, domains_, "hard constraint");
    for (const auto& t : c.forbidden_tuples) {
      if (t.size() != c.scope.size()) {
        throw std::invalid_argument("hard constraint: tuple arity mismatch");
      }
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] >= domains_[c.scope[k]]) {
          throw std::invalid_argument("hard constraint: value out of domain");
        }
      }
    }
  }
  for (std::size_t i = 0; i < cost_functions_.size(); ++i) {
    const CostFunction& f = cost_functions_[i];
    if (f.levels().empty()) {
      throw std::invalid_argument("cost function without sub-top cost");
    }
    HardConstraint lifted{f.scope(), {}, static_cast<int>(i)};
    for (std::size_t t = 0; t < f.table().size(); ++t) {
      if (f.table()[t] >= top_) lifted.forbidden_tuples.push_back(f.TupleAt(t));
    }
    if (!lifted.forbidden_tuples.empty()) {
      hard_constraints_.push_back(std::move(lifted));
    }
  }
}

Value Wcsp::max_domain_size() const {
  Value d = 0;
  for (Value v : domains_) d = std::max(d, v);
  return d;
}

CostVector Wcsp::MinVector() const {
  std::vector<Cost> c;
  c.reserve(cost_functions_.size());
  for (const auto& f : cost_functions_) c.push_back(f.min_level());
  return CostVector(std::move(c));
}

CostVector Wcsp::MaxVector() const {
  std::vector<Cost> c;
  c.reserve(cost_functions_.size());
  for (const auto& f : cost_functions_) c.push_back(f.max_level());
  return CostVector(std::move(c));
}

bool Wcsp::IsValidVector(const CostVector& v) const {
  if (v.size() != cost_functions_.size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cost_functions_[i].LevelIndex(v[i]) < 0) return false;
  }
  return true;
}

std::size_t Wcsp::AssignmentSpaceSize() const {
  std::size_t size = 1;
  for (Value d : domains_) {
    if (size > std::numeric_limits<std::size_t>::max() / d) {
      return std::numeric_limits<std::size_t>::max();
    }
    size *= d;
  }
  return size;
}

Cost CostOf(const CostVector& v) {
  Cost sum = 0;
  for (Cost c : v.components()) sum = CheckedAdd(sum, c);
  return sum;
}

bool Leq(const CostVector& u, const CostVector& v) {
  Require(u.size() == v.size(), "Leq: length mismatch");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > v[i]) return false;
  }
  return true;
}

bool Hits(const CostVector& u, std::span<const CostVector> pool) {
  for (const auto& k : pool) {
    if (Leq(u, k)) return false;
  }
  return true;
}

Evaluation Evaluate(const Wcsp& w, const Assignment& a) {
  Require(a.values.size() == static_cast<std::size_t>(w.num_vars()),
          "Evaluate: assignment length mismatch");
  Evaluation e;
  std::vector<Cost> per(w.num_functions());
  for (int i = 0; i < w.num_functions(); ++i) {
    per[i] = w.function(i).CostOf(a);
    if (per[i] >= w.top()) e.feasible = false;
    e.total = SaturatingAdd(e.total, per[i]);
  }
  for (const auto& c : w.hard_constraints()) {
    if (c.lifted_from < 0 && c.Forbids(a)) e.feasible = false;
  }
  if (e.feasible) e.total = CostOf(CostVector(per));
  e.per_function = CostVector(std::move(per));
  return e;
}

bool NextAssignment(const Wcsp& w, Assignment& a) {
  for (int x = w.num_vars(); x-- > 0;) {
    if (++a.values[x] < w.domains()[x]) return true;
    a.values[x] = 0;
  }
  return false;
}

}  // namespace ihs
