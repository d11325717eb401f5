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

// Incremental propositional solvers with assumption literals.
//
// CdclSolver is a conflict-driven clause learning solver in the MiniSat
// lineage: two watched literals, first-UIP learning with basic clause
// minimization, VSIDS branching with phase saving, Luby restarts and
// activity-based learnt clause reduction. Learnt clauses survive across
// Solve() calls, which is what makes repeated probing under different
// assumption sets cheap.
//
// BacktrackingSolver is a deliberately naive chronological search kept as a
// reference for differential testing.

#ifndef IHS_SAT_SOLVER_H_
#define IHS_SAT_SOLVER_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace ihs {

// A literal is 2 * var + (negated ? 1 : 0).
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(int var, bool negated) : code_(2 * var + (negated ? 1 : 0)) {}

  static constexpr Lit FromCode(int code) {
    Lit l;
    l.code_ = code;
    return l;
  }

  constexpr int var() const { return code_ >> 1; }
  constexpr bool negated() const { return code_ & 1; }
  constexpr int code() const { return code_; }
  constexpr Lit operator~() const { return FromCode(code_ ^ 1); }

  friend constexpr bool operator==(Lit, Lit) = default;

 private:
  int code_ = -2;
};

inline constexpr Lit PosLit(int var) { return Lit(var, false); }
inline constexpr Lit NegLit(int var) { return Lit(var, true); }

enum class SatStatus { kSat, kUnsat, kUnknown };

struct SolveLimits {
  // Stop with kUnknown after this many conflicts; negative means no limit.
  std::int64_t conflict_limit = -1;
  // Polled during search; kUnknown is returned once it reads true.
  const std::atomic<bool>* interrupt = nullptr;
};

class SatSolver {
 public:
  virtual ~SatSolver() = default;

  virtual int NewVar() = 0;
  virtual int num_vars() const = 0;

  // Returns false once the clause set is known to be unsatisfiable without
  // assumptions.
  virtual bool AddClause(std::span<const Lit> clause) = 0;

  virtual SatStatus Solve(std::span<const Lit> assumptions,
                          const SolveLimits& limits = {}) = 0;

  // Truth value of `var` in the model of the last kSat answer.
  virtual bool ModelValue(int var) const = 0;
};

class CdclSolver : public SatSolver {
 public:
  CdclSolver();
  ~CdclSolver() override;
  CdclSolver(CdclSolver&&) noexcept;
  CdclSolver& operator=(CdclSolver&&) noexcept;

  int NewVar() override;
  int num_vars() const override;
  bool AddClause(std::span<const Lit> clause) override;
  SatStatus Solve(std::span<const Lit> assumptions,
                  const SolveLimits& limits = {}) override;
  bool ModelValue(int var) const override;

  std::int64_t num_conflicts() const;
  std::int64_t num_learnts() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class BacktrackingSolver : public SatSolver {
 public:
  int NewVar() override;
  int num_vars() const override { return num_vars_; }
  bool AddClause(std::span<const Lit> clause) override;
  SatStatus Solve(std::span<const Lit> assumptions,
                  const SolveLimits& limits = {}) override;
  bool ModelValue(int var) const override { return model_[var] > 0; }

 private:
  bool Search(int var, std::vector<std::int8_t>& values,
              const SolveLimits& limits, std::int64_t& steps, bool& aborted);
  bool Falsified(int var, const std::vector<std::int8_t>& values) const;

  int num_vars_ = 0;
  bool has_empty_clause_ = false;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<int>> occurrences_;  // var -> clause indices
  std::vector<std::int8_t> model_;
};

}  // namespace ihs

#endif  // IHS_SAT_SOLVER_H_
