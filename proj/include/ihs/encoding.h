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

// Propositional encoding of the CSP induced by a cost vector.
//
// Every (variable, value) pair gets a literal; each variable gets an
// at-least-one clause and pairwise at-most-one clauses. Forbidden tuples of
// hard constraints become plain clauses. For cost function i and each of its
// levels j >= 1 there is a selector s(i,j), and every tuple whose cost is
// levels[j] contributes the clause (~s(i,j) | ~tuple). Checking "f_i <= v_i
// for all i" then amounts to solving under the assumptions
// { s(i,j) : levels[j] > v_i }.
//
// The encoding owns mutable solver state and must be confined to one thread
// at a time; it can be moved between threads.

#ifndef IHS_ENCODING_H_
#define IHS_ENCODING_H_

#include <atomic>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "ihs/model.h"
#include "ihs/sat_solver.h"

namespace ihs {

enum class OracleBackend { kCdcl, kBacktracking };

enum class Verdict { kSat, kUnsat, kBudgetExhausted };

struct OracleVerdict {
  Verdict verdict = Verdict::kUnsat;
  std::optional<Assignment> witness;  // present iff kSat

  bool satisfiable() const { return verdict == Verdict::kSat; }
};

struct EncodingStats {
  int value_literals = 0;
  int exactly_one_groups = 0;
  int selectors = 0;
  int guarded_clauses = 0;
  int hard_clauses = 0;
};

class CspEncoding {
 public:
  explicit CspEncoding(const Wcsp& w,
                       OracleBackend backend = OracleBackend::kCdcl);

  CspEncoding(CspEncoding&&) noexcept = default;
  CspEncoding& operator=(CspEncoding&&) noexcept = delete;

  // Decides the CSP induced by v. `v` must have one component per cost
  // function; components need not be levels (any threshold works).
  OracleVerdict SolveUnderVector(const CostVector& v,
                                 const SolveLimits& limits = {});

  const Wcsp& wcsp() const { return *wcsp_; }
  const EncodingStats& stats() const { return stats_; }
  std::int64_t num_calls() const { return num_calls_; }

  // Literal of "variable x takes value a".
  Lit ValueLit(int x, Value a) const {
    return PosLit(value_var_offset_[x] + static_cast<int>(a));
  }
  // Selector of level index `j` (>= 1) of function `i`.
  Lit Selector(int i, int j) const { return PosLit(selector_offset_[i] + j - 1); }

  // Writes the base clauses (no selectors asserted) in DIMACS CNF.
  void WriteDimacs(std::ostream& out) const;

 private:
  void Add(std::vector<Lit> clause);

  const Wcsp* wcsp_;
  std::unique_ptr<SatSolver> solver_;
  std::vector<int> value_var_offset_;
  std::vector<int> selector_offset_;
  std::vector<std::vector<Lit>> clauses_;  // kept for WriteDimacs
  EncodingStats stats_;
  std::int64_t num_calls_ = 0;
};

}  // namespace ihs

#endif  // IHS_ENCODING_H_
