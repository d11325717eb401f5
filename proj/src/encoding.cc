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

#include <stdexcept>

namespace ihs {

CspEncoding::CspEncoding(const Wcsp& w, OracleBackend backend) : wcsp_(&w) {
  if (backend == OracleBackend::kCdcl) {
    solver_ = std::make_unique<CdclSolver>();
  } else {
    solver_ = std::make_unique<BacktrackingSolver>();
  }

  for (int x = 0; x < w.num_vars(); ++x) {
    value_var_offset_.push_back(solver_->num_vars());
    for (Value a = 0; a < w.domains()[x]; ++a) solver_->NewVar();
    stats_.value_literals += static_cast<int>(w.domains()[x]);
  }
  for (int i = 0; i < w.num_functions(); ++i) {
    selector_offset_.push_back(solver_->num_vars());
    for (int j = 1; j < w.function(i).num_levels(); ++j) solver_->NewVar();
    stats_.selectors += w.function(i).num_levels() - 1;
  }

  // Pairwise at-most-one; domains are small in practice.
  for (int x = 0; x < w.num_vars(); ++x) {
    const Value d = w.domains()[x];
    std::vector<Lit> at_least_one;
    for (Value a = 0; a < d; ++a) at_least_one.push_back(ValueLit(x, a));
    Add(std::move(at_least_one));
    for (Value a = 0; a < d; ++a) {
      for (Value b = a + 1; b < d; ++b) Add({~ValueLit(x, a), ~ValueLit(x, b)});
    }
    stats_.exactly_one_groups++;
  }

  for (const auto& c : w.hard_constraints()) {
    for (const auto& t : c.forbidden_tuples) {
      std::vector<Lit> clause;
      for (std::size_t k = 0; k < t.size(); ++k) {
        clause.push_back(~ValueLit(c.scope[k], t[k]));
      }
      Add(std::move(clause));
      stats_.hard_clauses++;
    }
  }

  for (int i = 0; i < w.num_functions(); ++i) {
    const CostFunction& f = w.function(i);
    for (std::size_t t = 0; t < f.table().size(); ++t) {
      const int j = f.LevelIndex(f.table()[t]);
      if (j < 1) continue;  // minimum level, or >= top (already hard)
      std::vector<Lit> clause{~Selector(i, j)};
      const std::vector<Value> tuple = f.TupleAt(t);
      for (std::size_t k = 0; k < tuple.size(); ++k) {
        clause.push_back(~ValueLit(f.scope()[k], tuple[k]));
      }
      Add(std::move(clause));
      stats_.guarded_clauses++;
    }
  }
}

void CspEncoding::Add(std::vector<Lit> clause) {
  solver_->AddClause(clause);
  clauses_.push_back(std::move(clause));
}

OracleVerdict CspEncoding::SolveUnderVector(const CostVector& v,
                                            const SolveLimits& limits) {
  const Wcsp& w = *wcsp_;
  Require(v.size() == static_cast<std::size_t>(w.num_functions()),
          "SolveUnderVector: vector length mismatch");
  ++num_calls_;
  std::vector<Lit> assumptions;
  for (int i = 0; i < w.num_functions(); ++i) {
    const auto& levels = w.function(i).levels();
    for (int j = 1; j < static_cast<int>(levels.size()); ++j) {
      if (levels[j] > v[i]) assumptions.push_back(Selector(i, j));
    }
  }
  // Below the minimum level nothing is allowed at all.
  for (int i = 0; i < w.num_functions(); ++i) {
    if (v[i] < w.function(i).min_level()) return {Verdict::kUnsat, std::nullopt};
  }

  OracleVerdict out;
  switch (solver_->Solve(assumptions, limits)) {
    case SatStatus::kUnsat:
      out.verdict = Verdict::kUnsat;
      return out;
    case SatStatus::kUnknown:
      out.verdict = Verdict::kBudgetExhausted;
      return out;
    case SatStatus::kSat:
      break;
  }
  Assignment a;
  a.values.resize(w.num_vars());
  for (int x = 0; x < w.num_vars(); ++x) {
    int chosen = -1;
    for (Value d = 0; d < w.domains()[x]; ++d) {
      if (solver_->ModelValue(ValueLit(x, d).var())) {
        if (chosen >= 0) throw std::logic_error("model assigns two values");
        chosen = static_cast<int>(d);
      }
    }
    if (chosen < 0) throw std::logic_error("model assigns no value");
    a.values[x] = static_cast<Value>(chosen);
  }
  out.verdict = Verdict::kSat;
  out.witness = std::move(a);
  return out;
}

void CspEncoding::WriteDimacs(std::ostream& out) const {
  out << "p cnf " << solver_->num_vars() << ' ' << clauses_.size() << '\n';
  for (const auto& clause : clauses_) {
    for (Lit l : clause) out << (l.negated() ? -(l.var() + 1) : l.var() + 1) << ' ';
    out << "0\n";
  }
}

}  // namespace ihs
