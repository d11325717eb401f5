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

#include "ihs/sat_solver.h"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace ihs {

namespace {

constexpr int kNoReason = -1;

// Finite subsequences of the Luby sequence scaled by `y`.
double Luby(double y, int x) {
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    seq++;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    seq--;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

struct CdclSolver::Impl {
  struct Clause {
    std::vector<Lit> lits;
    double activity = 0;
    bool learnt = false;
    bool removed = false;
  };

  struct Watcher {
    int cref;
    Lit blocker;
  };

  // Max-heap of unassigned variables ordered by activity.
  class VarOrder {
   public:
    explicit VarOrder(const std::vector<double>& activity) : activity_(activity) {}

    bool Contains(int v) const {
      return v < static_cast<int>(index_.size()) && index_[v] >= 0;
    }
    bool Empty() const { return heap_.empty(); }

    void Insert(int v) {
      if (v >= static_cast<int>(index_.size())) index_.resize(v + 1, -1);
      if (Contains(v)) return;
      index_[v] = static_cast<int>(heap_.size());
      heap_.push_back(v);
      Up(index_[v]);
    }

    void Increased(int v) {
      if (Contains(v)) Up(index_[v]);
    }

    int PopMax() {
      int top = heap_[0];
      heap_[0] = heap_.back();
      index_[heap_[0]] = 0;
      index_[top] = -1;
      heap_.pop_back();
      if (!heap_.empty()) Down(0);
      return top;
    }

   private:
    bool Less(int a, int b) const { return activity_[a] > activity_[b]; }

    void Up(int i) {
      int v = heap_[i];
      while (i > 0) {
        int parent = (i - 1) >> 1;
        if (!Less(v, heap_[parent])) break;
        heap_[i] = heap_[parent];
        index_[heap_[i]] = i;
        i = parent;
      }
      heap_[i] = v;
      index_[v] = i;
    }

    void Down(int i) {
      int v = heap_[i];
      const int n = static_cast<int>(heap_.size());
      while (2 * i + 1 < n) {
        int child = 2 * i + 1;
        if (child + 1 < n && Less(heap_[child + 1], heap_[child])) child++;
        if (!Less(heap_[child], v)) break;
        heap_[i] = heap_[child];
        index_[heap_[i]] = i;
        i = child;
      }
      heap_[i] = v;
      index_[v] = i;
    }

    const std::vector<double>& activity_;
    std::vector<int> heap_;
    std::vector<int> index_;
  };

  Impl() : order(activity) {}

  // +1 true, -1 false, 0 unassigned.
  int ValueOf(Lit l) const {
    int v = assigns[l.var()];
    return l.negated() ? -v : v;
  }

  int DecisionLevel() const { return static_cast<int>(trail_lim.size()); }

  void Enqueue(Lit l, int reason) {
    assigns[l.var()] = l.negated() ? -1 : 1;
    level[l.var()] = DecisionLevel();
    reasons[l.var()] = reason;
    trail.push_back(l);
  }

  void CancelUntil(int target) {
    if (DecisionLevel() <= target) return;
    for (int i = static_cast<int>(trail.size()); i-- > trail_lim[target];) {
      int v = trail[i].var();
      phase[v] = assigns[v] < 0;
      assigns[v] = 0;
      reasons[v] = kNoReason;
      order.Insert(v);
    }
    trail.resize(trail_lim[target]);
    trail_lim.resize(target);
    qhead = static_cast<int>(trail.size());
  }

  void Attach(int cref) {
    const Clause& c = clauses[cref];
    watches[(~c.lits[0]).code()].push_back({cref, c.lits[1]});
    watches[(~c.lits[1]).code()].push_back({cref, c.lits[0]});
  }

  int StoreClause(std::vector<Lit> lits, bool learnt) {
    int cref;
    if (!free_refs.empty()) {
      cref = free_refs.back();
      free_refs.pop_back();
    } else {
      cref = static_cast<int>(clauses.size());
      clauses.emplace_back();
    }
    Clause& c = clauses[cref];
    c.lits = std::move(lits);
    c.learnt = learnt;
    c.removed = false;
    c.activity = 0;
    return cref;
  }

  int Propagate() {
    int conflict = kNoReason;
    while (qhead < static_cast<int>(trail.size())) {
      const Lit p = trail[qhead++];
      const Lit false_lit = ~p;
      std::vector<Watcher>& ws = watches[p.code()];
      std::size_t i = 0;
      std::size_t j = 0;
      const std::size_t n = ws.size();
      while (i < n) {
        const Watcher w = ws[i];
        if (ValueOf(w.blocker) > 0) {
          ws[j++] = ws[i++];
          continue;
        }
        Clause& c = clauses[w.cref];
        if (c.removed) {
          i++;
          continue;
        }
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        i++;
        const Lit first = c.lits[0];
        if (first != w.blocker && ValueOf(first) > 0) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k) {
          if (ValueOf(c.lits[k]) >= 0) {
            std::swap(c.lits[1], c.lits[k]);
            watches[(~c.lits[1]).code()].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (ValueOf(first) < 0) {
          conflict = w.cref;
          qhead = static_cast<int>(trail.size());
          while (i < n) ws[j++] = ws[i++];
        } else {
          Enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void BumpVar(int v) {
    if ((activity[v] += var_inc) > 1e100) {
      for (double& a : activity) a *= 1e-100;
      var_inc *= 1e-100;
    }
    order.Increased(v);
  }

  void BumpClause(Clause& c) {
    if ((c.activity += cla_inc) > 1e20) {
      for (int cref : learnts) clauses[cref].activity *= 1e-20;
      cla_inc *= 1e-20;
    }
  }

  // First-UIP learning. Fills `learnt` with the asserting literal first and
  // a literal of the backjump level second.
  int Analyze(int conflict, std::vector<Lit>& learnt) {
    learnt.clear();
    learnt.push_back(Lit());
    int path_count = 0;
    Lit p;
    bool have_p = false;
    int index = static_cast<int>(trail.size()) - 1;
    int cref = conflict;
    do {
      assert(cref != kNoReason);
      Clause& c = clauses[cref];
      if (c.learnt) BumpClause(c);
      for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
        const Lit q = c.lits[k];
        const int v = q.var();
        if (!seen[v] && level[v] > 0) {
          BumpVar(v);
          seen[v] = 1;
          if (level[v] >= DecisionLevel()) {
            path_count++;
          } else {
            learnt.push_back(q);
          }
        }
      }
      while (!seen[trail[index--].var()]) {
      }
      p = trail[index + 1];
      have_p = true;
      cref = reasons[p.var()];
      seen[p.var()] = 0;
      path_count--;
    } while (path_count > 0);
    learnt[0] = ~p;

    // Drop literals implied by the rest of the clause through one reason.
    to_clear.assign(learnt.begin(), learnt.end());
    std::size_t kept = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      const int r = reasons[learnt[k].var()];
      bool keep = r == kNoReason;
      if (!keep) {
        const Clause& c = clauses[r];
        for (std::size_t m = 1; m < c.lits.size(); ++m) {
          const int v = c.lits[m].var();
          if (!seen[v] && level[v] > 0) {
            keep = true;
            break;
          }
        }
      }
      if (keep) learnt[kept++] = learnt[k];
    }
    learnt.resize(kept);
    for (Lit l : to_clear) seen[l.var()] = 0;

    int backjump = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k) {
        if (level[learnt[k].var()] > level[learnt[max_i].var()]) max_i = k;
      }
      std::swap(learnt[1], learnt[max_i]);
      backjump = level[learnt[1].var()];
    }
    return backjump;
  }

  bool Locked(int cref) const {
    const Clause& c = clauses[cref];
    const int v = c.lits[0].var();
    return reasons[v] == cref && ValueOf(c.lits[0]) > 0;
  }

  void RemoveClause(int cref) {
    Clause& c = clauses[cref];
    c.removed = true;
    c.lits.clear();
    c.lits.shrink_to_fit();
    pending_free.push_back(cref);
  }

  void ReduceLearnts() {
    std::sort(learnts.begin(), learnts.end(), [this](int a, int b) {
      const Clause& ca = clauses[a];
      const Clause& cb = clauses[b];
      if ((ca.lits.size() > 2) != (cb.lits.size() > 2)) return ca.lits.size() > 2;
      return ca.activity < cb.activity;
    });
    const std::size_t half = learnts.size() / 2;
    const double extra_lim = cla_inc / static_cast<double>(learnts.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < learnts.size(); ++i) {
      const int cref = learnts[i];
      const Clause& c = clauses[cref];
      if (c.lits.size() > 2 && !Locked(cref) &&
          (i < half || c.activity < extra_lim)) {
        RemoveClause(cref);
      } else {
        learnts[j++] = cref;
      }
    }
    learnts.resize(j);
    PurgeWatches();
  }

  // Drops watchers of removed clauses so their slots can be reused.
  void PurgeWatches() {
    for (auto& ws : watches) {
      std::erase_if(ws, [this](const Watcher& w) { return clauses[w.cref].removed; });
    }
    free_refs.insert(free_refs.end(), pending_free.begin(), pending_free.end());
    pending_free.clear();
  }

  Lit PickBranchLit() {
    while (!order.Empty()) {
      int v = order.PopMax();
      if (assigns[v] == 0) return Lit(v, phase[v]);
    }
    return Lit();
  }

  bool Interrupted(const SolveLimits& limits) const {
    if (limits.interrupt != nullptr &&
        limits.interrupt->load(std::memory_order_relaxed)) {
      return true;
    }
    return limits.conflict_limit >= 0 &&
           conflicts - conflicts_at_start >= limits.conflict_limit;
  }

  SatStatus Search(int conflict_budget, std::span<const Lit> assumptions,
                   const SolveLimits& limits) {
    int local_conflicts = 0;
    std::vector<Lit> learnt;
    std::int64_t decisions = 0;
    for (;;) {
      const int conflict = Propagate();
      if (conflict != kNoReason) {
        conflicts++;
        local_conflicts++;
        if (DecisionLevel() == 0) {
          ok = false;
          return SatStatus::kUnsat;
        }
        const int backjump = Analyze(conflict, learnt);
        CancelUntil(backjump);
        if (learnt.size() == 1) {
          Enqueue(learnt[0], kNoReason);
        } else {
          const int cref = StoreClause(learnt, true);
          learnts.push_back(cref);
          Attach(cref);
          BumpClause(clauses[cref]);
          Enqueue(learnt[0], cref);
        }
        var_inc /= 0.95;
        cla_inc /= 0.999;
        if (Interrupted(limits)) {
          CancelUntil(0);
          return SatStatus::kUnknown;
        }
        continue;
      }

      if (local_conflicts >= conflict_budget) {
        CancelUntil(0);
        return SatStatus::kUnknown;
      }
      if ((++decisions & 1023) == 0 && Interrupted(limits)) {
        CancelUntil(0);
        return SatStatus::kUnknown;
      }
      if (static_cast<double>(learnts.size()) -
              static_cast<double>(trail.size()) >= max_learnts) {
        ReduceLearnts();
      }

      Lit next;
      bool have_next = false;
      while (DecisionLevel() < static_cast<int>(assumptions.size())) {
        const Lit a = assumptions[DecisionLevel()];
        const int value = ValueOf(a);
        if (value > 0) {
          trail_lim.push_back(static_cast<int>(trail.size()));
        } else if (value < 0) {
          assumptions_failed = true;
          return SatStatus::kUnsat;
        } else {
          next = a;
          have_next = true;
          break;
        }
      }
      if (!have_next) {
        next = PickBranchLit();
        if (next.code() < 0) return SatStatus::kSat;
      }
      trail_lim.push_back(static_cast<int>(trail.size()));
      Enqueue(next, kNoReason);
    }
  }

  std::vector<Clause> clauses;
  std::vector<int> learnts;
  std::vector<int> free_refs;
  std::vector<int> pending_free;
  std::vector<std::vector<Watcher>> watches;
  std::vector<std::int8_t> assigns;
  std::vector<int> level;
  std::vector<int> reasons;
  std::vector<double> activity;
  std::vector<bool> phase;  // true = negative
  std::vector<char> seen;
  std::vector<Lit> trail;
  std::vector<int> trail_lim;
  std::vector<Lit> to_clear;
  std::vector<std::int8_t> model;
  VarOrder order;
  int qhead = 0;
  double var_inc = 1;
  double cla_inc = 1;
  double max_learnts = 0;
  bool ok = true;
  bool assumptions_failed = false;
  std::int64_t conflicts = 0;
  std::int64_t conflicts_at_start = 0;
  int num_problem_clauses = 0;
};

CdclSolver::CdclSolver() : impl_(std::make_unique<Impl>()) {}
CdclSolver::~CdclSolver() = default;
CdclSolver::CdclSolver(CdclSolver&&) noexcept = default;
CdclSolver& CdclSolver::operator=(CdclSolver&&) noexcept = default;

int CdclSolver::NewVar() {
  Impl& s = *impl_;
  const int v = static_cast<int>(s.assigns.size());
  s.assigns.push_back(0);
  s.level.push_back(0);
  s.reasons.push_back(kNoReason);
  s.activity.push_back(0);
  s.phase.push_back(true);
  s.seen.push_back(0);
  s.watches.emplace_back();
  s.watches.emplace_back();
  s.order.Insert(v);
  return v;
}

int CdclSolver::num_vars() const {
  return static_cast<int>(impl_->assigns.size());
}

bool CdclSolver::AddClause(std::span<const Lit> clause) {
  Impl& s = *impl_;
  if (!s.ok) return false;
  std::vector<Lit> lits(clause.begin(), clause.end());
  std::sort(lits.begin(), lits.end(),
            [](Lit a, Lit b) { return a.code() < b.code(); });
  std::size_t j = 0;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    const Lit l = lits[i];
    const int value = s.ValueOf(l);
    if (value > 0 || (i > 0 && l == ~lits[i - 1])) return true;
    if (value < 0 || (j > 0 && lits[j - 1] == l)) continue;
    lits[j++] = l;
  }
  lits.resize(j);
  if (lits.empty()) {
    s.ok = false;
    return false;
  }
  if (lits.size() == 1) {
    s.Enqueue(lits[0], kNoReason);
    s.ok = s.Propagate() == kNoReason;
    return s.ok;
  }
  const int cref = s.StoreClause(std::move(lits), false);
  s.Attach(cref);
  s.num_problem_clauses++;
  return true;
}

SatStatus CdclSolver::Solve(std::span<const Lit> assumptions,
                            const SolveLimits& limits) {
  Impl& s = *impl_;
  if (!s.ok) return SatStatus::kUnsat;
  s.conflicts_at_start = s.conflicts;
  s.assumptions_failed = false;
  s.max_learnts = std::max(2000.0, s.num_problem_clauses / 3.0);
  SatStatus status = SatStatus::kUnknown;
  for (int restart = 0; status == SatStatus::kUnknown; ++restart) {
    const int budget = static_cast<int>(Luby(2, restart) * 100);
    status = s.Search(budget, assumptions, limits);
    if (status == SatStatus::kUnknown && s.Interrupted(limits)) break;
    s.max_learnts *= 1.05;
  }
  if (status == SatStatus::kSat) s.model = s.assigns;
  s.CancelUntil(0);
  return status;
}

bool CdclSolver::ModelValue(int var) const { return impl_->model[var] > 0; }

std::int64_t CdclSolver::num_conflicts() const { return impl_->conflicts; }
std::int64_t CdclSolver::num_learnts() const {
  return static_cast<std::int64_t>(impl_->learnts.size());
}

int BacktrackingSolver::NewVar() {
  occurrences_.emplace_back();
  model_.push_back(0);
  return num_vars_++;
}

bool BacktrackingSolver::AddClause(std::span<const Lit> clause) {
  if (clause.empty()) {
    has_empty_clause_ = true;
    return false;
  }
  const int index = static_cast<int>(clauses_.size());
  clauses_.emplace_back(clause.begin(), clause.end());
  int max_var = 0;
  for (Lit l : clause) max_var = std::max(max_var, l.var());
  // A clause is checked once its highest variable is assigned.
  occurrences_[max_var].push_back(index);
  return !has_empty_clause_;
}

bool BacktrackingSolver::Falsified(int var,
                                   const std::vector<std::int8_t>& values) const {
  for (int index : occurrences_[var]) {
    bool falsified = true;
    for (Lit l : clauses_[index]) {
      const int v = values[l.var()];
      if ((l.negated() ? -v : v) >= 0) {
        falsified = false;
        break;
      }
    }
    if (falsified) return true;
  }
  return false;
}

bool BacktrackingSolver::Search(int var, std::vector<std::int8_t>& values,
                                const SolveLimits& limits, std::int64_t& steps,
                                bool& aborted) {
  if (var == num_vars_) return true;
  if ((++steps & 1023) == 0 && limits.interrupt != nullptr &&
      limits.interrupt->load(std::memory_order_relaxed)) {
    aborted = true;
    return false;
  }
  const std::int8_t fixed = values[var];
  for (std::int8_t candidate : {std::int8_t{-1}, std::int8_t{1}}) {
    if (fixed != 0 && candidate != fixed) continue;
    values[var] = candidate;
    if (!Falsified(var, values) && Search(var + 1, values, limits, steps, aborted)) {
      return true;
    }
    if (aborted) break;
  }
  values[var] = fixed;
  return false;
}

SatStatus BacktrackingSolver::Solve(std::span<const Lit> assumptions,
                                    const SolveLimits& limits) {
  if (has_empty_clause_) return SatStatus::kUnsat;
  std::vector<std::int8_t> values(num_vars_, 0);
  for (Lit a : assumptions) {
    const std::int8_t want = a.negated() ? -1 : 1;
    if (values[a.var()] == -want) return SatStatus::kUnsat;
    values[a.var()] = want;
  }
  std::int64_t steps = 0;
  bool aborted = false;
  if (Search(0, values, limits, steps, aborted)) {
    model_ = values;
    return SatStatus::kSat;
  }
  return aborted ? SatStatus::kUnknown : SatStatus::kUnsat;
}

}  // namespace ihs
