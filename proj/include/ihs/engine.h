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

// Implicit hitting set drivers.
//
//  - HsLb: each iteration hits the known cores optimally. The hitting
//    vector's cost is a lower bound; if its induced CSP is satisfiable the
//    search is over, otherwise it is grown into a maximal core.
//  - HsUb: each iteration asks only for some hitting vector cheaper than
//    the upper bound. Satisfiable ones lower the upper bound; when none
//    exists the upper bound is optimal.
//  - HsLub: both loops run concurrently over one CorePool, each picking up
//    the other's cores and bounds at the top of its next iteration.
//
// All three keep lb <= optimum <= ub at every point and finish with
// lb == ub unless stopped.

#ifndef IHS_ENGINE_H_
#define IHS_ENGINE_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "ihs/core_grow.h"
#include "ihs/encoding.h"
#include "ihs/model.h"
#include "ihs/wcsp_io.h"

namespace ihs {

// Cores and bounds shared by the workers of a solve, plus the trace.
//
// Thread-safe. Every mutation runs under one mutex with a short critical
// section; the stop flag is an atomic that long computations poll. Events
// are handed to the listener in the order they are recorded, under the
// same mutex, so the listener needs no locking of its own.
class CorePool {
 public:
  using Listener = std::function<void(const TraceEvent&)>;

  explicit CorePool(Listener listener = {});

  CorePool(const CorePool&) = delete;
  CorePool& operator=(const CorePool&) = delete;

  // Resets the trace clock; elapsed_ms is measured from here.
  void StartClock();
  std::int64_t ElapsedMs() const;

  // Appends a core and records a CORE event. Returns the new core count.
  std::size_t AddCore(const CostVector& core, TraceSource source);

  // Cores with index >= from, in insertion order.
  std::vector<CostVector> CoresSince(std::size_t from) const;
  std::vector<CostVector> cores() const { return CoresSince(0); }
  std::size_t num_cores() const;

  // Max-merge; records an LB event when the bound moves.
  void RaiseLowerBound(Cost value, TraceSource source);
  // Min-merge; records a UB event and keeps the witness when it improves.
  void OfferUpperBound(Cost value, const Assignment& witness, TraceSource source);

  Cost lb() const;
  Cost ub() const;
  std::optional<Assignment> best_witness() const;

  // lb >= ub. Closing also raises the stop flag.
  bool Closed() const;

  void RequestStop();
  bool StopRequested() const { return stop_.load(std::memory_order_relaxed); }
  const std::atomic<bool>& stop_flag() const { return stop_; }

  void Emit(TraceKind kind, Cost value, TraceSource source);
  std::vector<TraceEvent> trace() const;

 private:
  void EmitLocked(TraceKind kind, Cost value, TraceSource source);

  mutable std::mutex mu_;
  Listener listener_;
  std::chrono::steady_clock::time_point start_;
  std::vector<CostVector> cores_;
  Cost lb_ = 0;
  Cost ub_ = kInfiniteCost;
  std::optional<Assignment> witness_;
  std::vector<TraceEvent> trace_;
  std::atomic<bool> stop_{false};
};

// Adapts a pool to the BoundSink that MaximalCore reports solutions to.
class PoolBoundSink : public BoundSink {
 public:
  PoolBoundSink(CorePool& pool, TraceSource source) : pool_(pool), source_(source) {}
  Cost CurrentUpperBound() const override { return pool_.ub(); }
  void OfferSolution(const Assignment& witness, Cost cost) override {
    pool_.OfferUpperBound(cost, witness, source_);
  }

 private:
  CorePool& pool_;
  TraceSource source_;
};

enum class Algorithm { kLb, kUb, kLub };

struct SolveOptions {
  std::optional<std::chrono::milliseconds> time_limit;
  // Run the disjoint-core seeding phase before the main loop.
  bool seed_disjoint_cores = false;
  // Threads each loop's hitting-vector search may use.
  int lb_threads = 1;
  int ub_threads = 1;
  // Single thread, fixed tie-breaks: HsLub alternates the two loops'
  // iterations instead of running them concurrently.
  bool deterministic = false;
  // HsLub only: disable one side.
  bool run_lb_worker = true;
  bool run_ub_worker = true;
  // Random sub-millisecond pauses at synchronization points, to exercise
  // different interleavings in tests.
  std::optional<std::uint64_t> jitter_seed;
  OracleBackend backend = OracleBackend::kCdcl;
};

enum class SolveStatus { kOptimal, kTimeout, kInfeasible };

std::string_view ToString(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kTimeout;
  std::optional<Cost> optimum;
  Cost lb = 0;
  Cost ub = kInfiniteCost;
  std::optional<Assignment> witness;
  std::size_t cores_used = 0;
  std::int64_t lb_iterations = 0;
  std::int64_t ub_iterations = 0;
  std::int64_t wall_ms = 0;
};

SolveResult HsLb(const Wcsp& w, CorePool& pool, const SolveOptions& options = {});
SolveResult HsUb(const Wcsp& w, CorePool& pool, const SolveOptions& options = {});
SolveResult HsLub(const Wcsp& w, CorePool& pool, const SolveOptions& options = {});

SolveResult Solve(Algorithm algorithm, const Wcsp& w, CorePool& pool,
                  const SolveOptions& options = {});

// Repeatedly probes the vector with every function already used by a
// seeded core at its top level and the rest at their minimum. Each
// unsatisfiable probe is grown into a maximal core; the functions that core
// leaves below their top level become used. The cores' raisable sets are
// therefore pairwise disjoint and their cheapest raises add up to a lower
// bound, which is recorded with source SEED. Returns the number of cores
// added; stops at the first satisfiable probe.
int SeedDisjointCores(const Wcsp& w, CorePool& pool, CspEncoding& encoding);
int SeedDisjointCores(const Wcsp& w, CorePool& pool);

}  // namespace ihs

#endif  // IHS_ENGINE_H_
