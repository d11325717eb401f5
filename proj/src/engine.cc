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

#include "ihs/engine.h"

#include <condition_variable>
#include <exception>
#include <stdexcept>
#include <thread>

#include "ihs/bruteforce.h"
#include "ihs/hitting.h"

namespace ihs {

CorePool::CorePool(Listener listener)
    : listener_(std::move(listener)), start_(std::chrono::steady_clock::now()) {}

void CorePool::StartClock() {
  std::lock_guard<std::mutex> lock(mu_);
  start_ = std::chrono::steady_clock::now();
}

std::int64_t CorePool::ElapsedMs() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - start_)
      .count();
}

void CorePool::EmitLocked(TraceKind kind, Cost value, TraceSource source) {
  TraceEvent e{ElapsedMs(), kind, value, source};
  // Clock reads and mutex acquisition can race; keep the file ordered.
  if (!trace_.empty() && e.elapsed_ms < trace_.back().elapsed_ms) {
    e.elapsed_ms = trace_.back().elapsed_ms;
  }
  trace_.push_back(e);
  if (listener_) listener_(e);
}

void CorePool::Emit(TraceKind kind, Cost value, TraceSource source) {
  std::lock_guard<std::mutex> lock(mu_);
  EmitLocked(kind, value, source);
}

std::size_t CorePool::AddCore(const CostVector& core, TraceSource source) {
  std::lock_guard<std::mutex> lock(mu_);
  cores_.push_back(core);
  EmitLocked(TraceKind::kCore, cores_.size(), source);
  return cores_.size();
}

std::vector<CostVector> CorePool::CoresSince(std::size_t from) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (from >= cores_.size()) return {};
  return {cores_.begin() + static_cast<std::ptrdiff_t>(from), cores_.end()};
}

std::size_t CorePool::num_cores() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cores_.size();
}

void CorePool::RaiseLowerBound(Cost value, TraceSource source) {
  std::lock_guard<std::mutex> lock(mu_);
  if (value <= lb_) return;
  if (value > ub_) throw std::logic_error("lower bound would exceed upper bound");
  lb_ = value;
  EmitLocked(TraceKind::kLb, value, source);
  if (lb_ >= ub_) stop_.store(true);
}

void CorePool::OfferUpperBound(Cost value, const Assignment& witness, TraceSource source) {
  std::lock_guard<std::mutex> lock(mu_);
  if (value >= ub_) return;
  if (value < lb_) throw std::logic_error("upper bound would drop below lower bound");
  ub_ = value;
  witness_ = witness;
  EmitLocked(TraceKind::kUb, value, source);
  if (lb_ >= ub_) stop_.store(true);
}

Cost CorePool::lb() const {
  std::lock_guard<std::mutex> lock(mu_);
  return lb_;
}

Cost CorePool::ub() const {
  std::lock_guard<std::mutex> lock(mu_);
  return ub_;
}

std::optional<Assignment> CorePool::best_witness() const {
  std::lock_guard<std::mutex> lock(mu_);
  return witness_;
}

bool CorePool::Closed() const {
  std::lock_guard<std::mutex> lock(mu_);
  return lb_ >= ub_;
}

void CorePool::RequestStop() { stop_.store(true); }

std::vector<TraceEvent> CorePool::trace() const {
  std::lock_guard<std::mutex> lock(mu_);
  return trace_;
}

std::string_view ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "OPTIMAL";
    case SolveStatus::kTimeout:
      return "TIMEOUT";
    case SolveStatus::kInfeasible:
      return "INFEASIBLE";
  }
  return "?";
}

namespace {

// Raises the pool's stop flag when the time limit passes.
class Watchdog {
 public:
  Watchdog(CorePool& pool, std::optional<std::chrono::milliseconds> limit) {
    if (!limit) return;
    deadline_ = std::chrono::steady_clock::now() + *limit;
    if (limit->count() <= 0) {
      pool.RequestStop();
      return;
    }
    thread_ = std::thread([this, &pool] {
      std::unique_lock<std::mutex> lock(mu_);
      if (!cv_.wait_until(lock, deadline_, [this] { return cancelled_; })) {
        pool.RequestStop();
      }
    });
  }

  ~Watchdog() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      cancelled_ = true;
    }
    cv_.notify_all();
    if (thread_.joinable()) thread_.join();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  bool cancelled_ = false;
  std::chrono::steady_clock::time_point deadline_;
  std::thread thread_;
};

class Jitter {
 public:
  explicit Jitter(std::optional<std::uint64_t> seed) {
    if (seed) rng_.emplace(*seed);
  }

  void Pause() {
    if (!rng_) return;
    const auto r = rng_->Below(4);
    if (r == 0) return;
    if (r == 1) {
      std::this_thread::yield();
    } else {
      std::this_thread::sleep_for(std::chrono::microseconds(rng_->Below(40)));
    }
  }

 private:
  std::optional<SplitMix64> rng_;
};

enum class Outcome { kContinue, kClosed, kStopped };

// One HS loop (either flavour) as a sequence of Step() calls.
class LoopWorker {
 public:
  enum class Role { kLb, kUb };

  LoopWorker(const Wcsp& w, CorePool& pool, CspEncoding encoding, Role role,
             int threads, std::optional<std::uint64_t> jitter_seed)
      : w_(w),
        pool_(pool),
        encoding_(std::move(encoding)),
        role_(role),
        source_(role == Role::kLb ? TraceSource::kLbWorker : TraceSource::kUbWorker),
        sink_(pool, source_),
        hitting_(HittingProblem::ForInstance(w)),
        threads_(threads),
        jitter_(jitter_seed) {}

  Outcome Step() {
    if (pool_.StopRequested()) return Halted();
    jitter_.Pause();
    for (const auto& core : pool_.CoresSince(synced_)) {
      hitting_.AddCore(core);
      ++synced_;
    }
    const Cost ub = pool_.ub();
    HittingOptions options;
    options.bound = ub;
    options.threads = threads_;
    options.stop = &pool_.stop_flag();
    const HittingResult r = role_ == Role::kLb
                                ? MinCostHittingVector(hitting_, options)
                                : CostBoundedHittingVector(hitting_, ub, options);
    ++iterations_;
    switch (r.status) {
      case HittingStatus::kStopped:
        return Halted();
      case HittingStatus::kSaturated:
        // A core at every top level contradicts the feasibility check.
        if (role_ == Role::kLb || ub == kInfiniteCost) {
          throw std::logic_error("core pool saturated on a feasible instance");
        }
        [[fallthrough]];
      case HittingStatus::kNoneBelowBound:
        // Nothing hits the cores below ub, so ub is optimal.
        pool_.RaiseLowerBound(ub, source_);
        return Outcome::kClosed;
      case HittingStatus::kFound:
        break;
    }
    if (role_ == Role::kLb) {
      pool_.RaiseLowerBound(r.cost, source_);
      if (pool_.Closed()) return Outcome::kClosed;
    }

    jitter_.Pause();
    const SolveLimits limits{-1, &pool_.stop_flag()};
    OracleVerdict verdict = encoding_.SolveUnderVector(r.vector, limits);
    switch (verdict.verdict) {
      case Verdict::kBudgetExhausted:
        return Halted();
      case Verdict::kSat:
        pool_.OfferUpperBound(Evaluate(w_, *verdict.witness).total, *verdict.witness, source_);
        break;
      case Verdict::kUnsat: {
        GrowResult grown = MaximalCore(encoding_, r.vector, &sink_, &pool_.stop_flag());
        if (grown.interrupted) return Halted();
        jitter_.Pause();
        pool_.AddCore(grown.core, source_);
        break;
      }
    }
    return pool_.Closed() ? Outcome::kClosed : Outcome::kContinue;
  }

  std::int64_t iterations() const { return iterations_; }

 private:
  Outcome Halted() const { return pool_.Closed() ? Outcome::kClosed : Outcome::kStopped; }

  const Wcsp& w_;
  CorePool& pool_;
  CspEncoding encoding_;
  Role role_;
  TraceSource source_;
  PoolBoundSink sink_;
  HittingProblem hitting_;
  int threads_;
  Jitter jitter_;
  std::size_t synced_ = 0;
  std::int64_t iterations_ = 0;
};

// Shared start-up: trace clock, initial LB event, feasibility check under the
// all-top vector, optional seeding. Returns false if the solve is already
// decided (infeasible or stopped).
enum class Preflight { kProceed, kInfeasible, kStopped };

Preflight Prepare(const Wcsp& w, CorePool& pool, CspEncoding& encoding,
                  const SolveOptions& options) {
  pool.StartClock();
  pool.Emit(TraceKind::kLb, pool.lb(), TraceSource::kMain);
  const SolveLimits limits{-1, &pool.stop_flag()};
  OracleVerdict v = encoding.SolveUnderVector(w.MaxVector(), limits);
  if (v.verdict == Verdict::kUnsat) return Preflight::kInfeasible;
  if (v.verdict == Verdict::kBudgetExhausted) return Preflight::kStopped;
  pool.OfferUpperBound(Evaluate(w, *v.witness).total, *v.witness, TraceSource::kMain);
  if (options.seed_disjoint_cores && !pool.StopRequested()) {
    SeedDisjointCores(w, pool, encoding);
  }
  return Preflight::kProceed;
}

SolveResult Finish(CorePool& pool, Preflight preflight, std::int64_t lb_iterations,
                   std::int64_t ub_iterations) {
  SolveResult r;
  r.lb = pool.lb();
  r.ub = pool.ub();
  r.witness = pool.best_witness();
  r.cores_used = pool.num_cores();
  r.lb_iterations = lb_iterations;
  r.ub_iterations = ub_iterations;
  if (preflight == Preflight::kInfeasible) {
    r.status = SolveStatus::kInfeasible;
  } else if (r.lb >= r.ub && r.witness) {
    r.status = SolveStatus::kOptimal;
    r.optimum = r.ub;
    pool.Emit(TraceKind::kDone, r.ub, TraceSource::kMain);
  } else {
    r.status = SolveStatus::kTimeout;
  }
  r.wall_ms = pool.ElapsedMs();
  return r;
}

int Threads(int requested, const SolveOptions& options) {
  return options.deterministic ? 1 : std::max(1, requested);
}

SolveResult RunSingle(const Wcsp& w, CorePool& pool, const SolveOptions& options,
                      LoopWorker::Role role) {
  Watchdog watchdog(pool, options.time_limit);
  CspEncoding encoding(w, options.backend);
  const Preflight preflight = Prepare(w, pool, encoding, options);
  if (preflight != Preflight::kProceed) return Finish(pool, preflight, 0, 0);

  const int threads =
      Threads(role == LoopWorker::Role::kLb ? options.lb_threads : options.ub_threads, options);
  LoopWorker worker(w, pool, std::move(encoding), role, threads, options.jitter_seed);
  Outcome outcome = Outcome::kContinue;
  while (outcome == Outcome::kContinue) outcome = worker.Step();
  const bool lb_role = role == LoopWorker::Role::kLb;
  return Finish(pool, preflight, lb_role ? worker.iterations() : 0,
                lb_role ? 0 : worker.iterations());
}

}  // namespace

SolveResult HsLb(const Wcsp& w, CorePool& pool, const SolveOptions& options) {
  return RunSingle(w, pool, options, LoopWorker::Role::kLb);
}

SolveResult HsUb(const Wcsp& w, CorePool& pool, const SolveOptions& options) {
  return RunSingle(w, pool, options, LoopWorker::Role::kUb);
}

SolveResult HsLub(const Wcsp& w, CorePool& pool, const SolveOptions& options) {
  Require(options.run_lb_worker || options.run_ub_worker, "HsLub: both workers disabled");
  Watchdog watchdog(pool, options.time_limit);
  CspEncoding lb_encoding(w, options.backend);
  const Preflight preflight = Prepare(w, pool, lb_encoding, options);
  if (preflight != Preflight::kProceed) return Finish(pool, preflight, 0, 0);

  std::vector<LoopWorker> workers;
  workers.reserve(2);
  if (options.run_lb_worker) {
    workers.emplace_back(w, pool, std::move(lb_encoding), LoopWorker::Role::kLb,
                         Threads(options.lb_threads, options), options.jitter_seed);
  }
  if (options.run_ub_worker) {
    std::optional<std::uint64_t> seed;
    if (options.jitter_seed) seed = *options.jitter_seed ^ 0x5DEECE66DULL;
    workers.emplace_back(w, pool,
                         options.run_lb_worker ? CspEncoding(w, options.backend)
                                               : std::move(lb_encoding),
                         LoopWorker::Role::kUb, Threads(options.ub_threads, options), seed);
  }

  if (options.deterministic) {
    // Round-robin one iteration at a time until every worker is done.
    std::vector<bool> active(workers.size(), true);
    for (bool any = true; any;) {
      any = false;
      for (std::size_t k = 0; k < workers.size(); ++k) {
        if (!active[k]) continue;
        active[k] = workers[k].Step() == Outcome::kContinue;
        any = any || active[k];
      }
    }
  } else {
    std::vector<std::exception_ptr> errors(workers.size());
    {
      std::vector<std::jthread> threads;
      for (std::size_t k = 0; k < workers.size(); ++k) {
        threads.emplace_back([&, k] {
          try {
            while (workers[k].Step() == Outcome::kContinue) {
            }
            // A finished worker must not leave the other one running.
            pool.RequestStop();
          } catch (...) {
            errors[k] = std::current_exception();
            pool.RequestStop();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::int64_t lb_iterations = 0;
  std::int64_t ub_iterations = 0;
  std::size_t k = 0;
  if (options.run_lb_worker) lb_iterations = workers[k++].iterations();
  if (options.run_ub_worker) ub_iterations = workers[k].iterations();
  return Finish(pool, preflight, lb_iterations, ub_iterations);
}

SolveResult Solve(Algorithm algorithm, const Wcsp& w, CorePool& pool,
                  const SolveOptions& options) {
  switch (algorithm) {
    case Algorithm::kLb:
      return HsLb(w, pool, options);
    case Algorithm::kUb:
      return HsUb(w, pool, options);
    case Algorithm::kLub:
      return HsLub(w, pool, options);
  }
  throw ContractViolation("unknown algorithm");
}

int SeedDisjointCores(const Wcsp& w, CorePool& pool, CspEncoding& encoding) {
  const int m = w.num_functions();
  std::vector<bool> used(m, false);
  PoolBoundSink sink(pool, TraceSource::kSeed);
  const SolveLimits limits{-1, &pool.stop_flag()};
  Cost bound = CostOf(w.MinVector());
  int added = 0;
  for (;;) {
    CostVector probe = w.MinVector();
    for (int i = 0; i < m; ++i) {
      if (used[i]) probe[i] = w.function(i).max_level();
    }
    OracleVerdict v = encoding.SolveUnderVector(probe, limits);
    if (v.verdict == Verdict::kSat) {
      Cost cost = Evaluate(w, *v.witness).total;
      if (cost < pool.ub()) pool.OfferUpperBound(cost, *v.witness, TraceSource::kSeed);
      break;
    }
    if (v.verdict == Verdict::kBudgetExhausted) break;
    GrowResult grown = MaximalCore(encoding, probe, &sink, &pool.stop_flag());
    if (grown.interrupted) break;
    const CostVector& k = grown.core;
    Cost cheapest = kInfiniteCost;
    std::vector<int> raisable;
    for (int i = 0; i < m; ++i) {
      const CostFunction& f = w.function(i);
      const int j = f.LevelIndex(k[i]);
      if (j + 1 < f.num_levels()) {
        raisable.push_back(i);
        cheapest = std::min(cheapest, f.levels()[j + 1] - f.min_level());
      }
    }
    // Every component at its top level: only the hard constraints conflict.
    if (raisable.empty()) break;
    pool.AddCore(k, TraceSource::kSeed);
    ++added;
    bound = CheckedAdd(bound, cheapest);
    for (int i : raisable) used[i] = true;
  }
  if (added > 0) pool.RaiseLowerBound(std::min(bound, pool.ub()), TraceSource::kSeed);
  return added;
}

int SeedDisjointCores(const Wcsp& w, CorePool& pool) {
  CspEncoding encoding(w);
  return SeedDisjointCores(w, pool, encoding);
}

}  // namespace ihs
