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

#ifndef IHS_CORE_GROW_H_
#define IHS_CORE_GROW_H_

#include <atomic>

#include "ihs/encoding.h"
#include "ihs/model.h"

namespace ihs {

// Receives solutions discovered as a side effect of probing.
class BoundSink {
 public:
  virtual ~BoundSink() = default;
  virtual Cost CurrentUpperBound() const = 0;
  // `cost` is Evaluate(witness).total; implementations min-merge it.
  virtual void OfferSolution(const Assignment& witness, Cost cost) = 0;
};

struct GrowResult {
  CostVector core;
  // Growth stopped early (stop flag or solver budget); `core` is still a
  // core but its maximality is not certified.
  bool interrupted = false;
  int oracle_calls = 0;
};

// Raises the components of core `h` one level at a time while the induced
// CSP stays unsatisfiable, until every component either sits at its top
// level or cannot be raised by one level without becoming satisfiable.
//
// Each pass visits the raisable components in increasing order of their
// next-level increment (ties by index); passes repeat until one makes no
// change. A component whose single-step raise was satisfiable is never
// probed again: cores are closed downward, so it stays blocked as the
// others grow. Satisfiable probes whose witness beats the sink's current
// upper bound are offered to `sink` (may be null).
//
// Throws ContractViolation when h is not a core.
GrowResult MaximalCore(CspEncoding& encoding, const CostVector& h,
                       BoundSink* sink,
                       const std::atomic<bool>* stop = nullptr);

}  // namespace ihs

#endif  // IHS_CORE_GROW_H_
