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

#include "ihs/hitting.h"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

namespace ihs {

HittingProblem::HittingProblem(std::vector<std::vector<Cost>> levels)
    : levels_(std::move(levels)) {
  for (const auto& l : levels_) {
    Require(!l.empty(), "HittingProblem: empty level list");
    Require(std::adjacent_find(l.begin(), l.end(), std::greater_equal<>()) == l.end(),
            "HittingProblem: levels must be strictly ascending");
  }
}

HittingProblem HittingProblem::ForInstance(const Wcsp& w) {
  std::vector<std::vector<Cost>> levels;
  for (const auto& f : w.cost_functions()) levels.push_back(f.levels());
  return HittingProblem(std::move(levels));
}

bool HittingProblem::AddCore(const CostVector& core) {
  Require(core.size() == levels_.size(), "AddCore: vector length mismatch");
  Core c;
  c.level_index.resize(levels_.size());
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    auto it = std::lower_bound(levels_[i].begin(), levels_[i].end(), core[i]);
    Require(it != levels_[i].end() && *it == core[i], "AddCore: component is not a level");
    c.level_index[i] = static_cast<int>(it - levels_[i].begin());
    if (c.level_index[i] + 1 < static_cast<int>(levels_[i].size())) {
      c.raises.push_back({static_cast<int>(i), c.level_index[i] + 1});
    }
  }
  auto leq = [](const std::vector<int>& a, const std::vector<int>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] > b[i]) return false;
    }
    return true;
  };
  for (const Core& e : cores_) {
    if (leq(c.level_index, e.level_index)) return false;
  }
  std::erase_if(cores_, [&](const Core& e) { return leq(e.level_index, c.level_index); });
  cores_.push_back(std::move(c));
  return true;
}

CostVector HittingProblem::ToVector(const std::vector<int>& level_index) const {
  std::vector<Cost> v(levels_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = levels_[i][level_index[i]];
  return CostVector(std::move(v));
}

namespace {

enum class Mode { kOptimal, kFirstBelowBound };

struct NodeState {
  std::vector<int> level;
  std::vector<int> cap;
};

// State shared by all threads of one search.
struct Shared {
  const HittingProblem* problem;
  Mode mode;
  // Leaves must cost strictly less than this. It starts at the bound and,
  // in kOptimal mode, drops to incumbent + 1 so equal-cost leaves can still
  // compete on the lexicographic tie-break.
  std::atomic<Cost> threshold;
  std::atomic<bool> finished{false};
  std::atomic<bool> aborted{false};
  std::atomic<std::int64_t> nodes{0};
  const std::atomic<bool>* stop;

  std::mutex mu;
  bool have_best = false;
  std::vector<int> best;
  Cost best_cost = 0;

  void OfferLeaf(const std::vector<int>& level, Cost cost) {
    std::lock_guard<std::mutex> lock(mu);
    if (cost >= threshold.load()) return;
    if (!have_best || cost < best_cost || (cost == best_cost && level < best)) {
      have_best = true;
      best = level;
      best_cost = cost;
    }
    if (mode == Mode::kFirstBelowBound) {
      finished.store(true);
    } else if (cost + 1 < threshold.load()) {
      threshold.store(cost + 1);
    }
  }
};

class Search {
 public:
  struct Option {
    int function;
    int to_level;
    Cost increment;
  };

  enum class NodeKind { kLeaf, kDead, kPruned, kBranch };

  explicit Search(Shared& shared)
      : shared_(shared),
        p_(*shared.problem),
        occurrences_(p_.num_functions()),
        mark_(p_.num_functions(), 0) {
    const auto& cores = p_.cores();
    for (std::size_t c = 0; c < cores.size(); ++c) {
      for (const auto& r : cores[c].raises) {
        occurrences_[r.function].push_back({static_cast<int>(c), r.to_level});
      }
    }
    for (auto& occ : occurrences_) {
      std::sort(occ.begin(), occ.end(),
                [](const Occurrence& a, const Occurrence& b) { return a.to_level < b.to_level; });
    }
  }

  void Load(const NodeState& s) {
    level_ = s.level;
    cap_ = s.cap;
    hit_count_.assign(p_.cores().size(), 0);
    cost_ = 0;
    for (int i = 0; i < p_.num_functions(); ++i) {
      cost_ += p_.levels(i)[level_[i]];
      for (const auto& o : occurrences_[i]) {
        if (o.to_level <= level_[i]) hit_count_[o.core]++;
      }
    }
  }

  NodeState Save() const { return {level_, cap_}; }

  // Classifies the current node; for kBranch fills `options` in the order
  // children should be explored.
  NodeKind Examine(std::vector<Option>& options) {
    ++epoch_;
    Cost extra = 0;
    int chosen = -1;
    int chosen_avail = std::numeric_limits<int>::max();
    const auto& cores = p_.cores();
    for (std::size_t c = 0; c < cores.size(); ++c) {
      if (hit_count_[c] > 0) continue;
      int avail = 0;
      Cost cheapest = kInfiniteCost;
      bool disjoint = true;
      for (const auto& r : cores[c].raises) {
        if (r.to_level > cap_[r.function]) continue;
        ++avail;
        cheapest = std::min(cheapest, Increment(r.function, r.to_level));
        if (mark_[r.function] == epoch_) disjoint = false;
      }
      if (avail == 0) return NodeKind::kDead;
      if (disjoint) {
        extra += cheapest;
        for (const auto& r : cores[c].raises) {
          if (r.to_level <= cap_[r.function]) mark_[r.function] = epoch_;
        }
      }
      if (avail < chosen_avail) {
        chosen = static_cast<int>(c);
        chosen_avail = avail;
      }
    }
    if (cost_ + extra >= shared_.threshold.load(std::memory_order_relaxed)) {
      return NodeKind::kPruned;
    }
    if (chosen < 0) return NodeKind::kLeaf;
    options.clear();
    for (const auto& r : cores[chosen].raises) {
      if (r.to_level <= cap_[r.function]) {
        options.push_back({r.function, r.to_level, Increment(r.function, r.to_level)});
      }
    }
    std::sort(options.begin(), options.end(), [](const Option& a, const Option& b) {
      return a.increment != b.increment ? a.increment < b.increment : a.function < b.function;
    });
    return NodeKind::kBranch;
  }

  // Children of a kBranch node, in exploration order.
  std::vector<NodeState> Children(const std::vector<Option>& options) const {
    std::vector<NodeState> children;
    NodeState base = Save();
    for (const auto& o : options) {
      NodeState child = base;
      child.level[o.function] = o.to_level;
      children.push_back(std::move(child));
      base.cap[o.function] = o.to_level - 1;
    }
    return children;
  }

  void Dfs() {
    if (Interrupted()) return;
    std::vector<Option> options;
    switch (Examine(options)) {
      case NodeKind::kDead:
      case NodeKind::kPruned:
        return;
      case NodeKind::kLeaf:
        shared_.OfferLeaf(level_, cost_);
        return;
      case NodeKind::kBranch:
        break;
    }
    std::vector<int> saved_caps;
    saved_caps.reserve(options.size());
    for (const auto& o : options) saved_caps.push_back(cap_[o.function]);
    for (const auto& o : options) {
      const int old = level_[o.function];
      SetLevel(o.function, o.to_level);
      Dfs();
      SetLevel(o.function, old);
      if (shared_.finished.load(std::memory_order_relaxed) ||
          shared_.aborted.load(std::memory_order_relaxed)) {
        break;
      }
      cap_[o.function] = o.to_level - 1;
    }
    for (std::size_t k = 0; k < options.size(); ++k) {
      cap_[options[k].function] = saved_caps[k];
    }
  }

  Cost cost() const { return cost_; }
  const std::vector<int>& level() const { return level_; }

 private:
  struct Occurrence {
    int core;
    int to_level;
  };

  Cost Increment(int i, int to_level) const {
    return p_.levels(i)[to_level] - p_.levels(i)[level_[i]];
  }

  bool Interrupted() {
    const std::int64_t n = shared_.nodes.fetch_add(1, std::memory_order_relaxed);
    if (shared_.finished.load(std::memory_order_relaxed) ||
        shared_.aborted.load(std::memory_order_relaxed)) {
      return true;
    }
    if ((n & 255) == 0 && shared_.stop != nullptr &&
        shared_.stop->load(std::memory_order_relaxed)) {
      shared_.aborted.store(true);
      return true;
    }
    return false;
  }

  void SetLevel(int i, int to) {
    const int from = level_[i];
    if (to == from) return;
    const auto& levels = p_.levels(i);
    if (to > from) {
      cost_ += levels[to] - levels[from];
      for (const auto& o : occurrences_[i]) {
        if (o.to_level > to) break;
        if (o.to_level > from) hit_count_[o.core]++;
      }
    } else {
      cost_ -= levels[from] - levels[to];
      for (const auto& o : occurrences_[i]) {
        if (o.to_level > from) break;
        if (o.to_level > to) hit_count_[o.core]--;
      }
    }
    level_[i] = to;
  }

  Shared& shared_;
  const HittingProblem& p_;
  std::vector<std::vector<Occurrence>> occurrences_;
  std::vector<std::uint64_t> mark_;
  std::uint64_t epoch_ = 0;
  std::vector<int> level_;
  std::vector<int> cap_;
  std::vector<int> hit_count_;
  Cost cost_ = 0;
};

HittingResult RunSearch(const HittingProblem& p, Mode mode, Cost bound,
                        const HittingOptions& options) {
  HittingResult result;
  for (const auto& c : p.cores()) {
    if (c.raises.empty()) {
      result.status = HittingStatus::kSaturated;
      return result;
    }
  }

  Shared shared;
  shared.problem = &p;
  shared.mode = mode;
  shared.threshold.store(bound);
  shared.stop = options.stop;

  NodeState root;
  root.level.assign(p.num_functions(), 0);
  for (int i = 0; i < p.num_functions(); ++i) {
    root.cap.push_back(static_cast<int>(p.levels(i).size()) - 1);
  }

  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    Search search(shared);
    search.Load(root);
    search.Dfs();
  } else {
    // Split the top of the tree breadth-first into independent subtrees.
    std::deque<NodeState> frontier{root};
    const std::size_t wanted = static_cast<std::size_t>(threads) * 8;
    {
      Search expander(shared);
      std::vector<Search::Option> opts;
      std::size_t expansions = 0;
      while (!frontier.empty() && frontier.size() < wanted && expansions < 4 * wanted &&
             !shared.finished.load()) {
        NodeState node = std::move(frontier.front());
        frontier.pop_front();
        ++expansions;
        shared.nodes.fetch_add(1);
        expander.Load(node);
        switch (expander.Examine(opts)) {
          case Search::NodeKind::kLeaf:
            shared.OfferLeaf(expander.level(), expander.cost());
            break;
          case Search::NodeKind::kBranch:
            for (auto& child : expander.Children(opts)) frontier.push_back(std::move(child));
            break;
          default:
            break;
        }
      }
    }
    std::vector<NodeState> work(frontier.begin(), frontier.end());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      Search search(shared);
      for (std::size_t k = next.fetch_add(1); k < work.size(); k = next.fetch_add(1)) {
        if (shared.finished.load() || shared.aborted.load()) break;
        search.Load(work[k]);
        search.Dfs();
      }
    };
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  result.nodes = shared.nodes.load();
  if (shared.aborted.load() && !shared.finished.load()) {
    result.status = HittingStatus::kStopped;
    return result;
  }
  if (!shared.have_best) {
    result.status = HittingStatus::kNoneBelowBound;
    return result;
  }
  result.status = HittingStatus::kFound;
  result.vector = p.ToVector(shared.best);
  result.cost = shared.best_cost;
  return result;
}

}  // namespace

HittingResult MinCostHittingVector(const HittingProblem& p,
                                   const HittingOptions& options) {
  return RunSearch(p, Mode::kOptimal, options.bound, options);
}

HittingResult CostBoundedHittingVector(const HittingProblem& p, Cost ub,
                                       const HittingOptions& options) {
  return RunSearch(p, Mode::kFirstBelowBound, std::min(ub, options.bound), options);
}

}  // namespace ihs
