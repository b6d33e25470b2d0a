#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dtbench/learners.hpp"

namespace dtbench {

namespace detail {

struct SubsetHash {
  std::size_t operator()(const std::vector<std::uint32_t>& s) const noexcept {
    std::uint64_t h = mix64(s.size());
    for (const auto i : s) h = mix64(h ^ i);
    return static_cast<std::size_t>(h);
  }
};

/// Minimum-depth consistent tree by iterative deepening. Feasibility of a
/// (subset, depth) pair is decided by trying every feature that splits the
/// subset, in feature-id order. Features already tested on the path are
/// constant on the subset, so the subset alone keys the memo table.
class ExactDepthSearch {
 public:
  ExactDepthSearch(const TrainingRows& rows, const ExactBudget& budget)
      : rows_(rows), budget_(budget), start_(std::chrono::steady_clock::now()) {}

  DecisionTree learn(const SpacePtr& space) {
    const auto root = rows_.all();
    const std::size_t cap = budget_.max_depth.value_or(rows_.space->num_features());
    for (std::size_t depth = 0; depth <= cap; ++depth) {
      if (feasible(root, static_cast<int>(depth))) {
        TreeBuilder builder(space);
        return builder.build(build(root, static_cast<int>(depth), builder));
      }
      proven_infeasible_ = static_cast<int>(depth);
    }
    throw BudgetExceeded("no consistent tree within the depth cap of " + std::to_string(cap), proven_infeasible_);
  }

  std::uint64_t explored() const noexcept { return explored_; }

 private:
  struct Bounds {
    int infeasible_up_to = -1;    // every depth <= this is infeasible
    int feasible_from = INT32_MAX;  // every depth >= this is feasible
  };

  void charge() {
    ++explored_;
    if (budget_.max_nodes && explored_ > budget_.max_nodes) {
      throw BudgetExceeded("exact learner exceeded its node budget of " + std::to_string(budget_.max_nodes),
                           proven_infeasible_);
    }
    if (budget_.max_time.count() > 0 && (explored_ & 0x3ff) == 0 &&
        std::chrono::steady_clock::now() - start_ > budget_.max_time) {
      throw BudgetExceeded("exact learner exceeded its time budget", proven_infeasible_);
    }
  }

  bool feasible(const std::vector<std::uint32_t>& subset, int depth) {
    if (rows_.pure(subset)) return true;
    if (depth == 0) return false;
    auto& bounds = memo_[subset];
    if (depth <= bounds.infeasible_up_to) return false;
    if (depth >= bounds.feasible_from) return true;
    charge();
    bool ok = false;
    for (FeatureId f = 0; f < rows_.space->num_features() && !ok; ++f) ok = split_feasible(subset, f, depth);
    // Node-based map: `bounds` survives the inserts made by the recursion.
    if (ok) {
      bounds.feasible_from = std::min(bounds.feasible_from, depth);
    } else {
      bounds.infeasible_up_to = std::max(bounds.infeasible_up_to, depth);
    }
    return ok;
  }

  bool split_feasible(const std::vector<std::uint32_t>& subset, FeatureId f, int depth) {
    if (rows_.nonempty_parts(subset, f) < 2) return false;
    for (const auto& part : rows_.partition(subset, f)) {
      if (!part.empty() && !feasible(part, depth - 1)) return false;
    }
    return true;
  }

  TreeBuilder::Handle build(const std::vector<std::uint32_t>& subset, int depth, TreeBuilder& builder) {
    if (rows_.pure(subset)) return builder.leaf(rows_.classes[subset.front()]);
    const ClassId majority = majority_class(rows_.class_counts(subset));
    for (FeatureId f = 0; f < rows_.space->num_features(); ++f) {
      if (!split_feasible(subset, f, depth)) continue;
      std::vector<TreeBuilder::Handle> children;
      for (const auto& part : rows_.partition(subset, f)) {
        children.push_back(part.empty() ? builder.leaf(majority) : build(part, depth - 1, builder));
      }
      return builder.split(f, std::move(children));
    }
    throw Error("exact learner: feasible subset has no feasible split");
  }

  const TrainingRows& rows_;
  ExactBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::unordered_map<std::vector<std::uint32_t>, Bounds, SubsetHash> memo_;
  std::uint64_t explored_ = 0;
  int proven_infeasible_ = -1;
};

}  // namespace detail

/// A tree of minimum depth among all trees consistent with `d`.
/// Throws BudgetExceeded when the budget runs out first.
inline DecisionTree learn_exact_depth(const Dataset& d, const ExactBudget& budget = {}) {
  const detail::TrainingRows rows(d);
  return detail::ExactDepthSearch(rows, budget).learn(d.space_ptr());
}

inline DecisionTree learn(const Dataset& d, const LearnerId& learner) {
  switch (learner.algorithm) {
    case Algorithm::kId3: return learn_id3(d);
    case Algorithm::kGainRatio: return learn_gain_ratio(d);
    case Algorithm::kGini: return learn_gini(d);
    case Algorithm::kRandomTree: return learn_random_tree(d, learner.seed);
    case Algorithm::kExactDepth: return learn_exact_depth(d, learner.budget);
  }
  throw ConfigError("unknown learner");
}

}  // namespace dtbench
