#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtbench/core.hpp"
#include "dtbench/criteria.hpp"
#include "dtbench/rng.hpp"

namespace dtbench {

enum class Algorithm { kId3, kGainRatio, kGini, kRandomTree, kExactDepth };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kId3, Algorithm::kGainRatio, Algorithm::kGini,
                                               Algorithm::kRandomTree, Algorithm::kExactDepth};

/// CLI / CSV spelling.
inline std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kId3: return "id3";
    case Algorithm::kGainRatio: return "gainratio";
    case Algorithm::kGini: return "gini";
    case Algorithm::kRandomTree: return "randomtree";
    case Algorithm::kExactDepth: return "exact";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (const auto a : kAllAlgorithms) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

/// Limits for the exact learner. Zero means unlimited.
struct ExactBudget {
  std::optional<std::size_t> max_depth;
  std::uint64_t max_nodes = 0;
  std::chrono::milliseconds max_time{0};
};

struct LearnerId {
  Algorithm algorithm = Algorithm::kId3;
  std::uint64_t seed = 0;  // RandomTree only
  ExactBudget budget;
};

namespace detail {

inline constexpr double kScoreEps = 1e-12;

/// Flattened, weighted view of a dataset shared by all learners.
struct TrainingRows {
  const FeatureSpace* space;
  std::vector<const Input*> inputs;
  std::vector<ClassId> classes;
  std::vector<std::uint64_t> weights;

  explicit TrainingRows(const Dataset& d) : space(&d.space()) {
    if (d.empty()) throw ConfigError("empty dataset");
    for (const auto& [x, e] : d) {
      inputs.push_back(&x);
      classes.push_back(e.cls);
      weights.push_back(e.count);
    }
  }

  std::vector<std::uint64_t> class_counts(std::span<const std::uint32_t> subset) const {
    std::vector<std::uint64_t> counts(space->num_classes(), 0);
    for (const auto i : subset) counts[classes[i]] += weights[i];
    return counts;
  }

  bool pure(std::span<const std::uint32_t> subset) const {
    for (const auto i : subset) {
      if (classes[i] != classes[subset.front()]) return false;
    }
    return true;
  }

  /// counts[v][c] for feature f over `subset`.
  std::vector<std::vector<std::uint64_t>> branch_counts(std::span<const std::uint32_t> subset, FeatureId f) const {
    std::vector<std::vector<std::uint64_t>> counts(space->num_values(f), std::vector<std::uint64_t>(space->num_classes(), 0));
    for (const auto i : subset) counts[(*inputs[i])[f]][classes[i]] += weights[i];
    return counts;
  }

  std::vector<std::vector<std::uint32_t>> partition(std::span<const std::uint32_t> subset, FeatureId f) const {
    std::vector<std::vector<std::uint32_t>> parts(space->num_values(f));
    for (const auto i : subset) parts[(*inputs[i])[f]].push_back(i);
    return parts;
  }

  std::size_t nonempty_parts(std::span<const std::uint32_t> subset, FeatureId f) const {
    std::vector<std::uint8_t> seen(space->num_values(f), 0);
    std::size_t n = 0;
    for (const auto i : subset) {
      auto& s = seen[(*inputs[i])[f]];
      if (!s) {
        s = 1;
        ++n;
      }
    }
    return n;
  }

  std::vector<std::uint32_t> all() const {
    std::vector<std::uint32_t> idx(inputs.size());
    for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return idx;
  }
};

inline std::vector<std::uint64_t> part_sizes(const std::vector<std::vector<std::uint64_t>>& branch_counts) {
  std::vector<std::uint64_t> sizes;
  for (const auto& b : branch_counts) sizes.push_back(std::accumulate(b.begin(), b.end(), std::uint64_t{0}));
  return sizes;
}

/// Top-down multiway induction. `Chooser` maps (rows, subset, used mask) to
/// the feature to split on, or nullopt to stop with a majority leaf.
template <typename Chooser>
class MultiwayGrower {
 public:
  MultiwayGrower(const TrainingRows& rows, TreeBuilder& builder, Chooser chooser)
      : rows_(rows), builder_(builder), chooser_(std::move(chooser)), used_(rows.space->num_features(), 0) {}

  TreeBuilder::Handle grow(const std::vector<std::uint32_t>& subset) {
    const auto counts = rows_.class_counts(subset);
    if (rows_.pure(subset)) return builder_.leaf(rows_.classes[subset.front()]);
    const ClassId majority = majority_class(counts);
    const std::optional<FeatureId> f = chooser_(rows_, std::span<const std::uint32_t>(subset), used_);
    if (!f) return builder_.leaf(majority);
    used_[*f] = 1;
    std::vector<TreeBuilder::Handle> children;
    for (const auto& part : rows_.partition(subset, *f)) {
      children.push_back(part.empty() ? builder_.leaf(majority) : grow(part));
    }
    used_[*f] = 0;
    return builder_.split(*f, std::move(children));
  }

 private:
  const TrainingRows& rows_;
  TreeBuilder& builder_;
  Chooser chooser_;
  std::vector<std::uint8_t> used_;
};

template <typename Chooser>
DecisionTree grow_multiway(const Dataset& d, Chooser chooser) {
  const TrainingRows rows(d);
  TreeBuilder builder(d.space_ptr());
  MultiwayGrower<Chooser> grower(rows, builder, std::move(chooser));
  return builder.build(grower.grow(rows.all()));
}

struct Id3Chooser {
  std::optional<FeatureId> operator()(const TrainingRows& rows, std::span<const std::uint32_t> subset,
                                      const std::vector<std::uint8_t>& used) const {
    const auto parent = rows.class_counts(subset);
    std::optional<FeatureId> best;
    double best_gain = 0.0;
    for (FeatureId f = 0; f < used.size(); ++f) {
      if (used[f]) continue;
      const double gain = information_gain(parent, rows.branch_counts(subset, f));
      if (!best || gain > best_gain + kScoreEps) {
        best = f;
        best_gain = gain;
      }
    }
    return best;
  }
};

struct GainRatioChooser {
  std::optional<FeatureId> operator()(const TrainingRows& rows, std::span<const std::uint32_t> subset,
                                      const std::vector<std::uint8_t>& used) const {
    const auto parent = rows.class_counts(subset);
    std::optional<FeatureId> first_candidate;
    std::optional<FeatureId> best;
    double best_ratio = 0.0;
    for (FeatureId f = 0; f < used.size(); ++f) {
      if (used[f]) continue;
      const auto branches = rows.branch_counts(subset, f);
      const double si = split_info(part_sizes(branches));
      if (si <= kScoreEps) continue;
      if (!first_candidate) first_candidate = f;
      const double ratio = information_gain(parent, branches) / si;
      if (ratio > best_ratio + kScoreEps) {
        best = f;
        best_ratio = ratio;
      }
    }
    // Nothing informative: lowest-id feature that still splits.
    return best ? best : first_candidate;
  }
};

struct RandomChooser {
  Rng* rng;

  std::optional<FeatureId> operator()(const TrainingRows& rows, std::span<const std::uint32_t> subset,
                                      const std::vector<std::uint8_t>& used) const {
    std::vector<FeatureId> candidates;
    for (FeatureId f = 0; f < used.size(); ++f) {
      if (!used[f] && rows.nonempty_parts(subset, f) >= 2) candidates.push_back(f);
    }
    if (candidates.empty()) return std::nullopt;
    return candidates[rng->below(candidates.size())];
  }
};

/// CART-style induction with binary tests `f = v`. The `f != v` side may test
/// f again against its remaining values; the result is folded into a
/// multiway tree by resolving each repeated test against the branch value.
class GiniGrower {
 public:
  explicit GiniGrower(const TrainingRows& rows) : rows_(rows) {
    for (FeatureId f = 0; f < rows.space->num_features(); ++f) {
      allowed_.emplace_back(rows.space->num_values(f), 1);
    }
  }

  DecisionTree learn(const SpacePtr& space) {
    const std::size_t root = grow(rows_.all());
    TreeBuilder builder(space);
    PartialInput known = PartialInput::undefined(space->num_features());
    return builder.build(fold(root, known, builder));
  }

 private:
  struct BinaryNode {
    bool leaf;
    ClassId cls;
    FeatureId feature;
    ValueId value;
    std::size_t equal;
    std::size_t other;
  };

  std::size_t grow(const std::vector<std::uint32_t>& subset) {
    const auto counts = rows_.class_counts(subset);
    if (rows_.pure(subset)) return add_leaf(rows_.classes[subset.front()]);
    const double parent = gini(counts);
    const auto total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));

    bool found = false;
    FeatureId best_f = 0;
    ValueId best_v = 0;
    double best_gain = 0.0;
    for (FeatureId f = 0; f < allowed_.size(); ++f) {
      if (std::count(allowed_[f].begin(), allowed_[f].end(), 1) < 2) continue;
      const auto branches = rows_.branch_counts(subset, f);
      for (ValueId v = 0; v < branches.size(); ++v) {
        if (!allowed_[f][v]) continue;
        std::vector<std::uint64_t> rest(rows_.space->num_classes(), 0);
        for (ValueId w = 0; w < branches.size(); ++w) {
          if (w == v) continue;
          for (std::size_t c = 0; c < rest.size(); ++c) rest[c] += branches[w][c];
        }
        const auto eq_size = static_cast<double>(std::accumulate(branches[v].begin(), branches[v].end(), std::uint64_t{0}));
        const double rest_size = total - eq_size;
        if (eq_size == 0.0 || rest_size == 0.0) continue;
        const double gain = parent - eq_size / total * gini(branches[v]) - rest_size / total * gini(rest);
        if (!found || gain > best_gain + kScoreEps) {
          found = true;
          best_f = f;
          best_v = v;
          best_gain = gain;
        }
      }
    }
    if (!found) return add_leaf(majority_class(counts));

    std::vector<std::uint32_t> eq, ne;
    for (const auto i : subset) ((*rows_.inputs[i])[best_f] == best_v ? eq : ne).push_back(i);

    auto saved = allowed_[best_f];
    std::fill(allowed_[best_f].begin(), allowed_[best_f].end(), 0);
    allowed_[best_f][best_v] = 1;
    const std::size_t eq_node = grow(eq);
    allowed_[best_f] = saved;
    allowed_[best_f][best_v] = 0;
    const std::size_t ne_node = grow(ne);
    allowed_[best_f] = std::move(saved);

    nodes_.push_back({false, 0, best_f, best_v, eq_node, ne_node});
    return nodes_.size() - 1;
  }

  std::size_t add_leaf(ClassId c) {
    nodes_.push_back({true, c, 0, 0, 0, 0});
    return nodes_.size() - 1;
  }

  TreeBuilder::Handle fold(std::size_t n, PartialInput& known, TreeBuilder& builder) const {
    const BinaryNode& node = nodes_[n];
    if (node.leaf) return builder.leaf(node.cls);
    if (known.defined(node.feature)) {
      return fold(known[node.feature] == node.value ? node.equal : node.other, known, builder);
    }
    std::vector<TreeBuilder::Handle> children;
    for (ValueId w = 0; w < rows_.space->num_values(node.feature); ++w) {
      known.values[node.feature] = w;
      children.push_back(fold(w == node.value ? node.equal : node.other, known, builder));
    }
    known.values[node.feature] = kUndefined;
    return builder.split(node.feature, std::move(children));
  }

  const TrainingRows& rows_;
  std::vector<std::vector<std::uint8_t>> allowed_;
  std::vector<BinaryNode> nodes_;
};

}  // namespace detail

/// ID3: multiway splits maximizing information gain, no pruning.
inline DecisionTree learn_id3(const Dataset& d) { return detail::grow_multiway(d, detail::Id3Chooser{}); }

/// C4.5-style gain ratio without the pruning stage.
inline DecisionTree learn_gain_ratio(const Dataset& d) { return detail::grow_multiway(d, detail::GainRatioChooser{}); }

/// CART-style Gini splits without pruning.
inline DecisionTree learn_gini(const Dataset& d) {
  const detail::TrainingRows rows(d);
  return detail::GiniGrower(rows).learn(d.space_ptr());
}

/// Uniformly random choice among unused features that actually split the
/// current subset; grows to purity.
inline DecisionTree learn_random_tree(const Dataset& d, std::uint64_t seed) {
  Rng rng(seed);
  return detail::grow_multiway(d, detail::RandomChooser{&rng});
}

}  // namespace dtbench
