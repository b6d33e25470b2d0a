#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "dtbench/core.hpp"
#include "dtbench/rng.hpp"

namespace dtbench {

/// An input labeled by the oracle, tagged with the rule it triggers.
struct LabeledInstance {
  Input input;
  ClassId cls = 0;
  std::size_t rule_index = 0;

  bool operator==(const LabeledInstance&) const = default;
};

inline constexpr std::uint64_t kDefaultEnumerationGuard = std::uint64_t{1} << 24;

inline Dataset to_dataset(const SpacePtr& space, const std::vector<LabeledInstance>& instances) {
  Dataset d(space);
  for (const auto& li : instances) d.add(li.input, li.cls);
  return d;
}

/// `q` random walks over the oracle: uniform edge at each node, then
/// uniform values for the rule's free features. Duplicates are kept.
inline std::vector<LabeledInstance> sample_completely_random(const DecisionTree& oracle, std::uint64_t q,
                                                             std::uint64_t seed) {
  if (q == 0) throw ConfigError("dataset size must be positive");
  const FeatureSpace& space = oracle.space();
  Rng rng(seed);
  std::vector<LabeledInstance> out;
  out.reserve(q);
  for (std::uint64_t i = 0; i < q; ++i) {
    PartialInput x = PartialInput::undefined(space.num_features());
    NodeId n = oracle.root();
    while (!oracle.is_leaf(n)) {
      const FeatureId f = oracle.feature(n);
      const auto v = static_cast<ValueId>(rng.below(space.num_values(f)));
      x.values[f] = v;
      n = oracle.child(n, v);
    }
    for (FeatureId f = 0; f < space.num_features(); ++f) {
      if (!x.defined(f)) x.values[f] = static_cast<ValueId>(rng.below(space.num_values(f)));
    }
    out.push_back({Input{std::move(x.values)}, oracle.class_of(n), oracle.rule_index(n)});
  }
  return out;
}

inline Dataset gen_completely_random(const DecisionTree& oracle, std::uint64_t q, std::uint64_t seed) {
  return to_dataset(oracle.space_ptr(), sample_completely_random(oracle, q, seed));
}

/// D_all: every input of the space, grouped by triggering rule in rule
/// order. Within a rule the free features count up lexicographically in
/// feature-id order (highest id fastest).
inline std::vector<LabeledInstance> enumerate_all_consistent(const DecisionTree& oracle,
                                                             std::uint64_t guard = kDefaultEnumerationGuard) {
  const FeatureSpace& space = oracle.space();
  const std::uint64_t total = space.input_space_size();
  if (total > guard) {
    throw GuardExceeded("input space has " + std::to_string(total) + " inputs, over the enumeration guard of " +
                        std::to_string(guard));
  }
  std::vector<LabeledInstance> out;
  out.reserve(total);
  const auto rule_list = oracle.rules();
  for (std::size_t r = 0; r < rule_list.size(); ++r) {
    Input x{std::vector<ValueId>(space.num_features(), 0)};
    std::vector<std::uint8_t> fixed(space.num_features(), 0);
    for (const auto& [f, v] : rule_list[r].assignments) {
      x.values[f] = v;
      fixed[f] = 1;
    }
    std::vector<FeatureId> free;
    for (FeatureId f = 0; f < space.num_features(); ++f) {
      if (!fixed[f]) free.push_back(f);
    }
    for (;;) {
      out.push_back({x, rule_list[r].cls, r});
      std::size_t i = free.size();
      bool carried_out = true;
      while (i > 0) {
        --i;
        const FeatureId f = free[i];
        if (++x.values[f] < space.num_values(f)) {
          carried_out = false;
          break;
        }
        x.values[f] = 0;
      }
      if (carried_out) break;
    }
  }
  return out;
}

/// `q` distinct inputs from D_all covering as many oracle rules as
/// possible: for q <= b, q distinct rules with one input each; for q > b,
/// one input per rule plus q - b more drawn without replacement.
inline std::vector<LabeledInstance> sample_uniquely_random(const DecisionTree& oracle, std::uint64_t q,
                                                           std::uint64_t seed,
                                                           std::uint64_t guard = kDefaultEnumerationGuard) {
  if (q == 0) throw ConfigError("dataset size must be positive");
  const std::uint64_t space_size = oracle.space().input_space_size();
  if (q > space_size) {
    throw ConfigError("uniquely random dataset of size " + std::to_string(q) + " exceeds the " +
                      std::to_string(space_size) + " distinct inputs of the space");
  }
  auto all = enumerate_all_consistent(oracle, guard);
  const std::size_t b = oracle.num_leaves();

  // Rule r owns all[begin[r], begin[r + 1]).
  std::vector<std::size_t> begin(b + 1, all.size());
  for (std::size_t i = all.size(); i-- > 0;) begin[all[i].rule_index] = i;

  Rng rng(seed);
  std::vector<std::size_t> rule_order(b);
  std::iota(rule_order.begin(), rule_order.end(), std::size_t{0});
  const std::size_t covered = static_cast<std::size_t>(std::min<std::uint64_t>(q, b));
  for (std::size_t i = 0; i < covered; ++i) {
    std::swap(rule_order[i], rule_order[i + rng.below(b - i)]);
  }

  std::vector<std::uint8_t> taken(all.size(), 0);
  std::vector<std::size_t> picked;
  picked.reserve(q);
  for (std::size_t i = 0; i < covered; ++i) {
    const std::size_t r = rule_order[i];
    const std::size_t idx = begin[r] + rng.below(begin[r + 1] - begin[r]);
    taken[idx] = 1;
    picked.push_back(idx);
  }
  if (q > covered) {
    std::vector<std::size_t> pool;
    pool.reserve(all.size() - covered);
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!taken[i]) pool.push_back(i);
    }
    const std::size_t extra = q - covered;
    for (std::size_t i = 0; i < extra; ++i) {
      std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
      picked.push_back(pool[i]);
    }
  }

  std::vector<LabeledInstance> out;
  out.reserve(picked.size());
  for (const std::size_t idx : picked) out.push_back(std::move(all[idx]));
  return out;
}

inline Dataset gen_uniquely_random(const DecisionTree& oracle, std::uint64_t q, std::uint64_t seed,
                                   std::uint64_t guard = kDefaultEnumerationGuard) {
  return to_dataset(oracle.space_ptr(), sample_uniquely_random(oracle, q, seed, guard));
}

}  // namespace dtbench
