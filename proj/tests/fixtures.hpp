#pragma once

// Hand-encoded trees and datasets shared by the test suites, plus generators
// and brute-force helpers that never go through the code under test.

#include <algorithm>
#include <vector>

#include "dtbench/dtbench.hpp"

namespace dtbench::testing {

/// f1 ∈ {v1,v2}, f2 ∈ {v1,v2,v3}, classes c0,c1.
inline SpacePtr toy_space() {
  return make_space(FeatureSpace({"f1", "f2"}, {{"v1", "v2"}, {"v1", "v2", "v3"}}, {"c0", "c1"}));
}

/// (f1 (v1 (f2 (v1 c0) (v2 c1) (v3 c0))) (v2 c1))
inline DecisionTree toy_tree(const SpacePtr& space = toy_space()) {
  TreeBuilder b(space);
  const auto inner = b.split(1, {b.leaf(0), b.leaf(1), b.leaf(0)});
  return b.build(b.split(0, {inner, b.leaf(1)}));
}

/// Consistent with toy_tree: (v2,v1)→c1 once, (v1,v3)→c0 twice.
inline Dataset toy_consistent_data(const SpacePtr& space) {
  Dataset d(space);
  d.add(Input{{1, 0}}, 1);
  d.add(Input{{0, 2}}, 0, 2);
  return d;
}

/// Conflicts with toy_tree on (v1,v3): (v2,v1)→c1 three times, (v1,v3)→c1 twice.
inline Dataset toy_conflicting_data(const SpacePtr& space) {
  Dataset d(space);
  d.add(Input{{1, 0}}, 1, 3);
  d.add(Input{{0, 2}}, 1, 2);
  return d;
}

/// Binary features f1..f4 (ids 0..3), values false,true.
inline SpacePtr scan_space() {
  const std::vector<std::size_t> sizes(4, 2);
  return make_space(FeatureSpace::with_sizes(sizes, 2, 1));
}

inline constexpr FeatureId F1 = 0, F2 = 1, F3 = 2, F4 = 3;

/// Oracle: f3 ? (f4 ? c1 : c0) : (f2 ? c0 : c1).
inline DecisionTree scan_oracle(const SpacePtr& space) {
  TreeBuilder b(space);
  const auto left = b.split(F2, {b.leaf(1), b.leaf(0)});
  const auto right = b.split(F4, {b.leaf(0), b.leaf(1)});
  return b.build(b.split(F3, {left, right}));
}

/// Learned tree with rules 1..5 left to right:
/// f2=F: f3=F: f1=F→c1 (1), f1=T→c0 (2); f3=T→c0 (3); f2=T: f4=F→c0 (4), f4=T→c1 (5).
inline DecisionTree scan_learned(const SpacePtr& space) {
  TreeBuilder b(space);
  const auto f1 = b.split(F1, {b.leaf(1), b.leaf(0)});
  const auto f3 = b.split(F3, {f1, b.leaf(0)});
  const auto f4 = b.split(F4, {b.leaf(0), b.leaf(1)});
  return b.build(b.split(F2, {f3, f4}));
}

/// Arbitrary (not necessarily perfect) tree: at each node, stop with
/// probability `leaf_prob` or when features run out.
inline DecisionTree random_tree(const SpacePtr& space, Rng& rng, double leaf_prob, std::size_t max_depth) {
  TreeBuilder b(space);
  std::vector<std::uint8_t> used(space->num_features(), 0);
  auto grow = [&](auto& self, std::size_t depth) -> TreeBuilder::Handle {
    std::vector<FeatureId> free;
    for (FeatureId f = 0; f < used.size(); ++f) {
      if (!used[f]) free.push_back(f);
    }
    if (free.empty() || depth >= max_depth || (depth > 0 && rng.unit() < leaf_prob)) {
      return b.leaf(static_cast<ClassId>(rng.below(space->num_classes())));
    }
    const FeatureId f = free[rng.below(free.size())];
    used[f] = 1;
    std::vector<TreeBuilder::Handle> kids;
    for (ValueId v = 0; v < space->num_values(f); ++v) kids.push_back(self(self, depth + 1));
    used[f] = 0;
    return b.split(f, std::move(kids));
  };
  return b.build(grow(grow, 0));
}

/// Every input of the space, last feature fastest (independent odometer).
inline std::vector<Input> all_inputs(const FeatureSpace& space) {
  std::vector<Input> out{Input{std::vector<ValueId>(space.num_features(), 0)}};
  for (std::size_t f = space.num_features(); f-- > 0;) {
    std::vector<Input> next;
    for (const auto& x : out) {
      for (ValueId v = 0; v < space.num_values(static_cast<FeatureId>(f)); ++v) {
        Input y = x;
        y.values[f] = v;
        next.push_back(std::move(y));
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Classification by walking rules rather than the arena.
inline ClassId classify_by_rules(const std::vector<Rule>& rules, const Input& x) {
  for (const auto& r : rules) {
    bool hit = true;
    for (const auto& [f, v] : r.assignments) hit = hit && x.values[f] == v;
    if (hit) return r.cls;
  }
  return static_cast<ClassId>(-1);
}

/// Dataset labeling every input of the space with `tree`.
inline Dataset full_dataset(const DecisionTree& tree) {
  Dataset d(tree.space_ptr());
  for (const auto& x : all_inputs(tree.space())) d.add(x, classify_by_rules(tree.rules(), x));
  return d;
}

/// XOR of f0 and f1 over `m` binary features (m >= 2), all 2^m inputs.
inline Dataset xor_dataset(std::size_t m) {
  const auto space = make_space(FeatureSpace::uniform(m, 2));
  Dataset d(space);
  for (const auto& x : all_inputs(*space)) d.add(x, x.values[0] ^ x.values[1]);
  return d;
}

inline bool agrees_everywhere(const DecisionTree& a, const DecisionTree& b) {
  for (const auto& x : all_inputs(a.space())) {
    if (a.evaluate(x) != b.evaluate(x)) return false;
  }
  return true;
}

}  // namespace dtbench::testing
