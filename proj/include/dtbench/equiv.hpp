#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dtbench/core.hpp"
#include "dtbench/datagen.hpp"

namespace dtbench {

/// Counts of compatible and consistent (rule of t1, rule of t2) pairs.
struct DoeReport {
  std::uint64_t consistent_pairs = 0;  // succ
  std::uint64_t compatible_pairs = 0;  // total
  std::vector<Input> witnesses;        // distinguishing inputs, when requested

  double doe() const {
    return compatible_pairs == 0 ? 1.0 : static_cast<double>(consistent_pairs) / static_cast<double>(compatible_pairs);
  }
  bool equivalent() const noexcept { return consistent_pairs == compatible_pairs; }
};

/// Oracle-driven joint traversal of two trees over a shared space. Calls
/// `on_pair(leaf1, leaf2, x)` once per compatible pair of rules, where `x`
/// holds exactly the features fixed by the path through the product.
///
/// t1 is always advanced; t2 advances when its feature is already fixed in
/// `x`, and branches over all values only once t1 has reached a leaf.
template <typename PairVisitor>
void scan_rule_pairs(const DecisionTree& t1, const DecisionTree& t2, PairVisitor&& on_pair) {
  detail::require_same_space(t1.space(), t2.space(), "equivalence scan");
  PartialInput x = PartialInput::undefined(t1.space().num_features());

  auto scan = [&](auto& self, NodeId n1, NodeId n2) -> void {
    while (!t2.is_leaf(n2) && x.defined(t2.feature(n2))) n2 = t2.child(n2, x[t2.feature(n2)]);
    if (!t1.is_leaf(n1)) {
      const FeatureId f = t1.feature(n1);
      const auto kids = t1.children(n1);
      for (ValueId v = 0; v < kids.size(); ++v) {
        x.values[f] = v;
        self(self, kids[v], n2);
      }
      x.values[f] = kUndefined;
      return;
    }
    if (t2.is_leaf(n2)) {
      on_pair(n1, n2, std::as_const(x));
      return;
    }
    const FeatureId f = t2.feature(n2);
    const auto kids = t2.children(n2);
    for (ValueId v = 0; v < kids.size(); ++v) {
      x.values[f] = v;
      self(self, n1, kids[v]);
    }
    x.values[f] = kUndefined;
  };
  scan(scan, t1.root(), t2.root());
}

/// DOE of `learned` against `oracle`: consistent over compatible rule pairs.
/// With `max_witnesses > 0`, also collects that many distinguishing inputs
/// (each accepting pair's partial input completed with first values).
inline DoeReport doe_scan(const DecisionTree& oracle, const DecisionTree& learned, std::size_t max_witnesses = 0) {
  DoeReport report;
  scan_rule_pairs(oracle, learned, [&](NodeId a, NodeId b, const PartialInput& x) {
    ++report.compatible_pairs;
    if (oracle.class_of(a) == learned.class_of(b)) {
      ++report.consistent_pairs;
    } else if (report.witnesses.size() < max_witnesses) {
      report.witnesses.push_back(x.complete_with_first_values());
    }
  });
  return report;
}

/// Rules share an input iff no feature is assigned two different values.
inline bool compatible(const Rule& r1, const Rule& r2) {
  for (const auto& [f1, v1] : r1.assignments) {
    for (const auto& [f2, v2] : r2.assignments) {
      if (f1 == f2 && v1 != v2) return false;
    }
  }
  return true;
}

inline bool consistent(const Rule& r1, const Rule& r2) { return compatible(r1, r2) && r1.cls == r2.cls; }

/// Quadratic pass over rules(t1) × rules(t2).
inline DoeReport doe_bruteforce(const DecisionTree& t1, const DecisionTree& t2) {
  detail::require_same_space(t1.space(), t2.space(), "equivalence check");
  const auto rules1 = t1.rules();
  const auto rules2 = t2.rules();
  DoeReport report;
  for (const auto& r1 : rules1) {
    for (const auto& r2 : rules2) {
      if (!compatible(r1, r2)) continue;
      ++report.compatible_pairs;
      if (r1.cls == r2.cls) ++report.consistent_pairs;
    }
  }
  return report;
}

struct EquivalenceResult {
  bool equivalent = true;
  std::optional<Input> witness;  // set when not equivalent
};

/// Equivalent iff the product has no accepting leaf. Stops at the first one.
inline EquivalenceResult is_equivalent(const DecisionTree& t1, const DecisionTree& t2) {
  struct Found {};
  EquivalenceResult result;
  try {
    scan_rule_pairs(t1, t2, [&](NodeId a, NodeId b, const PartialInput& x) {
      if (t1.class_of(a) != t2.class_of(b)) {
        result.equivalent = false;
        result.witness = x.complete_with_first_values();
        throw Found{};
      }
    });
  } catch (const Found&) {
  }
  return result;
}

/// Fraction of the full input space on which the trees agree.
inline double agreement_rate(const DecisionTree& t1, const DecisionTree& t2,
                             std::uint64_t guard = kDefaultEnumerationGuard) {
  detail::require_same_space(t1.space(), t2.space(), "agreement rate");
  const std::uint64_t total = t1.space().input_space_size();
  if (total > guard) {
    throw GuardExceeded("input space has " + std::to_string(total) + " inputs, over the enumeration guard of " +
                        std::to_string(guard));
  }
  std::uint64_t agree = 0;
  for_each_input(t1.space(), [&](const Input& x) {
    if (t1.evaluate(x) == t2.evaluate(x)) ++agree;
  });
  return static_cast<double>(agree) / static_cast<double>(total);
}

/// Materialized product tree for inspection. Node 0 is the root
/// (root1, root2, x_⊥); each edge fixes one feature of one of the trees.
struct DistinguishingTree {
  struct Node {
    NodeId n1;
    NodeId n2;
    PartialInput x;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
    bool leaf = false;       // both n1 and n2 are leaves
    bool accepting = false;  // leaf with distinct classes
  };

  std::vector<Node> nodes;

  std::vector<std::size_t> accepting() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].accepting) out.push_back(i);
    }
    return out;
  }

  std::size_t num_leaves() const {
    std::size_t n = 0;
    for (const auto& node : nodes) n += node.leaf ? 1 : 0;
    return n;
  }
};

/// Same traversal as the scan, keeping every visited product node. Forced
/// moves of t2 (feature already fixed) are folded into the node they lead to.
inline DistinguishingTree build_distinguishing_tree(const DecisionTree& t1, const DecisionTree& t2) {
  detail::require_same_space(t1.space(), t2.space(), "distinguishing tree");
  DistinguishingTree out;
  PartialInput x = PartialInput::undefined(t1.space().num_features());

  auto visit = [&](auto& self, NodeId n1, NodeId n2, std::optional<std::size_t> parent) -> void {
    while (!t2.is_leaf(n2) && x.defined(t2.feature(n2))) n2 = t2.child(n2, x[t2.feature(n2)]);
    const std::size_t id = out.nodes.size();
    out.nodes.push_back({n1, n2, x, parent, {}, false, false});
    if (parent) out.nodes[*parent].children.push_back(id);
    const bool leaf1 = t1.is_leaf(n1), leaf2 = t2.is_leaf(n2);
    if (leaf1 && leaf2) {
      out.nodes[id].leaf = true;
      out.nodes[id].accepting = t1.class_of(n1) != t2.class_of(n2);
      return;
    }
    const bool drive_first = !leaf1;
    const FeatureId f = drive_first ? t1.feature(n1) : t2.feature(n2);
    const auto kids = drive_first ? t1.children(n1) : t2.children(n2);
    for (ValueId v = 0; v < kids.size(); ++v) {
      x.values[f] = v;
      if (drive_first) {
        self(self, kids[v], n2, id);
      } else {
        self(self, n1, kids[v], id);
      }
    }
    x.values[f] = kUndefined;
  };
  visit(visit, t1.root(), t2.root(), std::nullopt);
  return out;
}

}  // namespace dtbench
