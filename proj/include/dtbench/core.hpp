#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dtbench/errors.hpp"

namespace dtbench {

using FeatureId = std::uint32_t;
using ValueId = std::uint32_t;
using ClassId = std::uint32_t;
using NodeId = std::uint32_t;

inline constexpr ValueId kUndefined = std::numeric_limits<ValueId>::max();

namespace detail {

inline bool is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](unsigned char ch) {
    return ch <= ' ' || ch == '(' || ch == ')' || ch == ',' || ch == ':' || ch == '#' || ch == '"';
  });
}

template <typename Range>
std::optional<std::uint32_t> index_of(const Range& names, std::string_view name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - names.begin());
}

inline void require_unique(const std::vector<std::string>& names, const std::string& what) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (!is_valid_name(n)) throw ConfigError("invalid " + what + " name '" + n + "'");
    if (!seen.insert(n).second) throw ConfigError("duplicate " + what + " name '" + n + "'");
  }
}

}  // namespace detail

/// Features, their value sets and the class set. Everything else in the
/// library refers to these by dense integer ids.
class FeatureSpace {
 public:
  FeatureSpace(std::vector<std::string> features, std::vector<std::vector<std::string>> values,
               std::vector<std::string> classes)
      : features_(std::move(features)), values_(std::move(values)), classes_(std::move(classes)) {
    if (features_.empty()) throw ConfigError("feature space needs at least one feature");
    if (features_.size() != values_.size()) throw ConfigError("one value set per feature required");
    if (classes_.size() < 2) throw ConfigError("at least two classes required");
    detail::require_unique(features_, "feature");
    for (const auto& f : features_) {
      // Reserved words of the tree and dataset formats.
      if (f == "leaf" || f == "class") throw ConfigError("reserved feature name '" + f + "'");
    }
    for (std::size_t f = 0; f < values_.size(); ++f) {
      if (values_[f].size() < 2) throw ConfigError("feature '" + features_[f] + "' needs at least two values");
      detail::require_unique(values_[f], "value");
    }
    detail::require_unique(classes_, "class");
  }

  /// Features f0..f{m-1}, classes c0..c{c-1}. Binary features take the
  /// values false,true; wider ones v0..v{Z-1}.
  static FeatureSpace with_sizes(std::span<const std::size_t> value_sizes, std::size_t num_classes,
                                 std::size_t first_feature_index = 0) {
    std::vector<std::string> features;
    std::vector<std::vector<std::string>> values;
    for (std::size_t f = 0; f < value_sizes.size(); ++f) {
      features.push_back("f" + std::to_string(f + first_feature_index));
      std::vector<std::string> vs;
      if (value_sizes[f] == 2) {
        vs = {"false", "true"};
      } else {
        for (std::size_t v = 0; v < value_sizes[f]; ++v) vs.push_back("v" + std::to_string(v));
      }
      values.push_back(std::move(vs));
    }
    std::vector<std::string> classes;
    for (std::size_t c = 0; c < num_classes; ++c) classes.push_back("c" + std::to_string(c));
    return FeatureSpace(std::move(features), std::move(values), std::move(classes));
  }

  static FeatureSpace uniform(std::size_t num_features, std::size_t values_per_feature, std::size_t num_classes = 2) {
    const std::vector<std::size_t> sizes(num_features, values_per_feature);
    return with_sizes(sizes, num_classes);
  }

  std::size_t num_features() const noexcept { return features_.size(); }
  std::size_t num_values(FeatureId f) const { return values_.at(f).size(); }
  std::size_t num_classes() const noexcept { return classes_.size(); }

  const std::string& feature_name(FeatureId f) const { return features_.at(f); }
  const std::string& value_name(FeatureId f, ValueId v) const { return values_.at(f).at(v); }
  const std::string& class_name(ClassId c) const { return classes_.at(c); }

  const std::vector<std::string>& feature_names() const noexcept { return features_; }
  const std::vector<std::string>& value_names(FeatureId f) const { return values_.at(f); }
  const std::vector<std::string>& class_names() const noexcept { return classes_; }

  std::optional<FeatureId> find_feature(std::string_view name) const { return detail::index_of(features_, name); }
  std::optional<ValueId> find_value(FeatureId f, std::string_view name) const {
    return detail::index_of(values_.at(f), name);
  }
  std::optional<ClassId> find_class(std::string_view name) const { return detail::index_of(classes_, name); }

  /// Π Z_i, saturated at UINT64_MAX.
  std::uint64_t input_space_size() const noexcept {
    std::uint64_t total = 1;
    for (const auto& vs : values_) {
      if (total > std::numeric_limits<std::uint64_t>::max() / vs.size()) return std::numeric_limits<std::uint64_t>::max();
      total *= vs.size();
    }
    return total;
  }

  bool operator==(const FeatureSpace&) const = default;

 private:
  std::vector<std::string> features_;
  std::vector<std::vector<std::string>> values_;
  std::vector<std::string> classes_;
};

using SpacePtr = std::shared_ptr<const FeatureSpace>;

inline SpacePtr make_space(FeatureSpace space) { return std::make_shared<const FeatureSpace>(std::move(space)); }

/// A total valuation of the feature set: one value id per feature.
struct Input {
  std::vector<ValueId> values;

  ValueId operator[](FeatureId f) const { return values[f]; }
  std::size_t size() const noexcept { return values.size(); }
  auto operator<=>(const Input&) const = default;
};

/// A valuation where some features may be kUndefined.
struct PartialInput {
  std::vector<ValueId> values;

  static PartialInput undefined(std::size_t num_features) { return {std::vector<ValueId>(num_features, kUndefined)}; }

  bool defined(FeatureId f) const { return values[f] != kUndefined; }
  ValueId operator[](FeatureId f) const { return values[f]; }

  /// Undefined features take their first value.
  Input complete_with_first_values() const {
    Input x{values};
    for (auto& v : x.values) {
      if (v == kUndefined) v = 0;
    }
    return x;
  }

  bool operator==(const PartialInput&) const = default;
};

/// Visits every total input of `space` in lexicographic order (last feature
/// fastest). The visitor may return false to stop early.
template <typename Visitor>
void for_each_input(const FeatureSpace& space, Visitor&& visit) {
  Input x{std::vector<ValueId>(space.num_features(), 0)};
  for (;;) {
    if constexpr (std::is_same_v<decltype(visit(std::as_const(x))), bool>) {
      if (!visit(std::as_const(x))) return;
    } else {
      visit(std::as_const(x));
    }
    std::size_t f = space.num_features();
    while (f > 0) {
      --f;
      if (++x.values[f] < space.num_values(static_cast<FeatureId>(f))) break;
      x.values[f] = 0;
      if (f == 0) return;
    }
  }
}

/// One root-to-leaf path.
struct Rule {
  std::vector<std::pair<FeatureId, ValueId>> assignments;
  ClassId cls = 0;

  bool operator==(const Rule&) const = default;
};

/// True iff `x` agrees with every assignment of `rule`.
inline bool triggers(const Input& x, const Rule& rule) {
  return std::all_of(rule.assignments.begin(), rule.assignments.end(),
                     [&](const auto& a) { return x[a.first] == a.second; });
}

class TreeBuilder;

/// Immutable decision tree. Nodes are stored in depth-first preorder with
/// children visited in value-id order, so node 0 is the root and leaves
/// appear in rule order. Two trees are structurally equal iff their arenas
/// and spaces are equal.
class DecisionTree {
 public:
  struct Node {
    bool leaf = true;
    std::uint32_t label = 0;        // feature id for internal nodes, class id for leaves
    std::uint32_t first_child = 0;  // offset into the child table (internal nodes)
    std::uint32_t depth = 0;

    bool operator==(const Node&) const = default;
  };

  static DecisionTree single_leaf(SpacePtr space, ClassId cls);

  const FeatureSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }

  NodeId root() const noexcept { return 0; }
  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_leaves() const noexcept { return leaves_.size(); }

  bool is_leaf(NodeId n) const { return nodes_[n].leaf; }
  FeatureId feature(NodeId n) const { return nodes_[n].label; }
  ClassId class_of(NodeId n) const { return nodes_[n].label; }
  std::size_t node_depth(NodeId n) const { return nodes_[n].depth; }
  NodeId child(NodeId n, ValueId v) const { return children_[nodes_[n].first_child + v]; }
  std::span<const NodeId> children(NodeId n) const {
    if (nodes_[n].leaf) return {};
    return {children_.data() + nodes_[n].first_child, space_->num_values(nodes_[n].label)};
  }

  /// Leaf node ids in rule order.
  std::span<const NodeId> leaves() const noexcept { return leaves_; }

  /// Position of `leaf` in rule order.
  std::size_t rule_index(NodeId leaf) const {
    return static_cast<std::size_t>(std::lower_bound(leaves_.begin(), leaves_.end(), leaf) - leaves_.begin());
  }

  std::size_t depth() const noexcept { return depth_; }

  /// Class of the unique rule `x` triggers.
  ClassId evaluate(const Input& x) const { return class_of(leaf_for(x)); }

  NodeId leaf_for(const Input& x) const {
    NodeId n = root();
    while (!nodes_[n].leaf) n = child(n, x[nodes_[n].label]);
    return n;
  }

  /// One rule per leaf, in depth-first order.
  std::vector<Rule> rules() const {
    std::vector<Rule> out;
    out.reserve(leaves_.size());
    std::vector<std::pair<FeatureId, ValueId>> path;
    collect_rules(root(), path, out);
    return out;
  }

  bool operator==(const DecisionTree& other) const {
    return nodes_ == other.nodes_ && children_ == other.children_ &&
           (space_ == other.space_ || *space_ == *other.space_);
  }

 private:
  friend class TreeBuilder;

  DecisionTree(SpacePtr space, std::vector<Node> nodes, std::vector<NodeId> children)
      : space_(std::move(space)), nodes_(std::move(nodes)), children_(std::move(children)) {
    for (NodeId n = 0; n < nodes_.size(); ++n) {
      if (nodes_[n].leaf) {
        leaves_.push_back(n);
        depth_ = std::max<std::size_t>(depth_, nodes_[n].depth);
      }
    }
  }

  void collect_rules(NodeId n, std::vector<std::pair<FeatureId, ValueId>>& path, std::vector<Rule>& out) const {
    if (nodes_[n].leaf) {
      out.push_back(Rule{path, nodes_[n].label});
      return;
    }
    const FeatureId f = nodes_[n].label;
    const auto kids = children(n);
    for (ValueId v = 0; v < kids.size(); ++v) {
      path.emplace_back(f, v);
      collect_rules(kids[v], path, out);
      path.pop_back();
    }
  }

  SpacePtr space_;
  std::vector<Node> nodes_;
  std::vector<NodeId> children_;
  std::vector<NodeId> leaves_;
  std::size_t depth_ = 0;
};

/// Bottom-up construction of trees. Handles returned by `leaf` and `split`
/// are only meaningful to the builder that produced them; `build` checks
/// every tree invariant and lays the result out in canonical preorder.
class TreeBuilder {
 public:
  using Handle = std::uint32_t;

  explicit TreeBuilder(SpacePtr space) : space_(std::move(space)) {
    if (!space_) throw ConfigError("tree builder needs a feature space");
  }

  const FeatureSpace& space() const noexcept { return *space_; }

  Handle leaf(ClassId cls) {
    if (cls >= space_->num_classes()) throw ConfigError("class id " + std::to_string(cls) + " out of range");
    pending_.push_back({true, cls, {}});
    return static_cast<Handle>(pending_.size() - 1);
  }

  /// `children[v]` is the subtree for value v of `feature`.
  Handle split(FeatureId feature, std::vector<Handle> children) {
    if (feature >= space_->num_features()) throw ConfigError("feature id " + std::to_string(feature) + " out of range");
    if (children.size() != space_->num_values(feature)) {
      throw ConfigError("feature '" + space_->feature_name(feature) + "' needs exactly " +
                        std::to_string(space_->num_values(feature)) + " branches, got " +
                        std::to_string(children.size()));
    }
    for (Handle h : children) {
      if (h >= pending_.size()) throw ConfigError("unknown child handle");
    }
    pending_.push_back({false, feature, std::move(children)});
    return static_cast<Handle>(pending_.size() - 1);
  }

  DecisionTree build(Handle root) const {
    if (root >= pending_.size()) throw ConfigError("unknown root handle");
    std::vector<std::uint8_t> visited(pending_.size(), 0);
    std::vector<std::uint8_t> on_path(space_->num_features(), 0);
    std::vector<DecisionTree::Node> nodes;
    std::vector<NodeId> child_table;
    emit(root, 0, visited, on_path, nodes, child_table);
    return DecisionTree(space_, std::move(nodes), std::move(child_table));
  }

 private:
  struct Pending {
    bool leaf;
    std::uint32_t label;
    std::vector<Handle> children;
  };

  NodeId emit(Handle h, std::uint32_t depth, std::vector<std::uint8_t>& visited, std::vector<std::uint8_t>& on_path,
              std::vector<DecisionTree::Node>& nodes, std::vector<NodeId>& child_table) const {
    if (visited[h]) throw ConfigError("node shared between parents; every node needs exactly one entering edge");
    visited[h] = 1;
    const Pending& p = pending_[h];
    const auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back({p.leaf, p.label, 0, depth});
    if (p.leaf) return id;
    if (on_path[p.label]) {
      throw ConfigError("feature '" + space_->feature_name(p.label) + "' appears twice on a root-to-leaf path");
    }
    on_path[p.label] = 1;
    const auto first = static_cast<std::uint32_t>(child_table.size());
    nodes[id].first_child = first;
    child_table.resize(child_table.size() + p.children.size());
    for (std::size_t v = 0; v < p.children.size(); ++v) {
      const NodeId c = emit(p.children[v], depth + 1, visited, on_path, nodes, child_table);
      child_table[first + v] = c;
    }
    on_path[p.label] = 0;
    return id;
  }

  SpacePtr space_;
  std::vector<Pending> pending_;
};

inline DecisionTree DecisionTree::single_leaf(SpacePtr space, ClassId cls) {
  TreeBuilder b(std::move(space));
  return b.build(b.leaf(cls));
}

inline ClassId evaluate(const DecisionTree& tree, const Input& x) { return tree.evaluate(x); }
inline std::vector<Rule> rules(const DecisionTree& tree) { return tree.rules(); }

/// Deterministic multiset of labeled inputs. Iteration is in input order.
class Dataset {
 public:
  struct Entry {
    ClassId cls;
    std::uint64_t count;

    bool operator==(const Entry&) const = default;
  };

  explicit Dataset(SpacePtr space) : space_(std::move(space)) {
    if (!space_) throw ConfigError("dataset needs a feature space");
  }

  const FeatureSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }

  /// Adds `count` occurrences of (x, cls). A second class for the same
  /// input would make the dataset non-deterministic and is rejected.
  void add(const Input& x, ClassId cls, std::uint64_t count = 1) {
    if (count == 0) throw ConfigError("instance count must be positive");
    if (x.size() != space_->num_features()) throw ConfigError("input arity does not match the feature space");
    for (FeatureId f = 0; f < x.size(); ++f) {
      if (x[f] >= space_->num_values(f)) throw ConfigError("value id out of range for feature '" + space_->feature_name(f) + "'");
    }
    if (cls >= space_->num_classes()) throw ConfigError("class id out of range");
    auto [it, inserted] = instances_.try_emplace(x, Entry{cls, count});
    if (!inserted) {
      if (it->second.cls != cls) throw ConfigError("conflicting classes for the same input (non-deterministic dataset)");
      it->second.count += count;
    }
    size_ += count;
  }

  std::optional<Entry> find(const Input& x) const {
    const auto it = instances_.find(x);
    if (it == instances_.end()) return std::nullopt;
    return it->second;
  }

  /// Σ of redundancy counts.
  std::uint64_t size() const noexcept { return size_; }
  std::size_t distinct_inputs() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }

  auto begin() const noexcept { return instances_.begin(); }
  auto end() const noexcept { return instances_.end(); }

  bool operator==(const Dataset& other) const {
    return instances_ == other.instances_ && *space_ == *other.space_;
  }

 private:
  SpacePtr space_;
  std::map<Input, Entry> instances_;
  std::uint64_t size_ = 0;
};

namespace detail {

inline void require_same_space(const FeatureSpace& a, const FeatureSpace& b, const char* what) {
  if (&a != &b && !(a == b)) throw ConfigError(std::string(what) + ": feature spaces differ");
}

}  // namespace detail

/// Instance-weighted precision: consistent occurrences over size(d).
inline double precision(const DecisionTree& tree, const Dataset& d) {
  if (d.empty()) throw ConfigError("empty dataset");
  detail::require_same_space(tree.space(), d.space(), "precision");
  std::uint64_t hits = 0;
  for (const auto& [x, e] : d) {
    if (tree.evaluate(x) == e.cls) hits += e.count;
  }
  return static_cast<double>(hits) / static_cast<double>(d.size());
}

/// Precision counting each distinct input once, ignoring redundancy.
inline double distinct_precision(const DecisionTree& tree, const Dataset& d) {
  if (d.empty()) throw ConfigError("empty dataset");
  detail::require_same_space(tree.space(), d.space(), "precision");
  std::size_t hits = 0;
  for (const auto& [x, e] : d) {
    if (tree.evaluate(x) == e.cls) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(d.distinct_inputs());
}

}  // namespace dtbench
