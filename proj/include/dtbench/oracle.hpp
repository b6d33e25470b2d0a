#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtbench/core.hpp"
#include "dtbench/rng.hpp"

namespace dtbench {

struct OracleConfig {
  std::size_t num_features = 0;
  std::size_t depth = 0;
  std::vector<std::size_t> value_sizes;  // one Z_i per feature
  std::size_t num_classes = 2;
  std::uint64_t seed = 0;

  static OracleConfig uniform(std::size_t m, std::size_t k, std::size_t z = 2, std::size_t classes = 2,
                              std::uint64_t seed = 0) {
    return OracleConfig{m, k, std::vector<std::size_t>(m, z), classes, seed};
  }

  void validate() const {
    if (num_features == 0) throw ConfigError("oracle needs at least one feature");
    if (value_sizes.size() != num_features) throw ConfigError("one value-set size per feature required");
    if (depth < 1 || depth > num_features) {
      throw ConfigError("oracle depth must satisfy 1 <= k <= m (k=" + std::to_string(depth) +
                        ", m=" + std::to_string(num_features) + ")");
    }
    for (const auto z : value_sizes) {
      if (z < 2) throw ConfigError("every feature needs at least two values");
    }
    if (num_classes < 2) throw ConfigError("at least two classes required");
  }

  FeatureSpace space() const {
    validate();
    return FeatureSpace::with_sizes(value_sizes, num_classes);
  }
};

/// Classes for `siblings` leaves sharing a parent, uniform over all
/// assignments that are not constant across the siblings.
inline std::vector<ClassId> clever_random_classes(std::size_t siblings, std::size_t num_classes, Rng& rng) {
  if (num_classes < 2) throw ConfigError("clever class assignment needs at least two classes");
  if (siblings < 2) throw ConfigError("clever class assignment needs at least two siblings");
  std::vector<ClassId> out(siblings);
  for (;;) {
    for (auto& c : out) c = static_cast<ClassId>(rng.below(num_classes));
    for (std::size_t i = 1; i < siblings; ++i) {
      if (out[i] != out[0]) return out;
    }
  }
}

namespace detail {

class OracleExpander {
 public:
  OracleExpander(const OracleConfig& cfg, TreeBuilder& builder)
      : cfg_(cfg), builder_(builder), rng_(cfg.seed), unused_(cfg.num_features) {
    for (FeatureId f = 0; f < unused_.size(); ++f) unused_[f] = f;
  }

  TreeBuilder::Handle expand(std::size_t depth) {
    const auto pick = static_cast<std::size_t>(rng_.below(unused_.size()));
    const FeatureId f = unused_[pick];
    const std::size_t z = cfg_.value_sizes[f];
    std::vector<TreeBuilder::Handle> children;
    if (depth + 1 == cfg_.depth) {
      for (const ClassId c : clever_random_classes(z, cfg_.num_classes, rng_)) children.push_back(builder_.leaf(c));
    } else {
      // `unused_` stays sorted so the sampled index maps to the same feature
      // on every platform.
      unused_.erase(unused_.begin() + static_cast<std::ptrdiff_t>(pick));
      for (std::size_t v = 0; v < z; ++v) children.push_back(expand(depth + 1));
      unused_.insert(unused_.begin() + static_cast<std::ptrdiff_t>(pick), f);
    }
    return builder_.split(f, std::move(children));
  }

 private:
  const OracleConfig& cfg_;
  TreeBuilder& builder_;
  Rng rng_;
  std::vector<FeatureId> unused_;
};

}  // namespace detail

/// Random perfect tree: every leaf at depth k, each node's feature drawn
/// uniformly from the features unused above it, sibling leaves never all
/// of one class. Deterministic in `cfg`.
inline DecisionTree generate_oracle(const OracleConfig& cfg, SpacePtr space = nullptr) {
  cfg.validate();
  if (!space) {
    space = make_space(cfg.space());
  } else if (!(*space == cfg.space())) {
    throw ConfigError("feature space does not match the oracle configuration");
  }
  TreeBuilder builder(space);
  detail::OracleExpander expander(cfg, builder);
  return builder.build(expander.expand(0));
}

}  // namespace dtbench
