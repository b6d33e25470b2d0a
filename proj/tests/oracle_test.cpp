#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "fixtures.hpp"

namespace dtbench {
namespace {

void expect_perfect(const DecisionTree& t, const OracleConfig& cfg) {
  std::uint64_t expected_leaves = 0;
  // Leaves: product of Z along each path; for uniform Z this is Z^k.
  const auto rules = t.rules();
  for (const auto& r : rules) {
    EXPECT_EQ(r.assignments.size(), cfg.depth);
    std::vector<std::uint8_t> seen(cfg.num_features, 0);
    for (const auto& [f, v] : r.assignments) {
      EXPECT_FALSE(seen[f]) << "feature repeated on a path";
      seen[f] = 1;
    }
    ++expected_leaves;
  }
  EXPECT_EQ(t.num_leaves(), expected_leaves);
  EXPECT_EQ(t.depth(), cfg.depth);
  for (const NodeId leaf : t.leaves()) EXPECT_EQ(t.node_depth(leaf), cfg.depth);

  // Sibling leaves never share one class.
  for (NodeId n = 0; n < t.num_nodes(); ++n) {
    if (t.is_leaf(n) || !t.is_leaf(t.child(n, 0))) continue;
    const auto kids = t.children(n);
    bool mixed = false;
    for (const NodeId c : kids) {
      ASSERT_TRUE(t.is_leaf(c));
      mixed = mixed || t.class_of(c) != t.class_of(kids[0]);
    }
    EXPECT_TRUE(mixed);
  }
}

TEST(OracleTest, PerfectAcrossConfigurations) {
  for (std::size_t m = 1; m <= 7; ++m) {
    for (std::size_t k = 1; k <= m; ++k) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto cfg = OracleConfig::uniform(m, k, 2, 2, seed);
        const auto t = generate_oracle(cfg);
        expect_perfect(t, cfg);
        EXPECT_EQ(t.num_leaves(), std::uint64_t{1} << k);
      }
    }
  }
}

TEST(OracleTest, NonBinaryAndMulticlass) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto cfg = OracleConfig::uniform(5, 3, 3, 4, seed);
    const auto t = generate_oracle(cfg);
    expect_perfect(t, cfg);
    EXPECT_EQ(t.num_leaves(), 27u);
  }
}

TEST(OracleTest, MixedValueSizes) {
  OracleConfig cfg{4, 3, {2, 3, 4, 2}, 3, 9};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    expect_perfect(generate_oracle(cfg), cfg);
  }
}

TEST(OracleTest, MoreClassesThanValues) {
  const auto cfg = OracleConfig::uniform(4, 2, 2, 5, 3);
  expect_perfect(generate_oracle(cfg), cfg);
}

TEST(OracleTest, DeterministicInSeed) {
  const auto a = generate_oracle(OracleConfig::uniform(10, 5, 2, 2, 123));
  const auto b = generate_oracle(OracleConfig::uniform(10, 5, 2, 2, 123));
  const auto c = generate_oracle(OracleConfig::uniform(10, 5, 2, 2, 124));
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_tree(a), serialize_tree(b));
  EXPECT_NE(a, c);
}

TEST(OracleTest, InvalidConfigurations) {
  EXPECT_THROW(generate_oracle(OracleConfig::uniform(3, 0)), ConfigError);
  EXPECT_THROW(generate_oracle(OracleConfig::uniform(3, 4)), ConfigError);
  EXPECT_THROW(generate_oracle(OracleConfig::uniform(3, 2, 1)), ConfigError);
  EXPECT_THROW(generate_oracle(OracleConfig::uniform(3, 2, 2, 1)), ConfigError);
  EXPECT_THROW(generate_oracle(OracleConfig::uniform(0, 0)), ConfigError);
  OracleConfig bad{3, 2, {2, 2}, 2, 0};
  EXPECT_THROW(generate_oracle(bad), ConfigError);
}

TEST(OracleTest, RejectsMismatchedSpace) {
  const auto space = make_space(FeatureSpace::uniform(4, 2));
  EXPECT_THROW(generate_oracle(OracleConfig::uniform(5, 2), space), ConfigError);
  EXPECT_NO_THROW(generate_oracle(OracleConfig::uniform(4, 2), space));
}

// Root feature over many seeds: chi-square against uniform, df = m - 1.
TEST(OracleStatistics, RootFeatureIsUniform) {
  constexpr std::size_t m = 5;
  constexpr int kSeeds = 10000;
  std::vector<int> counts(m, 0);
  for (int s = 0; s < kSeeds; ++s) {
    const auto t = generate_oracle(OracleConfig::uniform(m, 2, 2, 2, static_cast<std::uint64_t>(s)));
    ++counts[t.feature(t.root())];
  }
  const double expected = static_cast<double>(kSeeds) / m;
  double chi2 = 0.0;
  for (const int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 18.467);  // df = 4, alpha = 0.001
}

// Each child's feature is uniform over the features not used above it.
TEST(OracleStatistics, ChildFeatureAvoidsParentAndIsUniform) {
  constexpr std::size_t m = 4;
  constexpr int kSeeds = 6000;
  std::vector<int> counts(m, 0);
  int total = 0;
  for (int s = 0; s < kSeeds; ++s) {
    const auto t = generate_oracle(OracleConfig::uniform(m, 2, 2, 2, static_cast<std::uint64_t>(s)));
    const FeatureId root = t.feature(t.root());
    for (const NodeId c : t.children(t.root())) {
      const FeatureId f = t.feature(c);
      ASSERT_NE(f, root);
      ++counts[(f + m - root) % m];  // offset 1..m-1 from the parent
      ++total;
    }
  }
  EXPECT_EQ(counts[0], 0);
  const double expected = static_cast<double>(total) / (m - 1);
  double chi2 = 0.0;
  for (std::size_t i = 1; i < m; ++i) chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
  EXPECT_LT(chi2, 13.816);  // df = 2, alpha = 0.001
}

// Two siblings and two classes: only (c0,c1) and (c1,c0) are allowed, each
// with probability 1/2.
TEST(CleverClassesTest, BinaryFrequencies) {
  Rng rng(99);
  int first_zero = 0;
  constexpr int kDraws = 20000;
  for (int i = 0; i < kDraws; ++i) {
    const auto cs = clever_random_classes(2, 2, rng);
    ASSERT_NE(cs[0], cs[1]);
    first_zero += cs[0] == 0;
  }
  const double p = static_cast<double>(first_zero) / kDraws;
  EXPECT_NEAR(p, 0.5, 4.0 * std::sqrt(0.25 / kDraws));
}

// Three siblings, two classes: 6 admissible assignments, uniform.
TEST(CleverClassesTest, ThreeSiblingsUniformOverAdmissible) {
  Rng rng(5);
  std::map<std::vector<ClassId>, int> counts;
  constexpr int kDraws = 30000;
  for (int i = 0; i < kDraws; ++i) ++counts[clever_random_classes(3, 2, rng)];
  ASSERT_EQ(counts.size(), 6u);
  EXPECT_EQ(counts.count({0, 0, 0}), 0u);
  EXPECT_EQ(counts.count({1, 1, 1}), 0u);
  const double expected = kDraws / 6.0;
  double chi2 = 0.0;
  for (const auto& [cs, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 20.515);  // df = 5, alpha = 0.001
}

TEST(CleverClassesTest, RejectsDegenerateInputs) {
  Rng rng(1);
  EXPECT_THROW(clever_random_classes(1, 2, rng), ConfigError);
  EXPECT_THROW(clever_random_classes(2, 1, rng), ConfigError);
}

}  // namespace
}  // namespace dtbench
