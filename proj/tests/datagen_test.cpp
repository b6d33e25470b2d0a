#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"

namespace dtbench {
namespace {

DecisionTree oracle(std::size_t m, std::size_t k, std::uint64_t seed) {
  return generate_oracle(OracleConfig::uniform(m, k, 2, 2, seed));
}

TEST(CompletelyRandomTest, LabelsComeFromTheOracle) {
  const auto t = oracle(8, 4, 1);
  const auto rules = t.rules();
  const auto sample = sample_completely_random(t, 500, 7);
  ASSERT_EQ(sample.size(), 500u);
  for (const auto& li : sample) {
    EXPECT_EQ(li.cls, t.evaluate(li.input));
    EXPECT_EQ(li.cls, testing::classify_by_rules(rules, li.input));
    EXPECT_TRUE(triggers(li.input, rules[li.rule_index]));
  }
  const auto d = gen_completely_random(t, 500, 7);
  EXPECT_EQ(d.size(), 500u);
  EXPECT_EQ(precision(t, d), 1.0);
}

TEST(CompletelyRandomTest, KeepsDuplicates) {
  const auto t = oracle(3, 2, 2);
  const auto d = gen_completely_random(t, 200, 3);
  EXPECT_EQ(d.size(), 200u);
  EXPECT_LE(d.distinct_inputs(), 8u);
}

TEST(CompletelyRandomTest, Deterministic) {
  const auto t = oracle(10, 5, 4);
  EXPECT_EQ(sample_completely_random(t, 100, 9), sample_completely_random(t, 100, 9));
  EXPECT_NE(sample_completely_random(t, 100, 9), sample_completely_random(t, 100, 10));
}

TEST(CompletelyRandomTest, ZeroSizeIsAnError) { EXPECT_THROW(gen_completely_random(oracle(4, 2, 0), 0, 0), ConfigError); }

// With a perfect binary oracle each rule has probability 2^-k.
TEST(CompletelyRandomTest, RulesAreHitUniformly) {
  const auto t = oracle(6, 3, 11);
  constexpr int kDraws = 16000;
  std::vector<int> counts(t.num_leaves(), 0);
  for (const auto& li : sample_completely_random(t, kDraws, 12)) ++counts[li.rule_index];
  const double expected = static_cast<double>(kDraws) / counts.size();
  double chi2 = 0.0;
  for (const int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 24.322);  // df = 7, alpha = 0.001
}

TEST(EnumerateTest, CoversTheSpaceOnceGroupedByRule) {
  const auto t = generate_oracle(OracleConfig{4, 2, {2, 3, 2, 3}, 3, 5});
  const auto all = enumerate_all_consistent(t);
  EXPECT_EQ(all.size(), t.space().input_space_size());
  std::set<Input> seen;
  std::size_t last_rule = 0;
  const auto rules = t.rules();
  for (const auto& li : all) {
    EXPECT_TRUE(seen.insert(li.input).second);
    EXPECT_GE(li.rule_index, last_rule);
    last_rule = li.rule_index;
    EXPECT_TRUE(triggers(li.input, rules[li.rule_index]));
    EXPECT_EQ(li.cls, t.evaluate(li.input));
  }
}

TEST(EnumerateTest, GuardTrips) {
  const auto t = oracle(30, 2, 0);
  EXPECT_THROW(enumerate_all_consistent(t), GuardExceeded);
  EXPECT_THROW(enumerate_all_consistent(oracle(10, 2, 0), 1000), GuardExceeded);
}

TEST(UniquelyRandomTest, SmallSizesHitDistinctRules) {
  const auto t = oracle(8, 4, 3);
  for (std::uint64_t q = 1; q <= 16; ++q) {
    const auto sample = sample_uniquely_random(t, q, q * 31);
    ASSERT_EQ(sample.size(), q);
    std::set<std::size_t> rules;
    std::set<Input> inputs;
    for (const auto& li : sample) {
      rules.insert(li.rule_index);
      inputs.insert(li.input);
      EXPECT_EQ(li.cls, t.evaluate(li.input));
    }
    EXPECT_EQ(rules.size(), q);
    EXPECT_EQ(inputs.size(), q);
  }
}

TEST(UniquelyRandomTest, LargeSizesCoverEveryRule) {
  const auto t = oracle(8, 4, 3);
  for (const std::uint64_t q : {17u, 64u, 255u, 256u}) {
    const auto d = gen_uniquely_random(t, q, 5);
    EXPECT_EQ(d.size(), q);
    EXPECT_EQ(d.distinct_inputs(), q);
    std::set<std::size_t> rules;
    for (const auto& [x, e] : d) rules.insert(t.rule_index(t.leaf_for(x)));
    EXPECT_EQ(rules.size(), t.num_leaves());
  }
}

TEST(UniquelyRandomTest, FullSizeIsTheWholeSpace) {
  const auto t = oracle(6, 3, 8);
  const auto d = gen_uniquely_random(t, 64, 1);
  for (const auto& x : testing::all_inputs(t.space())) ASSERT_TRUE(d.find(x));
}

TEST(UniquelyRandomTest, TooLargeIsAnError) {
  EXPECT_THROW(gen_uniquely_random(oracle(6, 3, 8), 65, 1), ConfigError);
  EXPECT_THROW(gen_uniquely_random(oracle(6, 3, 8), 0, 1), ConfigError);
}

TEST(UniquelyRandomTest, Deterministic) {
  const auto t = oracle(8, 4, 3);
  EXPECT_EQ(sample_uniquely_random(t, 40, 2), sample_uniquely_random(t, 40, 2));
  EXPECT_NE(sample_uniquely_random(t, 40, 2), sample_uniquely_random(t, 40, 3));
}

}  // namespace
}  // namespace dtbench
