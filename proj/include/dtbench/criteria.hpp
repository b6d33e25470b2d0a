#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "dtbench/core.hpp"

namespace dtbench {

namespace detail {

inline std::uint64_t checked_total(std::span<const std::uint64_t> counts, const char* what) {
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw ConfigError(std::string(what) + " of all-zero counts");
  return total;
}

}  // namespace detail

/// Shannon entropy in bits; 0·log 0 = 0.
inline double entropy(std::span<const std::uint64_t> class_counts) {
  const auto total = static_cast<double>(detail::checked_total(class_counts, "entropy"));
  double h = 0.0;
  for (const auto c : class_counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

inline double gini(std::span<const std::uint64_t> class_counts) {
  const auto total = static_cast<double>(detail::checked_total(class_counts, "gini"));
  double sum_sq = 0.0;
  for (const auto c : class_counts) {
    const double p = static_cast<double>(c) / total;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

/// Entropy of the partition sizes a split produces.
inline double split_info(std::span<const std::uint64_t> part_sizes) { return entropy(part_sizes); }

/// H(parent) − Σ_v |D_v|/|D| · H(D_v). `child_counts[v]` holds the class
/// counts of branch v; empty branches contribute nothing.
inline double information_gain(std::span<const std::uint64_t> parent_counts,
                               const std::vector<std::vector<std::uint64_t>>& child_counts) {
  const auto total = static_cast<double>(detail::checked_total(parent_counts, "information gain"));
  double remainder = 0.0;
  for (const auto& child : child_counts) {
    const std::uint64_t size = std::accumulate(child.begin(), child.end(), std::uint64_t{0});
    if (size == 0) continue;
    remainder += static_cast<double>(size) / total * entropy(child);
  }
  return entropy(parent_counts) - remainder;
}

/// Argmax count, lowest class id on ties.
inline ClassId majority_class(std::span<const std::uint64_t> class_counts) {
  detail::checked_total(class_counts, "majority class");
  ClassId best = 0;
  for (ClassId c = 1; c < class_counts.size(); ++c) {
    if (class_counts[c] > class_counts[best]) best = c;
  }
  return best;
}

}  // namespace dtbench
