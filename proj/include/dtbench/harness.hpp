#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dtbench/datagen.hpp"
#include "dtbench/equiv.hpp"
#include "dtbench/exact_learner.hpp"
#include "dtbench/oracle.hpp"
#include "dtbench/rng.hpp"

namespace dtbench {

enum class DatasetMode { kComplete, kUnique };

inline std::string_view mode_name(DatasetMode m) { return m == DatasetMode::kComplete ? "complete" : "unique"; }

inline std::optional<DatasetMode> parse_mode(std::string_view s) {
  if (s == "complete") return DatasetMode::kComplete;
  if (s == "unique") return DatasetMode::kUnique;
  return std::nullopt;
}

/// A learner in a sweep. `trials` overrides the sweep-wide trial count.
struct LearnerSpec {
  Algorithm algorithm = Algorithm::kId3;
  std::optional<std::size_t> trials;
  ExactBudget budget;
};

struct TrialParams {
  std::size_t num_features = 0;
  std::size_t depth = 0;
  std::uint64_t size = 0;
  DatasetMode mode = DatasetMode::kComplete;
  std::size_t values = 2;
  std::size_t classes = 2;
};

struct TrialOutcome {
  double doe = 0.0;
  double learn_seconds = 0.0;
  double scan_seconds = 0.0;
};

/// Stable per-algorithm tag mixed into seeds; independent of sweep order.
inline std::uint64_t learner_tag(Algorithm a) { return static_cast<std::uint64_t>(a) + 1; }

// Seed layout. Oracle and dataset streams depend on (master, size, trial)
// only, so every learner in a sweep is scored on the same oracle/dataset
// pairs; the learner's own stream also mixes in its tag.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t size, std::uint64_t trial) {
  return derive_seed(master, 0x7472ULL, size, trial);
}
inline std::uint64_t cell_seed(std::uint64_t master, Algorithm a, std::uint64_t size) {
  return derive_seed(master, 0x63656c6cULL, learner_tag(a), size);
}

/// Generate an oracle, sample a dataset, learn, score. Deterministic in
/// (params, learner, seed).
inline TrialOutcome run_trial(const TrialParams& p, const LearnerSpec& learner, std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  const auto cfg = OracleConfig::uniform(p.num_features, p.depth, p.values, p.classes, derive_seed(seed, 1));
  const DecisionTree oracle = generate_oracle(cfg);
  const std::uint64_t data_seed = derive_seed(seed, 2);
  const Dataset data = p.mode == DatasetMode::kComplete ? gen_completely_random(oracle, p.size, data_seed)
                                                         : gen_uniquely_random(oracle, p.size, data_seed);
  const LearnerId id{learner.algorithm, derive_seed(seed, 3, learner_tag(learner.algorithm)), learner.budget};

  TrialOutcome out;
  const auto t0 = Clock::now();
  const DecisionTree learned = learn(data, id);
  const auto t1 = Clock::now();
  out.doe = doe_scan(oracle, learned).doe();
  const auto t2 = Clock::now();
  out.learn_seconds = std::chrono::duration<double>(t1 - t0).count();
  out.scan_seconds = std::chrono::duration<double>(t2 - t1).count();
  return out;
}

struct ExperimentConfig {
  std::size_t num_features = 10;
  std::size_t depth = 5;
  std::vector<std::uint64_t> sizes;
  DatasetMode mode = DatasetMode::kComplete;
  std::vector<LearnerSpec> learners;
  std::size_t trials = 100;
  std::uint64_t master_seed = 0;
  std::size_t values = 2;
  std::size_t classes = 2;

  std::size_t trials_for(const LearnerSpec& l) const { return l.trials.value_or(trials); }

  void validate() const {
    OracleConfig::uniform(num_features, depth, values, classes).validate();
    if (sizes.empty()) throw ConfigError("at least one dataset size required");
    if (learners.empty()) throw ConfigError("at least one learner required");
    const std::uint64_t space = FeatureSpace::uniform(num_features, values, classes).input_space_size();
    for (const auto s : sizes) {
      if (s == 0) throw ConfigError("dataset sizes must be positive");
      if (mode == DatasetMode::kUnique && s > space) {
        throw ConfigError("unique-mode size " + std::to_string(s) + " exceeds the " + std::to_string(space) +
                          " distinct inputs");
      }
    }
    for (const auto& l : learners) {
      if (trials_for(l) == 0) throw ConfigError("trial count must be at least 1");
    }
  }
};

struct CellResult {
  Algorithm learner = Algorithm::kId3;
  std::size_t num_features = 0;
  std::size_t depth = 0;
  std::uint64_t size = 0;
  DatasetMode mode = DatasetMode::kComplete;
  std::size_t trials = 0;
  double mean_doe = 0.0;
  double std_doe = 0.0;
  double mean_learn_time = 0.0;
  double mean_scan_time = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> doe_values;   // per trial, in trial order
  std::optional<std::string> error;  // set when the cell was aborted
};

/// Runs every (learner, size) cell, `jobs` trials at a time. Cells come back
/// in learner-major, size-minor order; numbers do not depend on `jobs`.
inline std::vector<CellResult> run_experiment(const ExperimentConfig& cfg, std::size_t jobs = 1) {
  cfg.validate();
  struct Job {
    std::size_t cell;
    std::size_t trial;
  };
  std::vector<CellResult> cells;
  std::vector<Job> queue;
  for (const auto& l : cfg.learners) {
    for (const auto size : cfg.sizes) {
      CellResult c;
      c.learner = l.algorithm;
      c.num_features = cfg.num_features;
      c.depth = cfg.depth;
      c.size = size;
      c.mode = cfg.mode;
      c.trials = cfg.trials_for(l);
      c.seed = cell_seed(cfg.master_seed, l.algorithm, size);
      for (std::size_t t = 0; t < c.trials; ++t) queue.push_back({cells.size(), t});
      cells.push_back(std::move(c));
    }
  }
  std::vector<TrialOutcome> outcomes(queue.size());
  std::vector<std::optional<std::string>> errors(queue.size());
  std::vector<std::atomic<bool>> failed(cells.size());
  for (auto& f : failed) f = false;

  const std::size_t per_learner = cfg.sizes.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < queue.size(); j = next++) {
      const Job job = queue[j];
      if (failed[job.cell]) continue;
      const CellResult& cell = cells[job.cell];
      const LearnerSpec& spec = cfg.learners[job.cell / per_learner];
      const TrialParams params{cfg.num_features, cfg.depth, cell.size, cfg.mode, cfg.values, cfg.classes};
      try {
        outcomes[j] = run_trial(params, spec, trial_seed(cfg.master_seed, cell.size, job.trial));
      } catch (const std::exception& e) {
        errors[j] = std::string(algorithm_name(cell.learner)) + " n=" + std::to_string(cfg.num_features) +
                    " k=" + std::to_string(cfg.depth) + " size=" + std::to_string(cell.size) +
                    " trial=" + std::to_string(job.trial) + ": " + e.what();
        failed[job.cell] = true;
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, queue.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t j = 0; j < queue.size(); ++j) {
    CellResult& cell = cells[queue[j].cell];
    if (errors[j] && !cell.error) cell.error = errors[j];
    cell.doe_values.push_back(outcomes[j].doe);
    cell.mean_learn_time += outcomes[j].learn_seconds;
    cell.mean_scan_time += outcomes[j].scan_seconds;
  }
  for (auto& cell : cells) {
    if (cell.error) {
      cell.doe_values.clear();
      continue;
    }
    const auto n = static_cast<double>(cell.trials);
    double sum = 0.0;
    for (const double v : cell.doe_values) sum += v;
    cell.mean_doe = sum / n;
    double sq = 0.0;
    for (const double v : cell.doe_values) sq += (v - cell.mean_doe) * (v - cell.mean_doe);
    cell.std_doe = cell.trials > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
    cell.mean_learn_time /= n;
    cell.mean_scan_time /= n;
  }
  return cells;
}

inline constexpr std::string_view kResultsHeader = "learner,num_features,depth,size,mode,trials,mean_doe,std_doe,seed";

/// Results CSV; aborted cells are left out.
inline std::string results_csv(const std::vector<CellResult>& cells) {
  std::string out(kResultsHeader);
  out += '\n';
  char buf[64];
  for (const auto& c : cells) {
    if (c.error) continue;
    out += algorithm_name(c.learner);
    out += ',' + std::to_string(c.num_features) + ',' + std::to_string(c.depth) + ',' + std::to_string(c.size) + ',';
    out += mode_name(c.mode);
    out += ',' + std::to_string(c.trials);
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,", c.mean_doe, c.std_doe);
    out += buf;
    out += std::to_string(c.seed);
    out += '\n';
  }
  return out;
}

}  // namespace dtbench
