// dtbench command-line front end.
//
//   dtbench gen-oracle  --features m --depth k --values Z --classes c --seed s --out tree.txt
//   dtbench gen-data    --oracle tree.txt --mode complete|unique --size q --seed s --out data.csv
//   dtbench learn       --algo id3|gainratio|gini|randomtree|exact --data data.csv --seed s [--max-depth d] --out tree.txt
//   dtbench doe         --oracle a.txt --tree b.txt [--witness] [--brute-check]
//   dtbench experiment  --features n --depth k --sizes a,b,c --mode complete|unique --algos id3,gini,...
//                       --trials tl --seed s --out results.csv [--jobs j]
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dtbench/dtbench.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

dtbench::Algorithm algorithm_or_throw(const std::string& name) {
  const auto a = dtbench::parse_algorithm(name);
  if (!a) throw UsageError("unknown algorithm '" + name + "'");
  return *a;
}

dtbench::DatasetMode mode_or_throw(const std::string& name) {
  const auto m = dtbench::parse_mode(name);
  if (!m) throw UsageError("unknown mode '" + name + "' (expected complete or unique)");
  return *m;
}

std::string witness_row(const dtbench::FeatureSpace& space, const dtbench::Input& x) {
  std::string row;
  for (dtbench::FeatureId f = 0; f < space.num_features(); ++f) {
    if (f) row += ',';
    row += space.value_name(f, x[f]);
  }
  return row;
}

/// `id3`, or `exact:20` to override the trial count for that learner.
std::vector<dtbench::LearnerSpec> parse_learners(const std::vector<std::string>& items, const dtbench::ExactBudget& budget) {
  std::vector<dtbench::LearnerSpec> out;
  for (const auto& item : items) {
    dtbench::LearnerSpec spec;
    const auto colon = item.find(':');
    spec.algorithm = algorithm_or_throw(item.substr(0, colon));
    if (colon != std::string::npos) {
      try {
        spec.trials = std::stoul(item.substr(colon + 1));
      } catch (const std::exception&) {
        throw UsageError("bad trial override in '" + item + "'");
      }
    }
    spec.budget = budget;
    out.push_back(spec);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision-tree learner evaluation against random oracle trees"};
  app.require_subcommand(1);

  // gen-oracle
  auto* gen_oracle = app.add_subcommand("gen-oracle", "Generate a random perfect oracle tree");
  std::size_t go_features = 0, go_depth = 0, go_values = 2, go_classes = 2;
  std::uint64_t go_seed = 0;
  std::string go_out;
  gen_oracle->add_option("--features", go_features, "number of features m")->required();
  gen_oracle->add_option("--depth", go_depth, "rule length k (1 <= k <= m)")->required();
  gen_oracle->add_option("--values", go_values, "values per feature Z")->capture_default_str();
  gen_oracle->add_option("--classes", go_classes, "number of classes")->capture_default_str();
  gen_oracle->add_option("--seed", go_seed, "random seed")->capture_default_str();
  gen_oracle->add_option("--out", go_out, "output tree file")->required();

  // gen-data
  auto* gen_data = app.add_subcommand("gen-data", "Sample a training dataset from an oracle");
  std::string gd_oracle, gd_mode = "complete", gd_out;
  std::uint64_t gd_size = 0, gd_seed = 0;
  gen_data->add_option("--oracle", gd_oracle, "oracle tree file")->required();
  gen_data->add_option("--mode", gd_mode, "complete | unique")->capture_default_str();
  gen_data->add_option("--size", gd_size, "number of instances q")->required();
  gen_data->add_option("--seed", gd_seed, "random seed")->capture_default_str();
  gen_data->add_option("--out", gd_out, "output CSV")->required();

  // learn
  auto* learn_cmd = app.add_subcommand("learn", "Learn a tree from a dataset");
  std::string ln_algo, ln_data, ln_space, ln_out;
  std::uint64_t ln_seed = 0, ln_max_nodes = 0, ln_time_ms = 0;
  std::size_t ln_max_depth = 0;
  learn_cmd->add_option("--algo", ln_algo, "id3 | gainratio | gini | randomtree | exact")->required();
  learn_cmd->add_option("--data", ln_data, "dataset CSV")->required();
  learn_cmd->add_option("--space", ln_space, "feature-space file (default: the dataset's .space sidecar)");
  learn_cmd->add_option("--seed", ln_seed, "random seed (randomtree)")->capture_default_str();
  auto* ln_depth_opt = learn_cmd->add_option("--max-depth", ln_max_depth, "depth cap for the exact learner");
  learn_cmd->add_option("--max-nodes", ln_max_nodes, "node budget for the exact learner (0 = unlimited)");
  learn_cmd->add_option("--time-limit-ms", ln_time_ms, "time budget for the exact learner (0 = unlimited)");
  learn_cmd->add_option("--out", ln_out, "output tree file")->required();

  // doe
  auto* doe_cmd = app.add_subcommand("doe", "Degree of equivalence of a tree against an oracle");
  std::string de_oracle, de_tree;
  bool de_witness = false, de_brute = false;
  doe_cmd->add_option("--oracle", de_oracle, "oracle tree file")->required();
  doe_cmd->add_option("--tree", de_tree, "learned tree file")->required();
  doe_cmd->add_flag("--witness", de_witness, "print a distinguishing input when not equivalent");
  doe_cmd->add_flag("--brute-check", de_brute, "cross-check against rule-pair enumeration");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "Sweep learners and dataset sizes, averaging DOE over trials");
  dtbench::ExperimentConfig ex;
  std::string ex_mode = "complete", ex_out = "-";
  std::vector<std::string> ex_algos;
  std::size_t ex_jobs = 1, ex_max_depth = 0;
  std::uint64_t ex_max_nodes = 0, ex_time_ms = 0;
  exp_cmd->add_option("--features", ex.num_features, "number of features n")->required();
  exp_cmd->add_option("--depth", ex.depth, "oracle depth k")->required();
  exp_cmd->add_option("--sizes", ex.sizes, "dataset sizes")->delimiter(',')->required();
  exp_cmd->add_option("--mode", ex_mode, "complete | unique")->capture_default_str();
  exp_cmd->add_option("--algos", ex_algos, "learners, optionally name:trials")->delimiter(',')->required();
  exp_cmd->add_option("--trials", ex.trials, "trials per cell")->capture_default_str();
  exp_cmd->add_option("--seed", ex.master_seed, "master seed")->capture_default_str();
  exp_cmd->add_option("--values", ex.values, "values per feature")->capture_default_str();
  exp_cmd->add_option("--classes", ex.classes, "number of classes")->capture_default_str();
  exp_cmd->add_option("--jobs", ex_jobs, "worker threads")->capture_default_str();
  auto* ex_depth_opt = exp_cmd->add_option("--max-depth", ex_max_depth, "depth cap for the exact learner");
  exp_cmd->add_option("--max-nodes", ex_max_nodes, "node budget per exact run (0 = unlimited)");
  exp_cmd->add_option("--time-limit-ms", ex_time_ms, "time budget per exact run (0 = unlimited)");
  exp_cmd->add_option("--out", ex_out, "results CSV ('-' for stdout)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*gen_oracle) {
      const auto cfg = dtbench::OracleConfig::uniform(go_features, go_depth, go_values, go_classes, go_seed);
      dtbench::save_tree(go_out, dtbench::generate_oracle(cfg));
    } else if (*gen_data) {
      const auto mode = mode_or_throw(gd_mode);
      const auto oracle = dtbench::load_tree(gd_oracle);
      const auto d = mode == dtbench::DatasetMode::kComplete ? dtbench::gen_completely_random(oracle, gd_size, gd_seed)
                                                             : dtbench::gen_uniquely_random(oracle, gd_size, gd_seed);
      dtbench::save_dataset(gd_out, d);
    } else if (*learn_cmd) {
      dtbench::LearnerId id{algorithm_or_throw(ln_algo), ln_seed, {}};
      if (*ln_depth_opt) id.budget.max_depth = ln_max_depth;
      id.budget.max_nodes = ln_max_nodes;
      id.budget.max_time = std::chrono::milliseconds(ln_time_ms);
      const auto space = ln_space.empty() ? nullptr : dtbench::load_space(ln_space);
      const auto d = dtbench::load_dataset(ln_data, space);
      dtbench::save_tree(ln_out, dtbench::learn(d, id));
    } else if (*doe_cmd) {
      const auto oracle = dtbench::load_tree(de_oracle);
      const auto tree = dtbench::load_tree(de_tree);
      const auto report = dtbench::doe_scan(oracle, tree, de_witness ? 1 : 0);
      std::cout << report.consistent_pairs << ' ' << report.compatible_pairs << ' ' << report.doe() << '\n';
      if (de_witness && !report.witnesses.empty()) std::cout << witness_row(oracle.space(), report.witnesses.front()) << '\n';
      if (de_brute) {
        const auto brute = dtbench::doe_bruteforce(oracle, tree);
        if (brute.consistent_pairs != report.consistent_pairs || brute.compatible_pairs != report.compatible_pairs) {
          std::cerr << "brute-check failed: enumeration gives " << brute.consistent_pairs << ' ' << brute.compatible_pairs << '\n';
          return kRuntimeError;
        }
      }
    } else if (*exp_cmd) {
      ex.mode = mode_or_throw(ex_mode);
      dtbench::ExactBudget budget;
      if (*ex_depth_opt) budget.max_depth = ex_max_depth;
      budget.max_nodes = ex_max_nodes;
      budget.max_time = std::chrono::milliseconds(ex_time_ms);
      ex.learners = parse_learners(ex_algos, budget);
      try {
        ex.validate();
      } catch (const dtbench::ConfigError& e) {
        throw UsageError(e.what());
      }
      const auto cells = dtbench::run_experiment(ex, ex_jobs);
      const std::string csv = dtbench::results_csv(cells);
      if (ex_out == "-") {
        std::cout << csv;
      } else {
        dtbench::write_text_file(ex_out, csv);
      }
      bool failed = false;
      for (const auto& c : cells) {
        if (c.error) {
          std::cerr << "cell failed: " << *c.error << '\n';
          failed = true;
        }
      }
      if (failed) return kRuntimeError;
    }
  } catch (const UsageError& e) {
    std::cerr << "dtbench: " << e.what() << '\n';
    return kUsageError;
  } catch (const dtbench::ConfigError& e) {
    std::cerr << "dtbench: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "dtbench: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
