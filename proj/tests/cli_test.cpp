#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <algorithm>
#include <sstream>
#include <string>

#include "fixtures.hpp"

namespace dtbench {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / (std::string("dtbench_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the CLI with stdout to `out` (inside the temp dir), returns its exit code.
  int run(const std::string& args, const std::string& out = "stdout.txt") const {
    const std::string cmd = std::string("\"") + DTBENCH_CLI + "\" " + args + " > \"" + (dir_ / out).string() +
                            "\" 2> \"" + (dir_ / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string read(const std::string& name) const { return read_text_file(dir_ / name); }

  fs::path dir_;
};

TEST_F(CliTest, Pipeline) {
  ASSERT_EQ(run("gen-oracle --features 8 --depth 4 --seed 3 --out " + path("oracle.txt")), 0) << read("stderr.txt");
  const auto oracle = load_tree(path("oracle.txt"));
  EXPECT_EQ(oracle.depth(), 4u);
  EXPECT_EQ(oracle, generate_oracle(OracleConfig::uniform(8, 4, 2, 2, 3)));

  ASSERT_EQ(run("gen-data --oracle " + path("oracle.txt") + " --mode unique --size 40 --seed 5 --out " + path("data.csv")), 0)
      << read("stderr.txt");
  const auto d = load_dataset(path("data.csv"));
  EXPECT_EQ(d.size(), 40u);
  EXPECT_EQ(precision(oracle, d), 1.0);

  ASSERT_EQ(run("learn --algo id3 --data " + path("data.csv") + " --out " + path("id3.txt")), 0) << read("stderr.txt");
  const auto learned = load_tree(path("id3.txt"));
  EXPECT_EQ(learned, learn_id3(d));

  ASSERT_EQ(run("doe --oracle " + path("oracle.txt") + " --tree " + path("id3.txt") + " --brute-check", "doe.txt"), 0)
      << read("stderr.txt");
  const auto r = doe_scan(oracle, learned);
  std::ostringstream want;
  want << r.consistent_pairs << ' ' << r.compatible_pairs << ' ' << r.doe() << '\n';
  EXPECT_EQ(read("doe.txt"), want.str());
}

TEST_F(CliTest, ExactLearnerWithDepthCap) {
  save_dataset(dir_ / "xor.csv", testing::xor_dataset(4));
  EXPECT_EQ(run("learn --algo exact --data " + path("xor.csv") + " --out " + path("t.txt")), 0);
  EXPECT_EQ(load_tree(path("t.txt")).depth(), 2u);
  EXPECT_EQ(run("learn --algo exact --max-depth 1 --data " + path("xor.csv") + " --out " + path("t.txt")), 2);
}

TEST_F(CliTest, WitnessRow) {
  const auto space = testing::scan_space();
  save_tree(dir_ / "o.txt", testing::scan_oracle(space));
  save_tree(dir_ / "l.txt", testing::scan_learned(space));
  ASSERT_EQ(run("doe --oracle " + path("o.txt") + " --tree " + path("l.txt") + " --witness"), 0);
  const auto out = read("stdout.txt");
  const auto nl = out.find('\n');
  EXPECT_EQ(out.substr(0, nl), "5 8 0.625");
  const auto row = out.substr(nl + 1);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 3);
}

TEST_F(CliTest, ExperimentCsv) {
  ASSERT_EQ(run("experiment --features 6 --depth 3 --sizes 8,16 --mode complete --algos id3,gini:2 --trials 3 --seed 1 --out " +
                path("r.csv")),
            0)
      << read("stderr.txt");
  const auto csv = read("r.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "learner,num_features,depth,size,mode,trials,mean_doe,std_doe,seed");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_NE(csv.find("\ngini,6,3,16,complete,2,"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("gen-oracle --features 3 --depth 4 --out " + path("x.txt")), 1);
  EXPECT_EQ(run("learn --algo c45 --data x.csv --out y.txt"), 1);
  EXPECT_EQ(run("experiment --features 4 --depth 2 --sizes 17 --mode unique --algos id3 --out -"), 1);
  EXPECT_EQ(run("gen-oracle --help"), 0);
}

TEST_F(CliTest, RuntimeErrors) {
  EXPECT_EQ(run("doe --oracle " + path("missing.txt") + " --tree " + path("missing.txt")), 2);
  write_text_file(dir_ / "bad.txt", "(f1 (v1 (leaf c0))");
  EXPECT_EQ(run("learn --algo id3 --data " + path("bad.txt") + " --space " + path("none.space") + " --out " + path("o.txt")), 2);
}

}  // namespace
}  // namespace dtbench
