#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "rootcause/io.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(ROOTCAUSE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rootcause_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SimulateDiscoverEvaluate) {
  ASSERT_EQ(run("simulate --tiers 4,3,1 --edge-prob 0.4 --m 400 --seed 3 --out-data " +
                path("data.csv") + " --out-truth " + path("truth.csv")),
            0);
  ASSERT_EQ(run("discover --algo pc --in " + path("data.csv") + " --out " + path("pc.csv")), 0);
  EXPECT_TRUE(fs::exists(path("pc.json")));
  EXPECT_EQ(run("evaluate --learned " + path("pc.csv") + " --truth " + path("truth.csv") +
                " --out " + path("eval.json")),
            0);
  std::ifstream in(path("eval.json"));
  const auto j = nlohmann::json::parse(in);
  for (const char* key : {"tp", "fp", "fn", "tn"}) EXPECT_TRUE(j.at("counts").contains(key)) << key;
  for (const char* key : {"shd", "precision", "recall", "f1"}) EXPECT_TRUE(j.contains(key)) << key;
}

TEST_F(CliTest, ConfigurationErrorsExitWithTwo) {
  EXPECT_EQ(run("discover --algo ges --in x.csv --out y.csv"), 2);
  EXPECT_EQ(run("simulate --edge-prob 1.5 --m 10 --out-data " + path("d.csv") + " --out-truth " +
                path("t.csv")),
            2);
  EXPECT_EQ(run("discover --algo pc --in " + path("missing.csv") + " --out " + path("o.csv")), 2);
  EXPECT_EQ(run("bench --trials 0 --out-dir " + path("b")), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  std::ofstream(path("bad.json")) << "{\"trails\": 3}";
  EXPECT_EQ(run("bench --config " + path("bad.json") + " --out-dir " + path("b")), 2);
}

TEST_F(CliTest, EvaluateRejectsMismatchedLabels) {
  std::ofstream(path("a.csv")) << "x,y\n0,1\n0,0\n";
  std::ofstream(path("b.csv")) << "y,x\n0,1\n0,0\n";
  EXPECT_EQ(run("evaluate --learned " + path("a.csv") + " --truth " + path("b.csv")), 2);
}

TEST_F(CliTest, BenchAndReport) {
  ASSERT_EQ(run("bench --algos pc --tiers 4,3,1 --m-grid 200,400 --trials 2 --seed 5 --out-dir " +
                path("bench")),
            0);
  for (const char* f : {"records.csv", "aggregates.csv", "long.csv", "report.md", "report.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "bench" / f)) << f;
  }
  std::ifstream agg(path("bench/aggregates.csv"));
  const rootcause::io::CsvTable t = rootcause::io::read_csv(agg);
  EXPECT_EQ(t.header, (std::vector<std::string>{"algorithm", "m", "metric", "mean", "std", "n"}));
  EXPECT_EQ(run("report --in-dir " + path("bench") + " --out-dir " + path("again")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "again" / "report.md"));
}
