#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lasso_path_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the binary with `args`; stdout goes to `stdout_file` when given.
  int run(const std::string& args, const std::string& stdout_file = "",
          const std::string& env = "") const {
    std::string cmd = env + " " + LASSO_PATH_BIN + " " + args;
    cmd += " > " + (stdout_file.empty() ? std::string("/dev/null") : stdout_file);
    cmd += " 2> " + file("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, WorstCaseSixHas365Segments) {
  ASSERT_EQ(run("gen --p 6 --out " + file("p6.json")), 0);
  ASSERT_EQ(run("path " + file("p6.json") + " --exact --out " + file("p6.path.json")), 0);
  ASSERT_EQ(run("stats " + file("p6.path.json"), file("stats.json")), 0);
  const auto stats = nlohmann::json::parse(read(file("stats.json")));
  EXPECT_EQ(stats["segments"].get<int>(), 365);
  EXPECT_TRUE(stats["upper_bound_ok"].get<bool>());
  EXPECT_TRUE(stats["antipodal_free"].get<bool>());
}

TEST_F(Cli, ApproximatePathVerifies) {
  ASSERT_EQ(run("gen --p 20 --random --n 60 --seed 3 --out " + file("r.json")), 0);
  ASSERT_EQ(run("path " + file("r.json") + " --approx --eps 0.1 --out " + file("r.path.json")), 0);
  EXPECT_EQ(run("verify " + file("r.json") + " " + file("r.path.json") + " --eps 0.1 --samples 50",
                file("report.json")),
            0);
  const auto rep = nlohmann::json::parse(read(file("report.json")));
  EXPECT_TRUE(rep["pass"].get<bool>());
  EXPECT_EQ(rep["samples_checked"].get<int>(), 50);
}

TEST_F(Cli, VerificationFailureExitsOne) {
  ASSERT_EQ(run("gen --p 10 --random --n 40 --seed 1 --out " + file("a.json")), 0);
  ASSERT_EQ(run("gen --p 10 --random --n 40 --seed 2 --out " + file("b.json")), 0);
  ASSERT_EQ(run("path " + file("a.json") + " --out " + file("a.path.json")), 0);
  EXPECT_EQ(run("verify " + file("b.json") + " " + file("a.path.json") + " --eps 0.01"), 1);
}

TEST_F(Cli, DuplicateColumnsTruncate) {
  {
    std::ofstream csv(file("dup.csv"));
    csv << "x1,x2,x3,y\n1,1,0,1\n0,0,1,2\n1,1,1,0.5\n";
  }
  EXPECT_EQ(run("path " + file("dup.csv") + " --exact --out " + file("dup.path.json")), 3);
  ASSERT_TRUE(fs::exists(file("dup.path.json")));
  const auto doc = nlohmann::json::parse(read(file("dup.path.json")));
  EXPECT_EQ(doc["status"].get<std::string>(), "singular");
  EXPECT_GE(doc["kinks"].size(), 1u);
}

TEST_F(Cli, ParseErrorsExitTwo) {
  {
    std::ofstream csv(file("bad.csv"));
    csv << "x,y\n1,2\n3,oops\n";
  }
  EXPECT_EQ(run("path " + file("bad.csv")), 2);
  EXPECT_NE(read(file("stderr.txt")).find("line 3"), std::string::npos);
  EXPECT_EQ(run("path " + file("missing.json")), 2);
  EXPECT_EQ(run("gen --p 0"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(Cli, NormalizeRejectsConstantColumn) {
  {
    std::ofstream csv(file("const.csv"));
    csv << "x1,x2,y\n1,2,1\n1,5,2\n1,0,3\n";
  }
  EXPECT_EQ(run("path " + file("const.csv") + " --normalize"), 2);
  EXPECT_EQ(run("path " + file("const.csv") + " --format csv", file("ok.json")), 0);
}

TEST_F(Cli, PlotData) {
  ASSERT_EQ(run("gen --p 2 --out " + file("p2.json")), 0);
  ASSERT_EQ(run("path " + file("p2.json") + " --out " + file("p2.path.json")), 0);
  ASSERT_EQ(run("plot-data " + file("p2.path.json") + " --out " + file("plot.csv")), 0);
  std::istringstream lines(read(file("plot.csv")));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "lambda,w0,w1");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST_F(Cli, LogLevel) {
  {
    std::ofstream csv(file("bad.csv"));
    csv << "x,y\n1,2\n3,oops\n";
  }
  EXPECT_EQ(run("path " + file("bad.csv"), "", "LASSO_PATH_LOG=quiet"), 2);
  EXPECT_TRUE(read(file("stderr.txt")).empty());
  ASSERT_EQ(run("gen --p 3 --out " + file("p3.json")), 0);
  EXPECT_EQ(run("path " + file("p3.json"), "", "LASSO_PATH_LOG=info"), 0);
  EXPECT_NE(read(file("stderr.txt")).find("14 segments"), std::string::npos);
}
