#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rrk/analysis.hpp"
#include "rrk/cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rrk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rrk::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rrk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

// Summary line fields: method precond iters min_ne elapsed.
double min_ne_of(const std::string& summary) {
  std::istringstream s(summary);
  std::string method, precond;
  std::size_t iters = 0;
  double min_ne = 0.0;
  s >> method >> precond >> iters >> min_ne;
  return min_ne;
}

TEST_F(Cli, GpNrSsorSolveReachesRoundoff) {
  const auto r = run({"solve", "--problem", "gp", "--rho", "12", "--gamma", "12", "--method", "ab-rrgmres", "--precond", "nrssor",
                      "--inner-iters", "1", "--omega", "1.0", "--seed", "7", "--tol", "1e-12", "--output", path("gp.csv")});
  EXPECT_TRUE(r.code == 0 || r.code == 2);
  EXPECT_LE(min_ne_of(r.out), 1e-12) << r.out;
  EXPECT_EQ(r.out.rfind("ab-rrgmres nrssor ", 0), 0u);
  EXPECT_LE(rrk::read_history_csv(fs::path(path("gp.csv"))).min_ne(), 1e-12);
}

TEST_F(Cli, GpPlainRrgmresDoesNotConverge) {
  const auto r = run({"solve", "--problem", "gp", "--method", "rrgmres", "--precond", "none", "--seed", "7"});
  EXPECT_EQ(r.code, 2);
  EXPECT_GT(min_ne_of(r.out), 1e-2);
}

TEST_F(Cli, GeneratedFileMatchesInMemoryRun) {
  ASSERT_EQ(run({"generate", "--problem", "index2", "--rho", "12", "--gamma", "15", "--output", path("a.mtx")}).code, 0);
  const std::vector<std::string> common{"--method", "ab-rrgmres", "--precond", "nrssor", "--seed", "3", "--tol", "1e-10"};
  auto file_args = std::vector<std::string>{"solve", "--matrix", path("a.mtx"), "--output", path("file.csv")};
  auto mem_args = std::vector<std::string>{"solve", "--problem", "index2", "--rho", "12", "--gamma", "15", "--output", path("mem.csv")};
  file_args.insert(file_args.end(), common.begin(), common.end());
  mem_args.insert(mem_args.end(), common.begin(), common.end());
  const auto f = run(file_args), m = run(mem_args);
  EXPECT_EQ(f.code, m.code);
  EXPECT_EQ(slurp(path("file.csv")), slurp(path("mem.csv")));
  EXPECT_FALSE(slurp(path("mem.csv")).empty());
}

TEST_F(Cli, RepeatedRunsGiveByteIdenticalCsv) {
  const std::vector<std::string> args{"solve", "--problem", "gp", "--method", "ab-gmres", "--precond", "diag-at", "--seed", "11"};
  auto a = args, b = args;
  a.insert(a.end(), {"--output", path("1.csv")});
  b.insert(b.end(), {"--output", path("2.csv")});
  run(a);
  run(b);
  EXPECT_EQ(slurp(path("1.csv")), slurp(path("2.csv")));
  const auto bench = std::vector<std::string>{"bench", "--problem", "gp", "--sweep", "nrssor:2,at", "--tol", "1e-9"};
  a = bench;
  b = bench;
  a.insert(a.end(), {"--output", path("b1.csv")});
  b.insert(b.end(), {"--output", path("b2.csv")});
  run(a);
  run(b);
  EXPECT_EQ(slurp(path("b1.csv")), slurp(path("b2.csv")));
}

TEST_F(Cli, RecordTimeFillsTimingColumn) {
  run({"solve", "--problem", "gp", "--precond", "nrssor", "--output", path("t.csv"), "--record-time"});
  const auto h = rrk::read_history_csv(fs::path(path("t.csv")));
  EXPECT_GT(h.entries().back().elapsed_sec, 0.0);
  run({"solve", "--problem", "gp", "--precond", "nrssor", "--output", path("z.csv")});
  EXPECT_EQ(rrk::read_history_csv(fs::path(path("z.csv"))).entries().back().elapsed_sec, 0.0);
}

TEST_F(Cli, BenchGpSweepFavoursNrSsor) {
  const auto r = run({"bench", "--problem", "gp", "--sweep", "nrssor:1,diag-at,at", "--tol", "1e-10", "--seed", "7",
                      "--output", path("bench.csv")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  std::ifstream in(path("bench.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "method,precond,inner_iters,iters,iter_at_min,min_ne,final_ne,tno_sec,status");
  std::vector<std::size_t> iters;
  while (std::getline(in, line)) {
    std::istringstream s(line);
    std::string field;
    for (int k = 0; k < 4; ++k) std::getline(s, field, ',');
    iters.push_back(std::stoul(field));
  }
  ASSERT_EQ(iters.size(), 3u);
  EXPECT_LE(static_cast<double>(iters[0]), 0.7 * static_cast<double>(iters[1]));
  EXPECT_LE(static_cast<double>(iters[0]), 0.7 * static_cast<double>(iters[2]));
}

TEST_F(Cli, EmptySweepIsUsageError) {
  const auto r = run({"bench", "--problem", "gp", "--sweep", ""});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("sweep"), std::string::npos);
  EXPECT_EQ(run({"bench", "--problem", "gp", "--sweep", "nrssor:x"}).code, 1);
  EXPECT_EQ(run({"bench", "--problem", "gp", "--sweep", "ilu"}).code, 1);
}

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run({"solve", "--problem", "gp", "--bogus"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"solve"}).code, 1);
  EXPECT_EQ(run({"solve", "--problem", "gp", "--matrix", "x.mtx"}).code, 1);
  const auto missing = run({"solve", "--matrix", path("missing.mtx")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("missing.mtx"), std::string::npos);
  EXPECT_EQ(run({"solve", "--problem", "gp", "--method", "ab-rrgmres", "--precond", "none"}).code, 1);
  EXPECT_EQ(run({"solve", "--problem", "gp", "--method", "gmres", "--precond", "at"}).code, 1);
  EXPECT_EQ(run({"solve", "--problem", "gp", "--precond", "nrssor", "--inner-iters", "0"}).code, 1);
  EXPECT_EQ(run({"solve", "--problem", "gp", "--omega", "2.0"}).code, 1);
  EXPECT_EQ(run({"solve", "--problem", "gp", "--tol", "0"}).code, 1);
  EXPECT_EQ(run({"solve", "--problem", "gp", "--rho", "-1"}).code, 1);
  EXPECT_EQ(run({"generate", "--problem", "gp"}).code, 1);
}

TEST_F(Cli, HelpListsEveryFlagWithDefaults) {
  const auto r = run({"solve", "--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--problem", "--matrix", "--transpose", "--compact", "--rho FLOAT [12]", "--gamma FLOAT [12]", "--seed",
                           "--rhs", "--noise", "--method", "--precond", "--inner-iters", "--omega", "--tol", "--max-iters",
                           "--breakdown-tol", "--orthogonalization", "--record-time", "--output"})
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  for (const char* def : {"[inconsistent]", "[0.01]", "[ab-rrgmres]", "[auto]", "[1e-07]", "[1e-14]", "[mgs]"})
    EXPECT_NE(r.out.find(def), std::string::npos) << def;
  const auto all = run({"--help-all"});
  EXPECT_EQ(all.code, 0);
  for (const char* sub : {"generate", "solve", "verify", "bench", "--sweep"}) EXPECT_NE(all.out.find(sub), std::string::npos);
}

TEST_F(Cli, VerifyGpPasses) {
  const auto r = run({"verify", "--problem", "gp"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("rank=64"), std::string::npos);
  EXPECT_NE(r.out.find("clustered=64 zero=64 outliers=0"), std::string::npos);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST_F(Cli, RectangularFileWithTransposeCompactAndUniformRhs) {
  const std::string fixture = std::string(RRK_TEST_DATA_DIR) + "/small_rect.mtx";
  const auto r = run({"solve", "--matrix", fixture, "--transpose", "--compact", "--rhs", "uniform", "--method", "ab-rrgmres",
                      "--precond", "nrssor", "--inner-iters", "4", "--output", path("rect.csv")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_LT(min_ne_of(r.out), 1e-7);
  const auto b = run({"bench", "--matrix", fixture, "--transpose", "--compact", "--rhs", "uniform", "--sweep", "nrssor:4,at"});
  EXPECT_EQ(b.code, 0) << b.out << b.err;
  const auto v = run({"verify", "--matrix", fixture, "--transpose", "--compact", "--inner-iters", "3", "--omega", "1.2"});
  EXPECT_EQ(v.code, 0) << v.out;
}

TEST_F(Cli, MaxItersCapReportsNotConverged) {
  const auto r = run({"solve", "--problem", "gp", "--precond", "at", "--max-iters", "3", "--output", path("cap.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(rrk::read_history_csv(fs::path(path("cap.csv"))).size(), 3u);
}

}  // namespace
