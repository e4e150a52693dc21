#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "memsat/cnf.hpp"
#include "memsat/io.hpp"

namespace memsat {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "memsat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("memsat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  fs::path dir_;
};

TEST_F(Cli, GenThenSolve) {
  const auto cnf = path("inst.cnf");
  auto g = run({"--seed", "3", "--out", cnf, "gen", "--n", "40"});
  ASSERT_EQ(g.code, cli::kExitSuccess) << g.err;
  const auto f = read_dimacs_file(cnf);
  EXPECT_EQ(f.num_clauses(), 172u);
  const auto meta = nlohmann::json::parse(read_text_file(cnf + ".json"));
  EXPECT_EQ(meta.at("seed"), 3);

  const auto json_out = path("run.json");
  auto s = run({"--seed", "1", "--out", json_out, "solve", cnf, "--trajectory", path("traj.csv")});
  ASSERT_EQ(s.code, cli::kExitSat) << s.err;
  EXPECT_NE(s.out.find("s SATISFIABLE\n"), std::string::npos);
  const auto vpos = s.out.find("\nv ");
  ASSERT_NE(vpos, std::string::npos);
  std::istringstream model(s.out.substr(vpos + 3));
  std::vector<std::int8_t> values(40);
  for (int lit; model >> lit && lit != 0;) values[std::abs(lit) - 1] = lit > 0 ? 1 : -1;
  EXPECT_TRUE(verify(f, Assignment(values)));
  EXPECT_EQ(nlohmann::json::parse(read_text_file(json_out)).at("solved"), true);
  EXPECT_EQ(read_text_file(path("traj.csv")).rfind("step,t,dt,num_unsat,max_xl\n", 0), 0u);
}

TEST_F(Cli, GenToStdoutWarnsOutsideHardRegime) {
  auto g = run({"gen", "--n", "10", "--ratio", "3.0"});
  ASSERT_EQ(g.code, cli::kExitSuccess);
  EXPECT_EQ(g.out.rfind("p cnf 10 30\n", 0), 0u);
  EXPECT_NE(g.err.find("warning"), std::string::npos);
}

TEST_F(Cli, WithheldPlanted) {
  const auto cnf = path("x.cnf");
  ASSERT_EQ(run({"--out", cnf, "gen", "--n", "20", "--withhold-planted"}).code, cli::kExitSuccess);
  EXPECT_TRUE(nlohmann::json::parse(read_text_file(cnf + ".json")).at("planted").is_null());
}

TEST_F(Cli, UnknownWhenBudgetTooSmall) {
  const auto cnf = path("big.cnf");
  ASSERT_EQ(run({"--out", cnf, "gen", "--n", "200"}).code, cli::kExitSuccess);
  const auto s = run({"solve", cnf, "--max-steps", "1"});
  EXPECT_EQ(s.code, cli::kExitUnknown);
  EXPECT_NE(s.out.find("s UNKNOWN\n"), std::string::npos);
}

TEST_F(Cli, WalkSat) {
  const auto cnf = path("w.cnf");
  ASSERT_EQ(run({"--out", cnf, "gen", "--n", "50"}).code, cli::kExitSuccess);
  EXPECT_EQ(run({"walksat", cnf, "--noise", "0.5"}).code, cli::kExitSat);
}

TEST_F(Cli, ParseErrorsExitWithError) {
  const auto bad = write("bad.cnf", "p cnf 3 1\n1 2 0\n");
  const auto r = run({"solve", bad});
  EXPECT_EQ(r.code, cli::kExitError);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  EXPECT_EQ(run({"solve", path("missing.cnf")}).code, cli::kExitError);
  EXPECT_EQ(run({}).code, cli::kExitError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitError);
}

TEST_F(Cli, HelpSucceeds) { EXPECT_EQ(run({"--help"}).code, cli::kExitSuccess); }

TEST_F(Cli, ParamsFile) {
  const auto cnf = path("p.cnf");
  ASSERT_EQ(run({"--out", cnf, "gen", "--n", "30"}).code, cli::kExitSuccess);
  const auto good = write("good.json", R"({"zeta": 0.01})");
  EXPECT_EQ(run({"--params-file", good, "solve", cnf}).code, cli::kExitSat);
  const auto bad = write("bad.json", R"({"omega": 1})");
  EXPECT_EQ(run({"--params-file", bad, "solve", cnf}).code, cli::kExitError);
}

TEST_F(Cli, Bench) {
  const auto cfg = write("sweep.json", R"({"solver":"dmm","n_values":[20,30,40],"instances_per_n":3,"seed":5,"budget":200000})");
  const auto outdir = path("bench");
  const auto r = run({"--out", outdir, "bench", "--config", cfg});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  EXPECT_EQ(r.out.rfind("solver,n,ratio,p0,solved,median_steps,p10,p90,median_t,median_max_xl,mean_dt\n", 0), 0u);
  EXPECT_TRUE(fs::exists(outdir + "/summary.csv"));
  std::ifstream runs(outdir + "/runs.jsonl");
  std::size_t lines = 0;
  for (std::string line; std::getline(runs, line);) ++lines;
  EXPECT_EQ(lines, 9u);
  EXPECT_NE(r.err.find("power-law exponent"), std::string::npos);
}

TEST_F(Cli, Analyze) {
  const auto cnf = path("a.cnf");
  ASSERT_EQ(run({"--out", cnf, "gen", "--n", "30"}).code, cli::kExitSuccess);
  const auto r = run({"analyze", cnf, "--last", "5"});
  ASSERT_EQ(r.code, cli::kExitSuccess) << r.err;
  std::istringstream rows(r.out);
  std::string header;
  std::getline(rows, header);
  EXPECT_EQ(header.rfind("step,num_unsat,newly_satisfied,newly_unsatisfied", 0), 0u);
  std::size_t count = 0;
  for (std::string line; std::getline(rows, line);) ++count;
  EXPECT_EQ(count, 5u);
}

}  // namespace
}  // namespace memsat
