#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "actor_risk/case_study.h"
#include "actor_risk/report.h"
#include "actor_risk/scenario_io.h"
#include "test_util.h"

namespace actor_risk {
namespace {

namespace fs = std::filesystem;
using testing::AddActor;
using testing::EmptyScenario;
using testing::Straight;

struct Output {
  int code = -1;
  std::string out;
};

// Runs the CLI with `args`, capturing stdout. stderr is discarded.
Output RunCli(const std::string& args) {
  const std::string cmd = std::string(ACTOR_RISK_CLI) + " " + args + " 2>/dev/null";
  Output o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return o;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("actor_risk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const Scenario& s, const std::string& name) {
    const fs::path p = dir_ / name;
    SaveScenarioFile(s, p);
    return p.string();
  }

  fs::path dir_;
};

Scenario BlockerScenario() {
  Scenario s = EmptyScenario(30);
  AddActor(s, Straight("blocker", 0.0, s.map.LaneCenter(2), 10.0, 0, 30));
  return s;
}

TEST_F(CliTest, MissingSubcommandIsConfigError) { EXPECT_EQ(RunCli("").code, 2); }

TEST_F(CliTest, RunNeedsExactlyOneScenarioSource) {
  EXPECT_EQ(RunCli("run --out " + (dir_ / "o").string()).code, 2);
}

TEST_F(CliTest, UnknownOperatorIsConfigError) {
  const std::string path = Write(BlockerScenario(), "s.json");
  EXPECT_EQ(RunCli("run --scenario " + path + " --operator cosine").code, 2);
}

TEST_F(CliTest, InvalidScenarioIsValidationError) {
  std::ofstream(dir_ / "bad.json") << "{\"version\": 1}";
  EXPECT_EQ(RunCli("oracle --scenario " + (dir_ / "bad.json").string()).code, 3);
  EXPECT_EQ(RunCli("oracle --scenario " + (dir_ / "missing.json").string()).code, 3);
}

TEST_F(CliTest, OracleEmptyScenario) {
  const Output o = RunCli("oracle --scenario " + Write(EmptyScenario(30), "s.json"));
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "universe,17\nfeasible,17\ntotal_rho,0\nactor_id,rho,feasible_without\n");
}

TEST_F(CliTest, OracleBlockerTable) {
  const Output o = RunCli("oracle --scenario " + Write(BlockerScenario(), "s.json"));
  EXPECT_EQ(o.code, 0);
  const std::string rho = FormatNumber(9.0 / 17.0);
  EXPECT_EQ(o.out, "universe,17\nfeasible,8\ntotal_rho," + rho +
                       "\nactor_id,rho,feasible_without\nblocker," + rho + ",17\n");
}

TEST_F(CliTest, OracleRedundantBlockers) {
  Scenario s = BlockerScenario();
  AddActor(s, Straight("twin", 0.5, s.map.LaneCenter(2), 10.0, 0, 30));
  const Output o = RunCli("oracle --scenario " + Write(s, "s.json"));
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("feasible,8\n"), std::string::npos);
  EXPECT_NE(o.out.find("\nblocker,0,8\n"), std::string::npos);
  EXPECT_NE(o.out.find("\ntwin,0,8\n"), std::string::npos);
}

TEST_F(CliTest, OracleDegenerateExitsFour) {
  Scenario s = EmptyScenario(30, 10.0);
  EXPECT_EQ(RunCli("oracle --scenario " + Write(s, "s.json")).code, 4);
}

TEST_F(CliTest, OracleCapExceededExitsFive) {
  const std::string path = Write(EmptyScenario(30), "s.json");
  EXPECT_EQ(RunCli("oracle --scenario " + path +
                   " --k 26 --steps 13 --maneuvers keep,shift_left,shift_right,brake,accelerate")
                .code,
            5);
}

TEST_F(CliTest, RunWritesArtifactsDeterministically) {
  Scenario s = EmptyScenario(60);
  AddActor(s, Straight("lead", 30.0, s.map.LaneCenter(1), 6.0, 0, 60));
  AddActor(s, Straight("side", 0.0, s.map.LaneCenter(2), 9.0, 0, 60));
  const std::string path = Write(s, "s.json");
  const std::string common = "run --scenario " + path + " --horizon 30 --iterations 300 --out ";
  ASSERT_EQ(RunCli(common + (dir_ / "a").string()).code, 0);
  ASSERT_EQ(RunCli(common + (dir_ / "b").string() + " --threads 2").code, 0);
  for (const char* f : {"run.csv", "phase_summary.csv", "scatter.svg", "risk_timeline.svg"}) {
    EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
  }
  const std::string csv = ReadFile(dir_ / "a" / "run.csv");
  EXPECT_EQ(csv, ReadFile(dir_ / "b" / "run.csv"));
  EXPECT_EQ(csv.rfind(std::string(kRunCsvHeader) + "\n", 0), 0u);
  // Four replans (0, 15, 30, 45) times two actors plus the header.
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  EXPECT_EQ(lines, 1u + 4u * 2u);
}

TEST_F(CliTest, CaseStudyRoundTrip) {
  const fs::path out = dir_ / "cs.json";
  ASSERT_EQ(RunCli("casestudy --out " + out.string()).code, 0);
  EXPECT_EQ(LoadScenarioFile(out), GenerateCaseStudy(CaseStudyParams::Defaults()).scenario);
  ASSERT_EQ(RunCli("casestudy --no-brake --out " + out.string()).code, 0);
  EXPECT_EQ(LoadScenarioFile(out).phases.size(), 4u);
}

}  // namespace
}  // namespace actor_risk
