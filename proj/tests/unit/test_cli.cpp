#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anlock/circuits/calibration.hpp"
#include "anlock/circuits/io.hpp"

using namespace anlock;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "anlock_cli_test";

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  fs::create_directories(kWork);
  const auto log = kWork / "stdout.txt";
  const std::string cmd = std::string(ANLOCK_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string w(const std::string& name) { return (kWork / name).string(); }

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fs::remove_all(kWork);
    ASSERT_EQ(cli("lock --bench ota --scheme smt --k 16 --seed 7 --out-dir " + w("ota")).code, 0);
  }
  static std::string inputs() {
    return " --locked " + w("ota/locked.json") + " --oracle " + w("ota/oracle.json");
  }
};

}  // namespace

TEST_F(Cli, LockWritesArtifactsAndHidesKey) {
  EXPECT_TRUE(fs::exists(kWork / "ota/chip.json"));
  const auto locked = slurp(kWork / "ota/locked.json");
  const auto chip = read_json(kWork / "ota/chip.json");
  EXPECT_EQ(locked.find("locking_key"), std::string::npos);
  EXPECT_EQ(locked.find(chip.at("locking_key").get<std::string>()), std::string::npos);
  EXPECT_EQ(locked.find("nominal_params"), std::string::npos);

  const auto quiet = cli("lock --bench ota --k 16 --seed 7 --out-dir " + w("ota2"));
  EXPECT_EQ(quiet.out.find(chip.at("locking_key").get<std::string>()), std::string::npos);
  const auto loud = cli("lock --bench ota --k 16 --seed 7 --reveal-key --out-dir " + w("ota2"));
  EXPECT_NE(loud.out.find("key " + chip.at("locking_key").get<std::string>()), std::string::npos);
  EXPECT_EQ(slurp(kWork / "ota/locked.json"), slurp(kWork / "ota2/locked.json"));
}

TEST_F(Cli, OracleMatchesLockOutput) {
  ASSERT_EQ(cli("oracle --chip " + w("ota/chip.json") + " --out " + w("o.json")).code, 0);
  EXPECT_EQ(slurp(kWork / "o.json"), slurp(kWork / "ota/oracle.json"));
}

TEST_F(Cli, AttackGaReportIsDeterministic) {
  ASSERT_EQ(cli("attack-ga" + inputs() + " --out " + w("a.json")).code, 0);
  ASSERT_EQ(cli("attack-ga" + inputs() + " --out " + w("b.json")).code, 0);
  EXPECT_EQ(slurp(kWork / "a.json"), slurp(kWork / "b.json"));
  EXPECT_EQ(slurp(kWork / "a_case2.csv"), slurp(kWork / "b_case2.csv"));
  const auto j = read_json(kWork / "a.json");
  EXPECT_EQ(j.at("Kprime"), 1);
  EXPECT_EQ(j.at("status"), "OK");
  EXPECT_EQ(j.at("keys")[0], read_json(kWork / "ota/chip.json").at("locking_key"));
}

TEST_F(Cli, FailedAttackExitsOne) {
  const auto r = cli("attack-ga" + inputs() + " --max-generations 1 --population 4 --out " + w("f.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(read_json(kWork / "f.json").at("status"), "FAILED");
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("attack-ga --locked /no/such/file --oracle /no/such/file").code, 2);
  EXPECT_EQ(cli("lock --bench nand --out-dir " + w("x")).code, 2);
  EXPECT_EQ(cli("attack-ga --case 3" + inputs()).code, 2);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST_F(Cli, ConfigFileThenFlags) {
  std::ofstream(kWork / "cfg.json") << R"({"ga": {"max_generations": 1, "population": 4}, "seed": 3})";
  EXPECT_EQ(cli("attack-ga" + inputs() + " --config " + w("cfg.json") + " --out " + w("c1.json")).code, 1);
  const auto j = read_json(kWork / "c1.json");
  EXPECT_EQ(j.at("seed"), 3);
  EXPECT_EQ(j.at("generations"), 1);
  EXPECT_EQ(cli("attack-ga" + inputs() + " --config " + w("cfg.json") +
                " --max-generations 2000 --population 40 --seed 4 --out " + w("c2.json"))
                .code,
            0);
  EXPECT_EQ(read_json(kWork / "c2.json").at("seed"), 4);
  std::ofstream(kWork / "bad.json") << R"({"ga": {"populaton": 4}})";
  EXPECT_EQ(cli("attack-ga" + inputs() + " --config " + w("bad.json")).code, 2);
}

TEST_F(Cli, EnumAndCensus) {
  ASSERT_EQ(cli("attack-enum" + inputs() + " --out " + w("e.json") + " --candidates " + w("c.csv") +
                " --smtlib " + w("c.smt2"))
                .code,
            0);
  const auto e = read_json(kWork / "e.json");
  EXPECT_EQ(e.at("keys").size(), 1u);
  EXPECT_GE(e.at("Kprime").get<int>(), 1);
  EXPECT_EQ(slurp(kWork / "c.csv").rfind("key_hex,width_residual,curve_fitness\n", 0), 0u);
  EXPECT_EQ(slurp(kWork / "c.smt2").rfind("(set-logic QF_LRA)", 0), 0u);

  ASSERT_EQ(cli("census" + inputs() + " --out " + w("census.json")).code, 0);
  const auto c = read_json(kWork / "census.json");
  EXPECT_EQ(c.at("matching"), 1);
  EXPECT_EQ(c.at("examined"), 65536);
}

TEST_F(Cli, TwoPassWritesBothTraces) {
  ASSERT_EQ(cli("two-pass" + inputs() + " --out " + w("t.json")).code, 0);
  EXPECT_TRUE(fs::exists(kWork / "t_case1.csv"));
  EXPECT_TRUE(fs::exists(kWork / "t_case2.csv"));
  EXPECT_EQ(read_json(kWork / "t.json").at("traces").size(), 2u);
}

TEST_F(Cli, CompareCsv) {
  ASSERT_EQ(cli("compare --bench ota --k 16 --seeds 2 --out-dir " + w("cmp")).code, 0);
  const auto csv = slurp(kWork / "cmp/compare.csv");
  EXPECT_EQ(csv.rfind("bench,scheme,k,attack,Kprime,t_s\n", 0), 0u);
  EXPECT_NE(csv.find("ota,smt-lock,16,ga,1,0.000000\n"), std::string::npos);
  EXPECT_NE(slurp(kWork / "cmp/compare_runs.csv").find("ota,smt-lock,16,2,smt,0,"), std::string::npos);
}

TEST(BenchmarkData, FilesMatchCalibration) {
  for (auto kind : all_kinds()) {
    const fs::path p = fs::path(ANLOCK_DATA_DIR) / "benchmarks" / (std::string(to_string(kind)) + ".json");
    ASSERT_TRUE(fs::exists(p)) << p;
    EXPECT_EQ(read_json(p), to_json(calibrate(kind))) << p;
    EXPECT_EQ(model_from_json(read_json(p)).nominal_params, calibrate(kind).nominal_params);
  }
}
