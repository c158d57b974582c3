#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ruingame/manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const json kP0 = json::parse(R"({
  "market": {"mu": 0.08, "r": 0.02, "sigma": 0.2, "lambda": 0.04, "rho": 1.0, "a": 1.0},
  "e": {"kind": "constant", "value": 0.5},
  "l": {"kind": "constant", "value": 0.0}
})");

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("ruingame_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const json& j, const std::string& name = "config.json") {
    const auto path = dir_ / name;
    std::ofstream(path) << j.dump(2);
    return path.string();
  }

  int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + RUINGAME_CLI_PATH + " " + args + " 2>" +
                            (dir_ / "stderr.txt").string() + " >" + (dir_ / "stdout.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  std::vector<std::vector<std::string>> csv(const fs::path& p) const {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(read(p));
    for (std::string line; std::getline(in, line);) {
      std::vector<std::string> cells;
      std::istringstream ls(line);
      for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
      rows.push_back(cells);
    }
    return rows;
  }

  fs::path dir_;
};

TEST_F(CliTest, ValueWritesGridWithHeader) {
  auto cfg = kP0;
  cfg["x_grid"] = {{"lo", 1.0}, {"hi", 8.0}, {"step", 0.1}};
  const auto out = dir_ / "out";
  ASSERT_EQ(run("value --config " + write_config(cfg) + " --out " + out.string()), 0);
  const auto rows = csv(out / "value.csv");
  ASSERT_EQ(rows.size(), 72u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "U", "pi_star"}));
  EXPECT_DOUBLE_EQ(std::stod(rows[1][1]), 1.0);
  const double d = 1.0 + 0.5 / 0.085;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (std::stod(rows[i][0]) >= d) {
      EXPECT_EQ(std::stod(rows[i][1]), 0.0) << rows[i][0];
      EXPECT_EQ(std::stod(rows[i][2]), 0.0) << rows[i][0];
    }
  }

  const auto summary = json::parse(read(out / "summary.json"));
  EXPECT_EQ(summary.at("b"), "inf");
  EXPECT_NEAR(summary.at("d").get<double>(), d, 1e-9);
}

TEST_F(CliTest, NumbersUseSeventeenSignificantDigits) {
  auto cfg = kP0;
  cfg["x_grid"] = {{"lo", 1.0}, {"hi", 1.1}, {"step", 0.1}};
  const auto out = dir_ / "out";
  ASSERT_EQ(run("value --config " + write_config(cfg) + " --out " + out.string()), 0);
  const auto rows = csv(out / "value.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "1");
  EXPECT_EQ(rows[2][0], "1.1000000000000001");
  EXPECT_NEAR(std::stod(rows[2][1]), 1.0 - 0.1 * 0.085 / 0.5, 1e-14);
}

TEST_F(CliTest, ManifestRecordsHashesOfEveryTable) {
  auto cfg = kP0;
  cfg["x_grid"] = {{"lo", 1.0}, {"hi", 2.0}, {"step", 0.5}};
  const auto out = dir_ / "out";
  ASSERT_EQ(run("value --config " + write_config(cfg) + " --out " + out.string()), 0);
  const auto m = json::parse(read(out / "manifest.json"));
  EXPECT_EQ(m.at("command"), "value");
  EXPECT_EQ(m.at("config_hash"), ruingame::sha256_hex(cfg.dump()));
  EXPECT_FALSE(m.at("artifact_version").get<std::string>().empty());
  EXPECT_GE(m.at("wall_clock_seconds").get<double>(), 0.0);
  for (const char* name : {"value.csv", "summary.json"})
    EXPECT_EQ(m.at("tables").at(name), ruingame::sha256_hex(read(out / name))) << name;
}

TEST_F(CliTest, OutputDirFromConfigIsUsedWithoutOut) {
  auto cfg = kP0;
  cfg["x_grid"] = {{"lo", 1.0}, {"hi", 2.0}, {"step", 0.5}};
  cfg["output_dir"] = (dir_ / "from_config").string();
  ASSERT_EQ(run("value --config " + write_config(cfg)), 0);
  EXPECT_TRUE(fs::exists(dir_ / "from_config" / "value.csv"));
}

TEST_F(CliTest, EmptyGridIsAValidationError) {
  auto cfg = kP0;
  cfg["x_grid"] = {{"lo", 2.0}, {"hi", 1.0}, {"step", 0.1}};
  EXPECT_EQ(run("value --config " + write_config(cfg) + " --out " + (dir_ / "o").string()), 1);
}

TEST_F(CliTest, UnknownKeysAreRejected) {
  auto cfg = kP0;
  cfg["x_grid"] = {{"lo", 1.0}, {"hi", 2.0}, {"step", 0.5}};
  cfg["colour"] = "blue";
  EXPECT_EQ(run("value --config " + write_config(cfg) + " --out " + (dir_ / "o").string()), 1);
  EXPECT_NE(read(dir_ / "stderr.txt").find("colour"), std::string::npos);

  auto nested = kP0;
  nested["market"]["gamma"] = 1.0;
  EXPECT_EQ(run("validate --config " + write_config(nested)), 1);
}

TEST_F(CliTest, ValidateReportsAndExits) {
  EXPECT_EQ(run("validate --config " + write_config(kP0)), 0);

  auto bad = kP0;
  bad["market"]["mu"] = 0.01;
  EXPECT_EQ(run("validate --config " + write_config(bad)), 1);
  EXPECT_FALSE(read(dir_ / "stderr.txt").empty());

  auto neg = kP0;
  neg["market"]["lambda"] = -0.04;
  EXPECT_EQ(run("validate --config " + write_config(neg)), 1);
}

TEST_F(CliTest, InvalidProblemStopsEveryCommand) {
  auto bad = kP0;
  bad["market"]["sigma"] = 0.0;
  bad["x_grid"] = {{"lo", 1.0}, {"hi", 2.0}, {"step", 0.5}};
  const auto out = dir_ / "out";
  EXPECT_EQ(run("value --config " + write_config(bad) + " --out " + out.string()), 1);
  EXPECT_FALSE(fs::exists(out / "value.csv"));
}

TEST_F(CliTest, MissingOrMalformedConfigFails) {
  EXPECT_EQ(run("value --config " + (dir_ / "absent.json").string()), 1);
  std::ofstream(dir_ / "broken.json") << "{ not json";
  EXPECT_EQ(run("value --config " + (dir_ / "broken.json").string()), 1);
  EXPECT_EQ(run("no-such-command --config x"), 1);
}

TEST_F(CliTest, HjbCheckPassesForTheValueAndBreachesWhenPerturbed) {
  auto cfg = kP0;
  const auto out = dir_ / "out";
  ASSERT_EQ(run("hjb-check --config " + write_config(cfg) + " --out " + out.string()), 0);
  const auto rows = csv(out / "hjb.csv");
  EXPECT_EQ(rows.size(), 101u);
  EXPECT_TRUE(json::parse(read(out / "summary.json")).at("passed").get<bool>());

  cfg["hjb"] = {{"perturbation", 0.01}};
  EXPECT_EQ(run("hjb-check --config " + write_config(cfg) + " --out " + out.string()), 3);
  EXPECT_FALSE(json::parse(read(out / "summary.json")).at("passed").get<bool>());

  cfg["hjb"] = {{"threshold", 0.0}};
  EXPECT_EQ(run("hjb-check --config " + write_config(cfg) + " --out " + out.string()), 3);
}

TEST_F(CliTest, GameCostMatchesTheValue) {
  auto cfg = kP0;
  cfg["x_list"] = {1.0, 2.0, 7.0};
  const auto out = dir_ / "out";
  ASSERT_EQ(run("game-cost --config " + write_config(cfg) + " --out " + out.string()), 0);
  const auto rows = csv(out / "saddle.csv");
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "policy", "cost", "U_ref", "abs_gap"}));
  const double u2 = 1.0 - 0.085 / 0.5;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double x = std::stod(rows[i][0]);
    const double expect = x == 1.0 ? 1.0 : x == 2.0 ? u2 : 0.0;
    EXPECT_NEAR(std::stod(rows[i][2]), expect, 1e-9) << rows[i][0] << " " << rows[i][1];
  }
  const auto summary = json::parse(read(out / "summary.json"));
  for (const auto& s : summary.at("saddle")) EXPECT_TRUE(s.at("bound_holds").get<bool>());
}

TEST_F(CliTest, OracleBreachAndNonConvergence) {
  auto cfg = kP0;
  cfg["x_grid"] = {{"lo", 1.0}, {"hi", 3.0}, {"step", 0.5}};
  cfg["oracle"] = {{"h_x", 0.1}, {"h_t", 0.1}, {"p_points", 21}, {"theta_points", 11},
                   {"threshold", 1e-12}};
  const auto out = dir_ / "out";
  EXPECT_EQ(run("value --config " + write_config(cfg) + " --out " + out.string()), 3);
  EXPECT_TRUE(fs::exists(out / "oracle.csv"));

  cfg["oracle"]["threshold"] = 0.1;
  EXPECT_EQ(run("value --config " + write_config(cfg) + " --out " + out.string()), 0);

  cfg["oracle"]["max_sweeps"] = 2;
  EXPECT_EQ(run("value --config " + write_config(cfg) + " --out " + out.string()), 2);
  EXPECT_NE(read(dir_ / "stderr.txt").find("numerical fault"), std::string::npos);
}

json small_sim() {
  auto cfg = kP0;
  cfg["x"] = 2.0;
  cfg["policy"] = {{"kind", "pi_star"}};
  cfg["sim"] = {{"n", 4}, {"dt", 0.01}, {"paths", 3000}, {"seed", 7}, {"estimator", "tilted"}};
  return cfg;
}

TEST_F(CliTest, SimulateIsReproducibleAcrossWorkerCounts) {
  const auto path = write_config(small_sim());
  ASSERT_EQ(run("simulate --config " + path + " --out " + (dir_ / "w1").string() + " --workers 1"),
            0);
  ASSERT_EQ(run("simulate --config " + path + " --out " + (dir_ / "w4").string() + " --workers 4"),
            0);
  ASSERT_EQ(run("simulate --config " + path + " --out " + (dir_ / "env").string(),
                "RUINGAME_WORKERS=3"),
            0);
  const auto ref = read(dir_ / "w1" / "sim.csv");
  EXPECT_EQ(read(dir_ / "w4" / "sim.csv"), ref);
  EXPECT_EQ(read(dir_ / "env" / "sim.csv"), ref);
  const auto m1 = json::parse(read(dir_ / "w1" / "manifest.json"));
  const auto m4 = json::parse(read(dir_ / "w4" / "manifest.json"));
  EXPECT_EQ(m1.at("tables").at("sim.csv"), m4.at("tables").at("sim.csv"));

  const auto rows = csv(dir_ / "w1" / "sim.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][0], "n");
  EXPECT_EQ(rows[1][1], "tilted");
  EXPECT_NEAR(std::stod(rows[1][3]), 0.83, 0.01);
}

TEST_F(CliTest, InvalidWorkerCountIsRejected) {
  const auto path = write_config(small_sim());
  EXPECT_EQ(run("simulate --config " + path + " --out " + (dir_ / "o").string() + " --workers 0"),
            1);
}

TEST_F(CliTest, PolicyAboveItsBoundIsRejected) {
  auto cfg = small_sim();
  cfg["policy"] = {{"kind", "constant"}, {"value", 5.0}, {"m1", 1.0}};
  EXPECT_EQ(run("simulate --config " + write_config(cfg) + " --out " + (dir_ / "o").string()), 1);
}

TEST_F(CliTest, ConvergenceWritesOneRowPerN) {
  auto cfg = small_sim();
  cfg["n_list"] = {1, 2, 4};
  const auto out = dir_ / "out";
  ASSERT_EQ(run("convergence --config " + write_config(cfg) + " --out " + out.string()), 0);
  const auto rows = csv(out / "sim.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1][0], "1");
  EXPECT_EQ(rows[3][0], "4");
  EXPECT_TRUE(json::parse(read(out / "summary.json")).contains("gap_non_increasing_within_3se"));
}

TEST_F(CliTest, ShippedConfigsParse) {
  for (const auto& entry : fs::directory_iterator(RUINGAME_CONFIG_DIR)) {
    if (entry.path().extension() == ".json") {
      EXPECT_EQ(run("validate --config " + entry.path().string()), 0) << entry.path();
    }
  }
}

}  // namespace
