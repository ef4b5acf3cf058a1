#include "microswim/cli.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace microswim {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "microswim");
  std::vector<const char*> argv;
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("microswim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, ConnectionTable) {
  const auto r = run({"connection", "--out", (dir_ / "o").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("theta1"), std::string::npos);
  EXPECT_NE(r.out.find("wz"), std::string::npos);
  EXPECT_NE(r.out.find("rank 4"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "connection.csv"));
}

TEST_F(CliTest, ConnectionJson) {
  const auto r = run({"connection", "--format", "json", "--out", (dir_ / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(dir_ / "o" / "connection.json"));
  EXPECT_EQ(j["rank"], 4);
  EXPECT_EQ(j["matrix"].size(), 6U);
  EXPECT_EQ(j["matrix"][0].size(), 4U);
}

TEST_F(CliTest, MalformedConfigIsUsageError) {
  const auto cfg = write_config("bad.json", R"({"fluid": {"viscosity": "thick"}})");
  const auto r = run({"connection", "--config", cfg.string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("fluid.viscosity"), std::string::npos);
}

TEST_F(CliTest, UnknownSubcommandAndFormat) {
  EXPECT_EQ(run({"swim"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"connection", "--format", "svg"}).code, kExitUsage);
  EXPECT_EQ(run({"connection", "--format", "pdf"}).code, kExitUsage);
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const auto cfg = write_config("short.json", R"({"integration": {"dt": 0.5, "duration": 30}})");
  ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", (dir_ / "a").string()}).code, 0);
  ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", (dir_ / "b").string()}).code, 0);
  const std::string a = slurp(dir_ / "a" / "trajectory.csv");
  EXPECT_EQ(a, slurp(dir_ / "b" / "trajectory.csv"));
  EXPECT_EQ(a.rfind("t,x,y,z,alpha,beta,gamma,vx,vy,vz,wx,wy,wz,theta1,phi1,theta2,phi2\n", 0), 0U);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 62);
}

TEST_F(CliTest, SimulateAllFormats) {
  const auto cfg = write_config("short.json", R"({"integration": {"dt": 0.5, "duration": 10}})");
  const auto r = run({"simulate", "--config", cfg.string(), "--out", (dir_ / "o").string(), "--format", "csv",
                      "--format", "svg", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"trajectory.csv", "summary.json", "joint_positions.svg", "joint_velocities.svg",
                        "translational_velocity.svg", "rotational_velocity.svg", "translation.svg",
                        "euler_angles.svg"}) {
    EXPECT_TRUE(fs::exists(dir_ / "o" / f)) << f;
  }
  const auto j = nlohmann::json::parse(slurp(dir_ / "o" / "summary.json"));
  EXPECT_EQ(j["steps"], 20);
}

TEST_F(CliTest, ZeroDurationWritesHeaderOnly) {
  const auto cfg = write_config("zero.json", R"({"integration": {"dt": 0.1, "duration": 0}})");
  ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", (dir_ / "o").string()}).code, 0);
  EXPECT_EQ(slurp(dir_ / "o" / "trajectory.csv"),
            "t,x,y,z,alpha,beta,gamma,vx,vy,vz,wx,wy,wz,theta1,phi1,theta2,phi2\n");
}

TEST_F(CliTest, DtLongerThanDurationIsRejected) {
  const auto cfg = write_config("dt.json", R"({"integration": {"dt": 2, "duration": 1}})");
  const auto r = run({"simulate", "--config", cfg.string(), "--out", (dir_ / "o").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(fs::exists(dir_ / "o" / "trajectory.csv"));
}

TEST_F(CliTest, ControllabilityReport) {
  const auto r = run({"controllability", "--out", (dir_ / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["cumulative_dims"][0], 4);
  EXPECT_EQ(j["dim"], 6);
  EXPECT_EQ(j["verdict"], "translation x,y,z; rotation x,y,z (spans se(3))");
  EXPECT_EQ(j["planar_decomposition"]["theta_actuation"]["dim"], 3);
  EXPECT_EQ(j, nlohmann::json::parse(slurp(dir_ / "o" / "controllability.json")));

  const auto cfg = write_config("d1.json", R"({"analysis": {"depth": 1}})");
  const auto d1 = nlohmann::json::parse(run({"controllability", "--config", cfg.string(), "--out",
                                            (dir_ / "o").string()}).out);
  EXPECT_EQ(d1["cumulative_dims"], nlohmann::json::array({4}));
}

TEST_F(CliTest, ValidatePassesAndCorruptionFailsLoudly) {
  const auto good = write_config("good.json", R"({"validation": {"shapes": 4, "segments": 400, "tolerance": 1e-5,
                                                 "convergence_segments": [100, 200]}})");
  const auto ok = run({"validate", "--config", good.string(), "--out", (dir_ / "ok").string(), "--format", "json"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_NE(ok.out.find("PASS"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "ok" / "validation.json"));

  const auto bad = write_config("bad.json", R"({"drag": {"force_scale": 1},
                                               "validation": {"shapes": 4, "segments": 400, "tolerance": 1e-5,
                                                              "convergence_segments": [100, 200]}})");
  const auto fail = run({"validate", "--config", bad.string(), "--out", (dir_ / "bad").string(), "--format", "json",
                         "--format", "csv"});
  EXPECT_EQ(fail.code, kExitFailure);
  EXPECT_NE(fail.err.find("force scale"), std::string::npos);
  // Partial outputs are removed.
  EXPECT_FALSE(fs::exists(dir_ / "bad" / "validation.json"));
  EXPECT_FALSE(fs::exists(dir_ / "bad" / "convergence.csv"));
}

TEST_F(CliTest, SeedFlagOverridesConfig) {
  const auto cfg = write_config("v.json", R"({"validation": {"shapes": 2, "segments": 100, "tolerance": 1e-3,
                                              "convergence_segments": [50, 100]}})");
  const auto r = run({"validate", "--config", cfg.string(), "--seed", "7", "--out", (dir_ / "o").string(),
                      "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "o" / "validation.json"))["seed"], 7);
}

TEST_F(CliTest, LogLevelFromEnvironment) {
  ::setenv("MICROSWIM_LOG", "info", 1);
  const auto r = run({"connection", "--out", (dir_ / "o").string()});
  ::unsetenv("MICROSWIM_LOG");
  EXPECT_NE(r.err.find("[info]"), std::string::npos);
  EXPECT_EQ(run({"connection", "--out", (dir_ / "o").string()}).err.find("[info]"), std::string::npos);
}

}  // namespace
}  // namespace microswim
