#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(MUCHLAB_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) out += buf;
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("muchlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  json summary() const {
    std::ifstream is(dir_ / "summary.json");
    return json::parse(is);
  }
  std::string out() const { return "--out " + dir_.string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, VerifyConstantsPasses) {
  const Result r = run("verify --suite constants " + out());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  const json s = summary();
  EXPECT_EQ(s["command"], "verify");
  for (const char* key : {"config", "checks", "sup_orbital_distance", "breaking"}) EXPECT_TRUE(s.contains(key)) << key;
}

TEST_F(Cli, VerifyIdentitiesWithSeed) {
  EXPECT_EQ(run("verify --suite identities --trials 10 --seed 7").code, 0);
}

TEST_F(Cli, FailingCheckExitsOne) {
  EXPECT_EQ(run("verify --suite constants --tol -1").code, 1);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("verify --suite lemmas").code, 2);
  EXPECT_EQ(run("verify --bogus").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("simulate --n 100").code, 2);
  EXPECT_EQ(run("simulate --init wave").code, 2);
  EXPECT_EQ(run("fsurface --M-range 0.1 0.2 --m-range 0.5 0.6").code, 2);
  EXPECT_EQ(run("stability-sweep --deltas 0.01,0.001").code, 2);
}

TEST_F(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").code, 0); }

TEST_F(Cli, SimulateConstantIsStationary) {
  const Result r = run("simulate --init constant --value 2 --t-end 0.1 --n 32 " + out());
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream is(dir_ / "trajectory.csv");
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,M,m,xi,H0,H1,H2,dist_to_orbit");
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string t, M, m;
    std::getline(ls, t, ',');
    std::getline(ls, M, ',');
    std::getline(ls, m, ',');
    EXPECT_NEAR(std::stod(M), 2.0, 1e-14);
    EXPECT_NEAR(std::stod(m), 2.0, 1e-14);
  }
}

TEST_F(Cli, SimulateFourierConservesEnergy) {
  const Result r = run("simulate --init fourier --mean 2 --mode 1 --amp 0.1 --t-end 1 --n 128 --dt 1e-3 "
                       "--filter-alpha 0 --record-every 100 --tol 1e-8 " + out());
  EXPECT_EQ(r.code, 0) << r.out;
  const json s = summary();
  bool found = false;
  for (const auto& c : s["checks"])
    if (c["name"] == "relative H1 drift") {
      found = true;
      EXPECT_LT(c["measured"].get<double>(), 1e-8);
    }
  EXPECT_TRUE(found);
  EXPECT_FALSE(s["breaking"].get<bool>());
}

TEST_F(Cli, SimulatePeakonTracksOrbit) {
  const Result r = run("simulate --init peakon --c 1 --t-end 0.25 --n 256 --record-every 32 " + out());
  EXPECT_EQ(r.code, 0) << r.out;
  const json s = summary();
  EXPECT_LT(s["sup_orbital_distance"].get<double>(), 5e-2);
  std::ifstream is(dir_ / "trajectory.csv");
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  EXPECT_NE(row.back(), ',');
}

TEST_F(Cli, ConfigFileAndOverride) {
  {
    std::ofstream cfg(dir_ / "run.ini");
    cfg << "n = 32\nt-end = 0.05\ndt = 1e-3\n";
  }
  ASSERT_EQ(run("--config " + (dir_ / "run.ini").string() + " simulate --init constant " + out()).code, 0);
  EXPECT_EQ(summary()["config"]["n"], 32);
  EXPECT_DOUBLE_EQ(summary()["config"]["t_end"].get<double>(), 0.05);
  ASSERT_EQ(run("--config " + (dir_ / "run.ini").string() + " simulate --init constant --n 64 " + out()).code, 0);
  EXPECT_EQ(summary()["config"]["n"], 64);
}

TEST_F(Cli, FsurfacePeakon) {
  const Result r = run("fsurface --source peakon --points 21 " + out());
  EXPECT_EQ(r.code, 0);
  const json s = summary();
  EXPECT_NEAR(s["max"]["M"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(s["max"]["F"].get<double>(), 0.0, 1e-12);
  std::ifstream is(dir_ / "fsurface.csv");
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "M,m,F,gradnorm");
}

TEST_F(Cli, FsurfaceConstantAndFieldFile) {
  EXPECT_EQ(run("fsurface --source constant --value 2 --points 5").code, 0);
  {
    std::ofstream f(dir_ / "u.txt");
    for (int j = 0; j < 32; ++j) f << 2.0 + 0.3 * std::cos(6.283185307179586 * j / 32.0) << "\n";
  }
  EXPECT_EQ(run("fsurface --source field --field " + (dir_ / "u.txt").string() + " --points 5").code, 0);
}

TEST_F(Cli, StabilitySweepSmall) {
  const Result r = run("stability-sweep --n 128 --dt 1e-3 --t-end 0.2 --deltas 0.001,0.01 " + out());
  EXPECT_EQ(r.code, 0) << r.out;
  const json s = summary();
  EXPECT_EQ(s["command"], "stability-sweep");
  EXPECT_EQ(s["rows"].size(), 2u);
  EXPECT_FALSE(s["breaking"].get<bool>());
}
