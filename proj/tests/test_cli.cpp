#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "bfsi/cli.hpp"
#include "bfsi/snapshot.hpp"
#include "support.hpp"

using namespace bfsi;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out, err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli_main(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bfsi_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("BFSI_WORKERS");
  }
  std::string write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string out_dir(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

// Smooth, compatible, time-dependent data on a small grid.
std::string smooth_config_text() {
  std::string t = zero_config_text(8, 8, 4, 0.1);
  t = with_value(t, "rho0", "cos(x)");
  t = with_value(t, "theta0", "cos(x)");
  t = with_value(t, "f2", "sin(x)*y");
  t = with_value(t, "f1_x", "cos(y)*sin(x+t)");
  return t;
}

}  // namespace

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate", "x.ini"}).code, 2);
  EXPECT_EQ(run_cli({"run"}).code, 2);
  EXPECT_EQ(run_cli({"mms", "x.ini", "--levels", "1"}).code, 2);
  EXPECT_EQ(run_cli({"stability", "x.ini", "--delta", "-1"}).code, 2);
  const Outcome help = run_cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("check-compat"), std::string::npos);
}

TEST_F(CliTest, ConfigErrors) {
  const Outcome missing = run_cli({"run", out_dir("absent.ini")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("absent.ini"), std::string::npos) << missing.err;

  const std::string bad = write_config("bad.ini", with_value(zero_config_text(), "mu", "-1"));
  const Outcome o = run_cli({"run", bad});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("config error"), std::string::npos) << o.err;
}

TEST_F(CliTest, CheckCompat) {
  const Outcome ok = run_cli({"check-compat", write_config("z.ini", zero_config_text())});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("passed true"), std::string::npos);

  // Shear in the fluid at the interface without a matching solid traction.
  std::string t = with_value(zero_config_text(8, 16, 8), "u0_x", "y^2-1/4");
  const Outcome bad = run_cli({"check-compat", write_config("s.ini", t)});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("passed false"), std::string::npos);
}

TEST_F(CliTest, RunWithZeroEndTimeWritesOnlySnapshot) {
  const std::string cfg = write_config("z.ini", zero_config_text(8, 8, 4, 0.0));
  const Outcome o = run_cli({"run", cfg, "--output", out_dir("o")});
  EXPECT_EQ(o.code, 0) << o.err;
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(out_dir("o"))) names.push_back(e.path().filename().string());
  ASSERT_EQ(names.size(), 1u);
  EXPECT_EQ(names[0], "snap_000000.bfsi");
  const Snapshot s = read_snapshot(out_dir("o") + "/snap_000000.bfsi");
  EXPECT_EQ(s.t, 0.0);
}

TEST_F(CliTest, RunWritesSeriesAndSnapshots) {
  std::string t = with_value(smooth_config_text(), "snapshot_every", "5");
  t = with_value(t, "series_every", "2");
  const Outcome o = run_cli({"run", write_config("s.ini", t), "--output", out_dir("o")});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* f : {"snap_000000.bfsi", "snap_000005.bfsi", "snap_000010.bfsi", "energy.csv", "regularity.csv"})
    EXPECT_TRUE(fs::exists(fs::path(out_dir("o")) / f)) << f;
  // Initial row plus steps 2, 4, ..., 10.
  const std::string energy = slurp(fs::path(out_dir("o")) / "energy.csv");
  EXPECT_EQ(std::count(energy.begin(), energy.end(), '\n'), 1 + 6);
  const std::string reg = slurp(fs::path(out_dir("o")) / "regularity.csv");
  EXPECT_EQ(std::count(reg.begin(), reg.end(), '\n'), 1 + 5);
  EXPECT_NEAR(read_snapshot(out_dir("o") + "/snap_000010.bfsi").t, 0.1, 1e-14);
}

TEST_F(CliTest, OutputsAreDeterministicAcrossRunsAndWorkers) {
  const std::string cfg = write_config("s.ini", smooth_config_text());
  setenv("BFSI_WORKERS", "1", 1);
  ASSERT_EQ(run_cli({"run", cfg, "--output", out_dir("a")}).code, 0);
  ASSERT_EQ(run_cli({"run", cfg, "--output", out_dir("b")}).code, 0);
  setenv("BFSI_WORKERS", "3", 1);
  ASSERT_EQ(run_cli({"run", cfg, "--output", out_dir("c")}).code, 0);
  // Rerunning into an existing directory starts the series afresh.
  ASSERT_EQ(run_cli({"run", cfg, "--output", out_dir("c")}).code, 0);
  for (const char* f : {"energy.csv", "regularity.csv", "snap_000000.bfsi"}) {
    const std::string a = slurp(fs::path(out_dir("a")) / f);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(fs::path(out_dir("b")) / f)) << f;
    EXPECT_EQ(a, slurp(fs::path(out_dir("c")) / f)) << f;
  }
}

TEST_F(CliTest, StabilityStaysInEnvelope) {
  std::string t = with_value(smooth_config_text(), "T_end", "0.05");
  const Outcome o = run_cli({"stability", write_config("s.ini", t), "--output", out_dir("o"), "--delta", "1e-6"});
  EXPECT_EQ(o.code, 0) << o.out << o.err;
  const std::string csv = slurp(fs::path(out_dir("o")) / "stability.csv");
  EXPECT_EQ(csv.rfind("t,chi_norm,psi_norm,F_seminorm,M_t,gronwall_envelope\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 6);
}

TEST_F(CliTest, CheckIdentitiesReportsEveryIdentity) {
  const Outcome o = run_cli({"check-identities", write_config("z.ini", zero_config_text(16, 16, 8))});
  EXPECT_NE(o.out.find("product rule"), std::string::npos);
  EXPECT_NE(o.out.find("x summation by parts"), std::string::npos);
  EXPECT_NE(o.out.find("advection-boundary identity"), std::string::npos);
  // The exit status reflects the whole suite.
  EXPECT_EQ(o.code, o.out.find("FAIL ") == std::string::npos ? 0 : 1);
}

TEST_F(CliTest, MmsStudyMeetsThresholds) {
  const Outcome o = run_cli({"mms", source_path("configs/mms.ini"), "--levels", "2"});
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("order u:"), std::string::npos);
}
