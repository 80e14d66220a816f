#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mfgrid/config.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "mfgrid");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = mfgrid::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mfgrid_cli_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  std::string small_config(const std::string& extra_sim = "") {
    return write("small.yaml",
                 "population:\n  n: 40\ngrid:\n  n_steps: 200\n"
                 "sim:\n  replications: 4\n  converge_n: [8, 16, 32]\n  threads: 2\n" +
                     extra_sim);
  }

  fs::path dir_;
};

const std::string kDefault = MFGRID_SOURCE_DIR "/configs/default.yaml";

}  // namespace

TEST_F(CliTest, CheckDefaultPasses) {
  const Outcome o = run({"--config", kDefault, "check"});
  EXPECT_EQ(o.code, mfgrid::cli::kExitOk) << o.err;
  EXPECT_NE(o.out.find("A1 pass  B1(T) = 2.98"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("A2 pass"), std::string::npos);
  EXPECT_NE(o.out.find("A3 pass"), std::string::npos);
  EXPECT_NE(o.out.find("A4 pass"), std::string::npos);
  EXPECT_NE(o.out.find("det = 14.2"), std::string::npos);
}

TEST_F(CliTest, CheckReportsCoercivityFailure) {
  const Outcome o = run({"--config", write("c2.yaml", "params:\n  c: 2\n"), "check"});
  EXPECT_EQ(o.code, mfgrid::cli::kExitAssumption);
  EXPECT_NE(o.out.find("A4 FAIL"), std::string::npos) << o.out;
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  Outcome o = run({"--config", write("bad.yaml", "params:\n  c: x\n"), "check"});
  EXPECT_EQ(o.code, mfgrid::cli::kExitConfig);
  EXPECT_NE(o.err.find("params.c"), std::string::npos) << o.err;
  o = run({"--config", write("unk.yaml", "grid:\n  steps: 3\n"), "check"});
  EXPECT_EQ(o.code, mfgrid::cli::kExitConfig);
  EXPECT_NE(o.err.find("grid.steps"), std::string::npos) << o.err;
  EXPECT_EQ(run({"check"}).code, mfgrid::cli::kExitConfig);
  EXPECT_EQ(run({"--config", (dir_ / "missing.yaml").string(), "check"}).code,
            mfgrid::cli::kExitConfig);
  EXPECT_EQ(run({"--config", kDefault}).code, mfgrid::cli::kExitConfig);
  EXPECT_EQ(run({"--config", kDefault, "--mode", "coop", "check"}).code,
            mfgrid::cli::kExitConfig);
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}).code, mfgrid::cli::kExitOk);
}

TEST_F(CliTest, DumpConfigRoundTripsWithOverrides) {
  const Outcome o = run({"--config", kDefault, "--seed", "77", "--steps", "500", "--mode",
                         "social", "--out", (dir_ / "x").string(), "--dump-config"});
  ASSERT_EQ(o.code, 0) << o.err;
  const mfgrid::RunConfig cfg = mfgrid::parse_config(o.out);
  EXPECT_EQ(cfg.sim.seed, 77u);
  EXPECT_EQ(cfg.n_steps, 500u);
  EXPECT_EQ(cfg.sim.mode, mfgrid::GameMode::social);
  EXPECT_EQ(cfg.output_dir, (dir_ / "x").string());
  const std::string again = write("dumped.yaml", o.out);
  EXPECT_EQ(run({"--config", again, "--dump-config"}).out, o.out);
}

TEST_F(CliTest, SolveWritesCurvesAndSummary) {
  const std::string out = (dir_ / "o").string();
  Outcome o = run({"--config", kDefault, "--out", out, "solve-nash"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(dir_ / "o" / "meanfield_nash.csv"));
  EXPECT_NE(o.out.find("b0 = -13.46"), std::string::npos) << o.out;
  o = run({"--config", kDefault, "--out", out, "solve-social"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("l0 = -1.27"), std::string::npos) << o.out;
  EXPECT_TRUE(fs::exists(dir_ / "o" / "meanfield_social.csv"));
}

TEST_F(CliTest, EveryCommandIsByteDeterministic) {
  const std::string cfg = small_config();
  const std::vector<std::string> cmds{"solve-nash", "solve-social", "simulate", "converge",
                                      "deviate"};
  for (const char* sub : {"a", "b"}) {
    for (const auto& c : cmds) {
      const Outcome o = run({"--config", cfg, "--out", (dir_ / sub).string(), c});
      ASSERT_EQ(o.code, 0) << c << ": " << o.err;
    }
  }
  const Outcome social = run({"--config", cfg, "--out", (dir_ / "s").string(), "--mode",
                              "social", "simulate"});
  ASSERT_EQ(social.code, 0);
  for (const char* f : {"meanfield_nash.csv", "meanfield_social.csv", "sim.csv", "agents.csv",
                        "converge.csv", "deviate.csv"}) {
    const std::string a = slurp(dir_ / "a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(dir_ / "b" / f)) << f;
  }
  EXPECT_NE(slurp(dir_ / "a" / "sim.csv"), slurp(dir_ / "s" / "sim.csv"));
}

TEST_F(CliTest, ZeroDeviationGivesZeroDiff) {
  const std::string cfg = small_config("  deviation_deltas: [0.0]\n");
  const Outcome o = run({"--config", cfg, "--out", (dir_ / "d").string(), "deviate"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream csv(slurp(dir_ / "d" / "deviate.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "family,delta,J_dev,J_eq,diff,stderr");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.size() - 4), ",0,0") << line;
  }
  EXPECT_EQ(rows, 3);
}
