#include "mfgrid/config.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace mfgrid;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ShippedDefaultMatchesBuiltInDefaults) {
  const RunConfig cfg = load_config(MFGRID_SOURCE_DIR "/configs/default.yaml");
  EXPECT_EQ(cfg, RunConfig{});
  const ModelParams& p = cfg.params;
  EXPECT_EQ(p.alpha, 1);
  EXPECT_EQ(p.beta, 4);
  EXPECT_EQ(p.eta, 1);
  EXPECT_EQ(p.kappa, 4);
  EXPECT_EQ(p.gamma, 2);
  EXPECT_EQ(p.zeta, 9);
  EXPECT_EQ(p.c, 4);
  EXPECT_EQ(p.p0, 3);
  EXPECT_EQ(p.T, 2);
  EXPECT_EQ(cfg.population.n, 1000u);
  EXPECT_EQ(cfg.population.ranges.x0_range, (Interval{2.0, 2.5}));
  EXPECT_EQ(cfg.population.ranges.sigma_range, (Interval{1.0, 1.5}));
  EXPECT_EQ(cfg.n_steps, 2000u);
}

TEST(Config, EmptyDocumentGivesDefaults) {
  EXPECT_EQ(parse_config(""), RunConfig{});
}

TEST(Config, DumpRoundTrips) {
  RunConfig cfg;
  cfg.params.alpha = 0.1;
  cfg.params.zeta = 1.0 / 3.0;
  cfg.sim.seed = 18446744073709551615ull;
  cfg.sim.mode = GameMode::social;
  cfg.sim.deviation_families = {DeviationFamily::sine};
  cfg.sim.deviation_deltas = {-0.25, 1e-17};
  cfg.output_dir = "some dir/with: colon";
  EXPECT_EQ(parse_config(dump_config(cfg)), cfg);

  cfg.population.kind = PopulationKind::explicit_arrays;
  cfg.population.n = 3;
  cfg.population.x0 = {2.1, 2.2000000000000002, 2.4};
  cfg.population.sigma = {1.0, 0.0, 1.4};
  EXPECT_EQ(parse_config(dump_config(cfg)), cfg);
  EXPECT_EQ(parse_config(dump_config(RunConfig{})), RunConfig{});
}

TEST(Config, UnknownKeysNameFieldAndLine) {
  const std::string e = error_of("params:\n  alpha: 1\n  betta: 2\n");
  EXPECT_NE(e.find("params.betta"), std::string::npos) << e;
  EXPECT_NE(e.find("cfg.yaml:3"), std::string::npos) << e;
  EXPECT_NE(error_of("extra: 1\n").find("extra"), std::string::npos);
}

TEST(Config, BadValuesNameField) {
  EXPECT_NE(error_of("params:\n  c: abc\n").find("params.c"), std::string::npos);
  EXPECT_NE(error_of("sim:\n  replications: -3\n").find("sim.replications"),
            std::string::npos);
  EXPECT_NE(error_of("sim:\n  mode: coop\n").find("sim.mode"), std::string::npos);
  EXPECT_NE(error_of("sim:\n  deviation_families: [constant, ramp]\n")
                .find("sim.deviation_families[1]"),
            std::string::npos);
  EXPECT_NE(error_of("population:\n  x0_range: [3, 2]\n").find("population.x0_range"),
            std::string::npos);
  EXPECT_NE(error_of("params:\n  c: 0\n").find("c"), std::string::npos);
  EXPECT_NE(error_of("grid:\n  n_steps: 1\n").find("n_steps"), std::string::npos);
  EXPECT_NE(error_of("sim:\n  converge_n: [8, 4]\n").find("converge_n"), std::string::npos);
}

TEST(Config, MalformedYamlReportsLine) {
  const std::string e = error_of("params:\n  alpha: [1, 2\n");
  EXPECT_NE(e.find("cfg.yaml:"), std::string::npos) << e;
}

TEST(Config, ExplicitPopulation) {
  const RunConfig cfg = parse_config(
      "population:\n  distribution: explicit\n  x0: [2.1, 2.3]\n  sigma: [1.1, 1.2]\n");
  EXPECT_EQ(cfg.population.n, 2u);
  const Population pop = make_population(cfg);
  EXPECT_EQ(pop.x0, (std::vector<double>{2.1, 2.3}));
  EXPECT_EQ(pop.sigma_bounds, (Interval{1.0, 1.5}));
  EXPECT_FALSE(error_of("population:\n  distribution: explicit\n  x0: [2.1]\n  sigma: [1, 2]\n")
                   .empty());
  EXPECT_FALSE(error_of("population:\n  x0: [2.1]\n").empty());
  EXPECT_FALSE(error_of("population:\n  distribution: explicit\n  n: 3\n  x0: [2.1]\n"
                        "  sigma: [1]\n").empty());
}

TEST(Config, UniformPopulationFollowsSeed) {
  RunConfig cfg;
  cfg.population.n = 20;
  const Population a = make_population(cfg);
  EXPECT_EQ(a.x0, make_population(cfg).x0);
  cfg.sim.seed += 1;
  EXPECT_NE(a.x0, make_population(cfg).x0);
}

TEST(Config, DeviationSpecs) {
  RunConfig cfg;
  cfg.sim.deviation_agent = 3;
  const auto specs = deviation_specs(cfg);
  ASSERT_EQ(specs.size(), 9u);
  EXPECT_EQ(specs[0].family, DeviationFamily::constant);
  EXPECT_EQ(specs[2].delta, 2.0);
  EXPECT_EQ(specs[8].family, DeviationFamily::sine);
  for (const auto& s : specs) EXPECT_EQ(s.agent, 3u);
  EXPECT_FALSE(error_of("population:\n  n: 4\nsim:\n  deviation_agent: 4\n").empty());
}
