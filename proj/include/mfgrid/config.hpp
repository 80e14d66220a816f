#pragma once

// Run configuration for the command line tool: a YAML document with the
// sections params, population, grid, sim and output. Unknown keys are errors.

#include "mfgrid/model.hpp"
#include "mfgrid/simulate.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mfgrid {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PopulationKind { uniform, explicit_arrays };

struct PopulationConfig {
  PopulationKind kind = PopulationKind::uniform;
  std::size_t n = 1000;
  PopulationTemplate ranges;
  std::vector<double> x0;     // explicit only
  std::vector<double> sigma;  // explicit only

  friend bool operator==(const PopulationConfig&, const PopulationConfig&) = default;
};

struct SimSection {
  GameMode mode = GameMode::nash;
  std::size_t replications = 64;
  std::uint64_t seed = 20240601;
  unsigned threads = 0;
  std::vector<std::size_t> converge_n{8, 32, 128, 512, 2048};
  std::size_t deviation_agent = 0;
  std::vector<DeviationFamily> deviation_families{
      DeviationFamily::constant, DeviationFamily::half_indicator,
      DeviationFamily::sine};
  std::vector<double> deviation_deltas{0.5, 1.0, 2.0};
  std::size_t record_agents = 10;

  friend bool operator==(const SimSection&, const SimSection&) = default;
};

struct RunConfig {
  ModelParams params;
  PopulationConfig population;
  std::size_t n_steps = 2000;
  SimSection sim;
  std::string output_dir = "out";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// `source` names the document in diagnostics ("<source>:<line>: ...").
RunConfig parse_config(std::string_view text, std::string_view source = "config");
RunConfig load_config(const std::string& path);

// Re-parses to an equal RunConfig.
std::string dump_config(const RunConfig& cfg);

// Checks model invariants and cross-field constraints; throws ConfigError.
void validate_config(const RunConfig& cfg);

// Sampled from the seed for the uniform kind, taken as given otherwise.
Population make_population(const RunConfig& cfg);

// One spec per (family, delta) pair, families outermost.
std::vector<DeviationSpec> deviation_specs(const RunConfig& cfg);

}  // namespace mfgrid
