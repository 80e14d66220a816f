#pragma once

// N-agent Monte Carlo simulation of the charging game under a linear feedback
// law with the endogenous sticky price, plus deviation experiments and the
// population-size convergence study.

#include "mfgrid/meanfield.hpp"
#include "mfgrid/model.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mfgrid {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GameMode { nash, social };
std::string_view to_string(GameMode m);
GameMode parse_game_mode(std::string_view s);  // throws ModelError

enum class DeviationFamily { constant, half_indicator, sine };
std::string_view to_string(DeviationFamily f);
DeviationFamily parse_deviation_family(std::string_view s);  // throws ModelError

// phi(t): 1, 1[t < T/2], sin(pi t / T).
double deviation_shape(DeviationFamily f, double t, double horizon);

struct DeviationSpec {
  std::size_t agent = 0;
  DeviationFamily family = DeviationFamily::constant;
  double delta = 0.0;
};

struct SimConfig {
  std::size_t replications = 64;
  std::uint64_t seed = 0;
  GameMode mode = GameMode::nash;
  std::optional<DeviationSpec> deviation;
  unsigned threads = 0;        // 0: hardware concurrency
  std::uint32_t stream = 0;    // separates independent experiments on one seed
  std::size_t record_agents = 0;  // control paths kept from replication 0

  void validate() const;
};

// Standard normal increments z(rep, step, agent), one call per time step.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual void fill(std::size_t rep, std::size_t step,
                    std::span<double> z) const = 0;
};

// Philox keyed on the seed; agents 2j and 2j+1 share one Box-Muller block.
class CounterNoise final : public NoiseSource {
 public:
  CounterNoise(std::uint64_t seed, std::uint32_t stream);
  void fill(std::size_t rep, std::size_t step, std::span<double> z) const override;

 private:
  std::uint64_t seed_;
  std::uint32_t stream_;
};

// Sums `factor` consecutive fine increments and rescales to unit variance, so a
// coarse grid sees the same Brownian path as the fine one.
class CoarsenedNoise final : public NoiseSource {
 public:
  CoarsenedNoise(const NoiseSource& fine, std::size_t factor);
  void fill(std::size_t rep, std::size_t step, std::span<double> z) const override;

 private:
  const NoiseSource& fine_;
  std::size_t factor_;
};

// Feedback law together with the mean-field curves it was built from.
struct Equilibrium {
  GameMode mode;
  FeedbackLaw law;
  std::vector<double> price;  // Pbar or pbar
  std::vector<double> rate;   // Qbar or qbar
  std::vector<double> xbar;
};

Equilibrium make_equilibrium(const NashMeanField& mf, const ModelParams& params);
Equilibrium make_equilibrium(const SocialMeanField& mf, const ModelParams& params);
Equilibrium solve_equilibrium(GameMode mode, const ModelParams& params,
                              const Population& pop, const TimeGrid& grid);

struct SimulationResult {
  explicit SimulationResult(TimeGrid g) : grid(g) {}

  TimeGrid grid;
  std::size_t replications = 0;
  std::vector<double> P_mean, P_std;
  std::vector<double> Q_mean, Q_std;
  std::vector<double> Xbar_mean;
  std::vector<double> P_ref, Q_ref, Xbar_ref;
  std::vector<double> J_hat, J_se;  // per agent
  double J_soc_hat = 0.0;
  double J_soc_se = 0.0;
  std::vector<double> J_soc_samples;  // per replication
  double err_P = 0.0, err_P_se = 0.0;
  double err_Q = 0.0, err_Q_se = 0.0;
  // max over agents of the replication mean of sup_t X_t^2
  double moment_bound = 0.0;
  // sup_t |Xbar_mean - xbar|
  double xbar_gap = 0.0;
  // controls[j][k] of agent j in replication 0
  std::vector<std::vector<double>> controls;
};

SimulationResult simulate(const ModelParams& params, const Population& pop,
                          const Equilibrium& eq, const SimConfig& cfg);
SimulationResult simulate(const ModelParams& params, const Population& pop,
                          const Equilibrium& eq, const SimConfig& cfg,
                          const NoiseSource& noise);

struct DeviationOutcome {
  DeviationSpec spec;
  double J_dev = 0.0;
  double J_eq = 0.0;
  double diff = 0.0;
  double std_error = 0.0;
};

// Paired unilateral deviation with common random numbers. All specs run in one
// pass: the other agents' controls do not depend on the price, so each
// deviator changes Q by exactly (v_dev - v_eq) / N and is tracked alongside
// the equilibrium run with its own price path.
std::vector<DeviationOutcome> deviate(const ModelParams& params,
                                      const Population& pop,
                                      const Equilibrium& eq, const SimConfig& cfg,
                                      std::span<const DeviationSpec> specs);
// Uses cfg.deviation, which must be set.
DeviationOutcome deviate(const ModelParams& params, const Population& pop,
                         const Equilibrium& eq, const SimConfig& cfg);

// Largest cost reduction over the specs: max(-diff).
double worst_deviation_gain(std::span<const DeviationOutcome> outcomes);

struct SocialCost {
  double J_soc_hat = 0.0;
  double std_error = 0.0;
};

SocialCost social_cost(const ModelParams& params, const Population& pop,
                       const Equilibrium& eq, const SimConfig& cfg);

// J_soc(first) - J_soc(second) under common random numbers.
struct SocialComparison {
  SocialCost first;
  SocialCost second;
  double diff = 0.0;
  double diff_stderr = 0.0;
};

SocialComparison compare_social_cost(const ModelParams& params,
                                     const Population& pop,
                                     const Equilibrium& first,
                                     const Equilibrium& second,
                                     const SimConfig& cfg);

// Uniform sampling intervals for initial storage and volatility.
struct PopulationTemplate {
  Interval x0_range{2.0, 2.5};
  Interval sigma_range{1.0, 1.5};

  friend bool operator==(const PopulationTemplate&, const PopulationTemplate&) = default;
};

// Depends only on (seed, n): the same seed gives the same population to every
// command, and different n give independent draws.
Population draw_population(const PopulationTemplate& tpl, std::size_t n,
                           std::uint64_t seed);

struct ConvergenceOptions {
  std::vector<std::size_t> n_list{8, 32, 128, 512, 2048};
  std::size_t replications = 64;
  std::uint64_t seed = 0;
  GameMode mode = GameMode::nash;
  std::vector<DeviationSpec> deviations;
  unsigned threads = 0;
};

struct ConvergenceRow {
  std::size_t n = 0;
  double err_P = 0.0, err_P_se = 0.0;
  double err_Q = 0.0, err_Q_se = 0.0;
  double worst_deviation_gain = 0.0;  // NaN without deviation specs
  double slope_so_far = 0.0;          // NaN on the first row
  double moment_bound = 0.0;
  double xbar_gap = 0.0;
};

std::vector<ConvergenceRow> converge(const ModelParams& params,
                                     const PopulationTemplate& tpl,
                                     std::size_t n_steps,
                                     const ConvergenceOptions& opts);

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

// Columns t, P_mean, P_std, Q_mean, Q_std, Xbar_mean, Pbar_ref, Qbar_ref.
void write_sim_csv(std::ostream& os, const SimulationResult& r);
// Columns t, v_1, ..., v_k.
void write_agents_csv(std::ostream& os, const SimulationResult& r);
// Columns N, err_P, err_Q, worst_deviation_gain, slope_so_far.
void write_converge_csv(std::ostream& os, std::span<const ConvergenceRow> rows);
// Columns family, delta, J_dev, J_eq, diff, stderr.
void write_deviate_csv(std::ostream& os, std::span<const DeviationOutcome> rows);

}  // namespace mfgrid
