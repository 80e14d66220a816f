#include "cli.hpp"

#include "mfgrid/config.hpp"
#include "mfgrid/csv.hpp"
#include "mfgrid/meanfield.hpp"
#include "mfgrid/model.hpp"
#include "mfgrid/simulate.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

namespace mfgrid::cli {

namespace {

namespace fs = std::filesystem;

std::string g(double x) { return format_double(x); }

const char* pass(bool ok) { return ok ? "pass" : "FAIL"; }

void write_file(const fs::path& dir, const std::string& name,
                const std::function<void(std::ostream&)>& body, std::ostream& out) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  body(os);
  os.flush();
  if (!os) throw std::runtime_error("failed writing " + path.string());
  out << "wrote " << path.string() << "\n";
}

void warn_population(const Population& pop, std::ostream& err) {
  if (!population_within_bounds(pop)) {
    err << "warning: population lies outside its A2 intervals\n";
  }
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const TimeGrid grid(cfg.params.T, cfg.n_steps);
  const Population pop = make_population(cfg);
  const NashDiagnostics nd = nash_diagnostics(cfg.params, grid);
  const SocialDiagnostics sd = social_diagnostics(cfg.params, grid);
  const bool a2 = population_within_bounds(pop);
  const bool a4 = social_coercivity_holds(cfg.params);
  const auto& m = sd.shoot_matrix;
  out << "A1 " << pass(nd.holds) << "  B1(T) = " << g(nd.b1_terminal) << "\n";
  out << "A2 " << pass(a2) << "  N = " << pop.size() << ", x0 in ["
      << g(pop.x0_bounds.lo) << ", " << g(pop.x0_bounds.hi) << "], sigma in ["
      << g(pop.sigma_bounds.lo) << ", " << g(pop.sigma_bounds.hi) << "]\n";
  out << "A3 " << pass(sd.holds) << "  (b1(T), l1(T)) = (" << g(m(0, 0)) << ", "
      << g(m(1, 0)) << ")  (b2(T), l2(T)) = (" << g(m(0, 1)) << ", " << g(m(1, 1))
      << ")  det = " << g(sd.det) << "\n";
  out << "A4 " << pass(a4) << "  (c - 2) eta = "
      << g((cfg.params.c - 2.0) * cfg.params.eta)
      << ", alpha^2 = " << g(cfg.params.alpha * cfg.params.alpha) << "\n";
  return nd.holds && a2 && sd.holds && a4 ? kExitOk : kExitAssumption;
}

void print_residuals(const MeanFieldResiduals& r, bool social, std::ostream& out) {
  out << (social ? "|b(T) + gamma zeta| = " : "|B(T) + gamma zeta| = ") << g(r.terminal)
      << "\n";
  if (social) out << "|l(T)| = " << g(r.terminal_l) << "\n";
  out << "ode residual = " << g(r.ode) << "\n";
  out << "consistency residual = " << g(r.consistency) << "\n";
  out << "superposition vs direct = " << g(r.direct) << "\n";
}

int cmd_solve_nash(const RunConfig& cfg, const fs::path& dir, std::ostream& out,
                   std::ostream& err) {
  const TimeGrid grid(cfg.params.T, cfg.n_steps);
  const Population pop = make_population(cfg);
  warn_population(pop, err);
  const NashMeanField mf = solve_nash(cfg.params, pop, grid);
  out << "xbar0 = " << g(mf.xbar0) << "\n";
  out << "B1(T) = " << g(mf.B1_terminal) << "\n";
  out << "b0 = " << g(mf.b0) << "\n";
  print_residuals(residuals(mf, cfg.params), false, out);
  write_file(dir, "meanfield_nash.csv", [&](std::ostream& os) { write_nash_csv(os, mf); },
             out);
  return kExitOk;
}

int cmd_solve_social(const RunConfig& cfg, const fs::path& dir, std::ostream& out,
                     std::ostream& err) {
  const TimeGrid grid(cfg.params.T, cfg.n_steps);
  const Population pop = make_population(cfg);
  warn_population(pop, err);
  const SocialMeanField mf = solve_social(cfg.params, pop, grid);
  if (!mf.coercive) err << "warning: (c - 2) eta > alpha^2 fails (A4)\n";
  out << "xbar0 = " << g(mf.xbar0) << "\n";
  out << "det = " << g(mf.shoot_det) << "\n";
  out << "b0 = " << g(mf.b0) << "\n";
  out << "l0 = " << g(mf.l0) << "\n";
  print_residuals(residuals(mf, cfg.params), true, out);
  write_file(dir, "meanfield_social.csv",
             [&](std::ostream& os) { write_social_csv(os, mf); }, out);
  return kExitOk;
}

SimConfig sim_config(const RunConfig& cfg) {
  SimConfig sc;
  sc.replications = cfg.sim.replications;
  sc.seed = cfg.sim.seed;
  sc.mode = cfg.sim.mode;
  sc.threads = cfg.sim.threads;
  sc.record_agents = cfg.sim.record_agents;
  return sc;
}

int cmd_simulate(const RunConfig& cfg, const fs::path& dir, std::ostream& out,
                 std::ostream& err) {
  const TimeGrid grid(cfg.params.T, cfg.n_steps);
  const Population pop = make_population(cfg);
  warn_population(pop, err);
  const Equilibrium eq = solve_equilibrium(cfg.sim.mode, cfg.params, pop, grid);
  const SimulationResult r = simulate(cfg.params, pop, eq, sim_config(cfg));
  out << "mode = " << to_string(cfg.sim.mode) << ", N = " << pop.size()
      << ", R = " << r.replications << "\n";
  out << "err_P = " << g(r.err_P) << " (se " << g(r.err_P_se) << ")\n";
  out << "err_Q = " << g(r.err_Q) << " (se " << g(r.err_Q_se) << ")\n";
  out << "J_soc = " << g(r.J_soc_hat) << " (se " << g(r.J_soc_se) << ")\n";
  write_file(dir, "sim.csv", [&](std::ostream& os) { write_sim_csv(os, r); }, out);
  write_file(dir, "agents.csv", [&](std::ostream& os) { write_agents_csv(os, r); }, out);
  return kExitOk;
}

int cmd_converge(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  ConvergenceOptions opts;
  opts.n_list = cfg.sim.converge_n;
  opts.replications = cfg.sim.replications;
  opts.seed = cfg.sim.seed;
  opts.mode = cfg.sim.mode;
  opts.deviations = deviation_specs(cfg);
  opts.threads = cfg.sim.threads;
  const auto rows = converge(cfg.params, cfg.population.ranges, cfg.n_steps, opts);
  for (const auto& row : rows) {
    out << "N = " << row.n << "  err_P = " << g(row.err_P) << "  err_Q = "
        << g(row.err_Q) << "  worst deviation gain = " << g(row.worst_deviation_gain)
        << "\n";
  }
  out << "slope of log err_P vs log N = " << g(rows.back().slope_so_far) << "\n";
  write_file(dir, "converge.csv", [&](std::ostream& os) { write_converge_csv(os, rows); },
             out);
  return kExitOk;
}

int cmd_deviate(const RunConfig& cfg, const fs::path& dir, std::ostream& out,
                std::ostream& err) {
  const TimeGrid grid(cfg.params.T, cfg.n_steps);
  const Population pop = make_population(cfg);
  warn_population(pop, err);
  const Equilibrium eq = solve_equilibrium(cfg.sim.mode, cfg.params, pop, grid);
  const auto specs = deviation_specs(cfg);
  SimConfig sc = sim_config(cfg);
  sc.record_agents = 0;
  const auto rows = deviate(cfg.params, pop, eq, sc, specs);
  for (const auto& d : rows) {
    out << to_string(d.spec.family) << " delta = " << g(d.spec.delta)
        << "  diff = " << g(d.diff) << " (se " << g(d.std_error) << ")\n";
  }
  out << "worst deviation gain = " << g(worst_deviation_gain(rows)) << "\n";
  write_file(dir, "deviate.csv", [&](std::ostream& os) { write_deviate_csv(os, rows); },
             out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean-field charging game with sticky prices"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir = "./out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> steps;
  std::optional<std::string> mode;
  bool dump = false;
  app.add_option("--config", config_path, "YAML run configuration")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory (default ./out)");
  app.add_option("--seed", seed, "master seed, overrides sim.seed");
  app.add_option("--steps", steps, "grid steps, overrides grid.n_steps");
  app.add_option("--mode", mode, "nash or social, overrides sim.mode")
      ->check(CLI::IsMember({"nash", "social"}));
  app.add_flag("--dump-config", dump, "print the effective configuration and exit");

  const char* names[] = {"check", "solve-nash", "solve-social",
                         "simulate", "converge", "deviate"};
  const char* help[] = {"report assumptions A1-A4",
                        "solve the Nash mean field",
                        "solve the social mean field",
                        "simulate the N-agent game",
                        "population-size convergence study",
                        "unilateral deviation experiment"};
  for (int i = 0; i < 6; ++i) app.add_subcommand(names[i], help[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (seed) cfg.sim.seed = *seed;
    if (steps) cfg.n_steps = *steps;
    if (mode) cfg.sim.mode = parse_game_mode(*mode);
    if (out_opt->count() > 0) cfg.output_dir = out_dir;
    validate_config(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ModelError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (dump) {
    out << dump_config(cfg);
    return kExitOk;
  }
  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    err << "a subcommand is required (or --dump-config)\n" << app.help();
    return kExitConfig;
  }
  const std::string cmd = subs.front()->get_name();
  const fs::path dir = cfg.output_dir;

  try {
    if (cmd == "check") return cmd_check(cfg, out);
    if (cmd == "solve-nash") return cmd_solve_nash(cfg, dir, out, err);
    if (cmd == "solve-social") return cmd_solve_social(cfg, dir, out, err);
    if (cmd == "simulate") return cmd_simulate(cfg, dir, out, err);
    if (cmd == "converge") return cmd_converge(cfg, dir, out);
    if (cmd == "deviate") return cmd_deviate(cfg, dir, out, err);
  } catch (const A1Violated& e) {
    err << "error: " << e.what() << "\n";
    return kExitAssumption;
  } catch (const A3Violated& e) {
    err << "error: " << e.what() << "\n";
    return kExitAssumption;
  } catch (const ModelError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace mfgrid::cli
