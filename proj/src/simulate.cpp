#include "mfgrid/simulate.hpp"

#include "mfgrid/csv.hpp"
#include "mfgrid/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>

namespace mfgrid {

std::string_view to_string(GameMode m) {
  return m == GameMode::nash ? "nash" : "social";
}

GameMode parse_game_mode(std::string_view s) {
  if (s == "nash") return GameMode::nash;
  if (s == "social") return GameMode::social;
  throw ModelError("mode must be nash or social, got '" + std::string(s) + "'");
}

std::string_view to_string(DeviationFamily f) {
  switch (f) {
    case DeviationFamily::constant: return "constant";
    case DeviationFamily::half_indicator: return "half_indicator";
    case DeviationFamily::sine: return "sine";
  }
  return "?";
}

DeviationFamily parse_deviation_family(std::string_view s) {
  if (s == "constant") return DeviationFamily::constant;
  if (s == "half_indicator") return DeviationFamily::half_indicator;
  if (s == "sine") return DeviationFamily::sine;
  throw ModelError("deviation family must be constant, half_indicator or sine, got '" +
                   std::string(s) + "'");
}

double deviation_shape(DeviationFamily f, double t, double horizon) {
  switch (f) {
    case DeviationFamily::constant: return 1.0;
    case DeviationFamily::half_indicator: return t < 0.5 * horizon ? 1.0 : 0.0;
    case DeviationFamily::sine: return std::sin(std::numbers::pi * t / horizon);
  }
  return 0.0;
}

void SimConfig::validate() const {
  if (replications < 1) throw ModelError("sim.replications must be >= 1");
  if (replications > std::numeric_limits<std::uint32_t>::max()) {
    throw ModelError("sim.replications is too large");
  }
  if (deviation && !std::isfinite(deviation->delta)) {
    throw ModelError("deviation delta must be finite");
  }
}

// ---------------------------------------------------------------------------
// Noise

CounterNoise::CounterNoise(std::uint64_t seed, std::uint32_t stream)
    : seed_(seed), stream_(stream) {}

void CounterNoise::fill(std::size_t rep, std::size_t step, std::span<double> z) const {
  const auto key = Philox4x32::key_from_seed(seed_);
  const std::size_t n = z.size();
  for (std::size_t j = 0; 2 * j < n; ++j) {
    const auto out = Philox4x32::generate(
        make_counter(static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(step),
                     static_cast<std::uint32_t>(rep), RngDomain::brownian, stream_),
        key);
    const auto [z0, z1] = normal_pair(out);
    z[2 * j] = z0;
    if (2 * j + 1 < n) z[2 * j + 1] = z1;
  }
}

CoarsenedNoise::CoarsenedNoise(const NoiseSource& fine, std::size_t factor)
    : fine_(fine), factor_(factor) {
  if (factor_ < 1) throw ModelError("coarsening factor must be >= 1");
}

void CoarsenedNoise::fill(std::size_t rep, std::size_t step, std::span<double> z) const {
  std::vector<double> buf(z.size());
  std::fill(z.begin(), z.end(), 0.0);
  for (std::size_t j = 0; j < factor_; ++j) {
    fine_.fill(rep, step * factor_ + j, buf);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += buf[i];
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(factor_));
  for (double& v : z) v *= scale;
}

// ---------------------------------------------------------------------------
// Equilibria

Equilibrium make_equilibrium(const NashMeanField& mf, const ModelParams& params) {
  return Equilibrium{GameMode::nash, nash_feedback(mf, params), mf.Pbar, mf.Qbar,
                     mf.xbar};
}

Equilibrium make_equilibrium(const SocialMeanField& mf, const ModelParams& params) {
  return Equilibrium{GameMode::social, social_feedback(mf, params), mf.pbar, mf.qbar,
                     mf.xbar};
}

Equilibrium solve_equilibrium(GameMode mode, const ModelParams& params,
                              const Population& pop, const TimeGrid& grid) {
  if (mode == GameMode::nash) {
    return make_equilibrium(solve_nash(params, pop, grid), params);
  }
  return make_equilibrium(solve_social(params, pop, grid), params);
}

// ---------------------------------------------------------------------------
// Kernel

namespace {

struct Shadow {
  DeviationSpec spec;
  std::vector<double> phi;  // shape on the grid
};

struct Replication {
  std::vector<double> P, Q, Xbar;
  std::vector<double> cost;
  std::vector<double> sup_x2;
  double err_P2 = 0.0;
  double err_Q2 = 0.0;
  std::vector<double> shadow_cost;
  std::vector<double> shadow_eq_cost;
  std::vector<std::vector<double>> controls;
};

struct RunOutput {
  SimulationResult result;
  std::vector<DeviationOutcome> deviations;
};

std::vector<double> shape_on_grid(DeviationFamily f, const TimeGrid& grid) {
  std::vector<double> phi(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    phi[k] = deviation_shape(f, grid.t(k), grid.horizon());
  }
  return phi;
}

Replication run_replication(const ModelParams& prm, const Population& pop,
                            const Equilibrium& eq, const NoiseSource& noise,
                            std::size_t rep, const Shadow* main_dev,
                            std::span<const Shadow> shadows,
                            std::size_t record_agents) {
  const TimeGrid& grid = eq.law.grid();
  const std::size_t n_steps = grid.n_steps();
  const std::size_t n = pop.size();
  const double h = grid.step();
  const double sqrt_h = std::sqrt(h);
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto& slope = eq.law.slope();
  const auto& icpt = eq.law.intercept();

  Replication out;
  out.P.resize(grid.size());
  out.Q.resize(grid.size());
  out.Xbar.resize(grid.size());
  out.cost.assign(n, 0.0);
  out.sup_x2.assign(n, 0.0);
  out.controls.assign(record_agents, std::vector<double>(grid.size()));

  std::vector<double> x = pop.x0;
  std::vector<double> diffusion(n);
  for (std::size_t i = 0; i < n; ++i) diffusion[i] = pop.sigma[i] * sqrt_h;
  std::vector<double> v(n);
  std::vector<double> z(n);
  double price = prm.p0;

  const std::size_t n_sh = shadows.size();
  std::vector<double> xs(n_sh), ps(n_sh, prm.p0);
  out.shadow_cost.assign(n_sh, 0.0);
  out.shadow_eq_cost.assign(n_sh, 0.0);
  for (std::size_t s = 0; s < n_sh; ++s) xs[s] = pop.x0[shadows[s].spec.agent];

  const double half_eta = 0.5 * prm.eta;
  const double half_c = 0.5 * prm.c;

  for (std::size_t k = 0; k <= n_steps; ++k) {
    const bool last = k == n_steps;
    const double wh = (k == 0 || last) ? 0.5 * h : h;
    if (!last) noise.fill(rep, k, z);

    double sum_v = 0.0;
    double sum_x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = x[i];
      double vi = slope[k] * xi + icpt[k];
      if (main_dev != nullptr && i == main_dev->spec.agent) {
        vi += main_dev->spec.delta * main_dev->phi[k];
      }
      v[i] = vi;
      sum_v += vi;
      sum_x += xi;
      const double dx = xi - prm.kappa;
      out.cost[i] += wh * (half_eta * dx * dx + half_c * vi * vi + price * vi);
      out.sup_x2[i] = std::max(out.sup_x2[i], xi * xi);
      if (!last) x[i] = xi + vi * h + diffusion[i] * z[i];
    }
    const double q = sum_v * inv_n;
    out.P[k] = price;
    out.Q[k] = q;
    out.Xbar[k] = sum_x * inv_n;
    for (std::size_t j = 0; j < record_agents; ++j) out.controls[j][k] = v[j];

    const double dp = price - eq.price[k];
    const double dq = q - eq.rate[k];
    out.err_P2 += wh * dp * dp;
    out.err_Q2 += wh * dq * dq;

    for (std::size_t s = 0; s < n_sh; ++s) {
      const std::size_t d = shadows[s].spec.agent;
      const double xd = xs[s];
      const double vd = slope[k] * xd + icpt[k] + shadows[s].spec.delta * shadows[s].phi[k];
      const double qd = q + (vd - v[d]) * inv_n;
      const double dx = xd - prm.kappa;
      out.shadow_cost[s] += wh * (half_eta * dx * dx + half_c * vd * vd + ps[s] * vd);
      if (!last) {
        xs[s] = xd + vd * h + diffusion[d] * z[d];
        ps[s] = ps[s] + prm.alpha * (prm.beta - qd - ps[s]) * h;
      }
    }
    if (!last) price = price + prm.alpha * (prm.beta - q - price) * h;
    if (!std::isfinite(price) || !std::isfinite(q)) {
      throw SimulationError("non-finite state at step " + std::to_string(k) +
                            " of replication " + std::to_string(rep));
    }
  }

  const double half_gamma = 0.5 * prm.gamma;
  for (std::size_t i = 0; i < n; ++i) {
    const double dz = x[i] - prm.zeta;
    out.cost[i] += half_gamma * dz * dz;
    if (!std::isfinite(out.cost[i])) {
      throw SimulationError("non-finite cost for agent " + std::to_string(i) +
                            " in replication " + std::to_string(rep));
    }
  }
  for (std::size_t s = 0; s < n_sh; ++s) {
    const double dz = xs[s] - prm.zeta;
    out.shadow_cost[s] += half_gamma * dz * dz;
    out.shadow_eq_cost[s] = out.cost[shadows[s].spec.agent];
    if (!std::isfinite(out.shadow_cost[s])) {
      throw SimulationError("non-finite deviator cost in replication " +
                            std::to_string(rep));
    }
  }
  return out;
}

unsigned resolve_threads(unsigned requested, std::size_t work) {
  unsigned t = requested;
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, work));
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single sample
};

// Shifted by the first sample so that constant samples give exactly zero spread.
template <class Get>
Moments moments(std::size_t r, Get get) {
  const double x0 = get(0);
  double sum = 0.0;
  for (std::size_t i = 0; i < r; ++i) sum += get(i) - x0;
  const double shift = sum / static_cast<double>(r);
  if (r < 2) return {x0, 0.0};
  double ss = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    const double d = get(i) - x0 - shift;
    ss += d * d;
  }
  return {x0 + shift, std::sqrt(ss / static_cast<double>(r - 1))};
}

void check_inputs(const ModelParams& prm, const Population& pop,
                  const Equilibrium& eq, const SimConfig& cfg) {
  prm.validate();
  pop.validate();
  cfg.validate();
  const TimeGrid& grid = eq.law.grid();
  if (eq.price.size() != grid.size() || eq.rate.size() != grid.size() ||
      eq.xbar.size() != grid.size()) {
    throw ModelError("equilibrium curves do not match the feedback grid");
  }
  if (std::abs(grid.horizon() - prm.T) > 1e-12 * std::max(1.0, prm.T)) {
    throw ModelError("feedback grid horizon differs from T");
  }
  if (grid.n_steps() > std::numeric_limits<std::uint32_t>::max() ||
      pop.size() > 2ull * std::numeric_limits<std::uint32_t>::max()) {
    throw ModelError("grid or population too large for the noise counter");
  }
}

RunOutput run(const ModelParams& prm, const Population& pop, const Equilibrium& eq,
              const SimConfig& cfg, std::span<const DeviationSpec> specs,
              const NoiseSource& noise) {
  check_inputs(prm, pop, eq, cfg);
  const TimeGrid& grid = eq.law.grid();
  const std::size_t n = pop.size();
  const std::size_t r = cfg.replications;
  const std::size_t g = grid.size();

  std::optional<Shadow> main_dev;
  if (cfg.deviation) {
    if (cfg.deviation->agent >= n) throw ModelError("deviation agent index >= N");
    main_dev = Shadow{*cfg.deviation, shape_on_grid(cfg.deviation->family, grid)};
  }
  std::vector<Shadow> shadows;
  shadows.reserve(specs.size());
  for (const DeviationSpec& s : specs) {
    if (s.agent >= n) throw ModelError("deviation agent index >= N");
    if (!std::isfinite(s.delta)) throw ModelError("deviation delta must be finite");
    shadows.push_back(Shadow{s, shape_on_grid(s.family, grid)});
  }
  const std::size_t record = std::min(cfg.record_agents, n);

  std::vector<Replication> reps(r);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= r) return;
      try {
        reps[i] = run_replication(prm, pop, eq, noise, i,
                                  main_dev ? &*main_dev : nullptr, shadows,
                                  i == 0 ? record : 0);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(r);
        return;
      }
    }
  };
  const unsigned n_threads = resolve_threads(cfg.threads, r);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Reduction in replication order.
  RunOutput out{SimulationResult(grid), {}};
  SimulationResult& res = out.result;
  res.replications = r;
  res.P_mean.resize(g);
  res.P_std.resize(g);
  res.Q_mean.resize(g);
  res.Q_std.resize(g);
  res.Xbar_mean.resize(g);
  res.P_ref = eq.price;
  res.Q_ref = eq.rate;
  res.Xbar_ref = eq.xbar;
  const double root_r = std::sqrt(static_cast<double>(r));
  for (std::size_t k = 0; k < g; ++k) {
    const Moments p = moments(r, [&](std::size_t i) { return reps[i].P[k]; });
    const Moments q = moments(r, [&](std::size_t i) { return reps[i].Q[k]; });
    const Moments xb = moments(r, [&](std::size_t i) { return reps[i].Xbar[k]; });
    res.P_mean[k] = p.mean;
    res.P_std[k] = p.sd;
    res.Q_mean[k] = q.mean;
    res.Q_std[k] = q.sd;
    res.Xbar_mean[k] = xb.mean;
    res.xbar_gap = std::max(res.xbar_gap, std::abs(xb.mean - eq.xbar[k]));
  }
  res.J_hat.resize(n);
  res.J_se.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const Moments j = moments(r, [&](std::size_t i) { return reps[i].cost[a]; });
    res.J_hat[a] = j.mean;
    res.J_se[a] = j.sd / root_r;
    const Moments s = moments(r, [&](std::size_t i) { return reps[i].sup_x2[a]; });
    res.moment_bound = std::max(res.moment_bound, s.mean);
  }
  res.J_soc_samples.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    double sum = 0.0;
    for (double c : reps[i].cost) sum += c;
    res.J_soc_samples[i] = sum / static_cast<double>(n);
  }
  const Moments js = moments(r, [&](std::size_t i) { return res.J_soc_samples[i]; });
  res.J_soc_hat = js.mean;
  res.J_soc_se = js.sd / root_r;

  // Delta-method standard error of sqrt(E[w]).
  const auto norm = [&](auto get, double& value, double& se) {
    const Moments m = moments(r, get);
    value = std::sqrt(m.mean);
    se = value > 0.0 ? m.sd / root_r / (2.0 * value) : 0.0;
  };
  norm([&](std::size_t i) { return reps[i].err_P2; }, res.err_P, res.err_P_se);
  norm([&](std::size_t i) { return reps[i].err_Q2; }, res.err_Q, res.err_Q_se);
  if (record > 0) res.controls = std::move(reps[0].controls);

  out.deviations.reserve(shadows.size());
  for (std::size_t s = 0; s < shadows.size(); ++s) {
    DeviationOutcome d;
    d.spec = shadows[s].spec;
    d.J_dev = moments(r, [&](std::size_t i) { return reps[i].shadow_cost[s]; }).mean;
    d.J_eq = moments(r, [&](std::size_t i) { return reps[i].shadow_eq_cost[s]; }).mean;
    const Moments dm = moments(r, [&](std::size_t i) {
      return reps[i].shadow_cost[s] - reps[i].shadow_eq_cost[s];
    });
    d.diff = dm.mean;
    d.std_error = dm.sd / root_r;
    out.deviations.push_back(d);
  }
  return out;
}

}  // namespace

SimulationResult simulate(const ModelParams& params, const Population& pop,
                          const Equilibrium& eq, const SimConfig& cfg) {
  const CounterNoise noise(cfg.seed, cfg.stream);
  return simulate(params, pop, eq, cfg, noise);
}

SimulationResult simulate(const ModelParams& params, const Population& pop,
                          const Equilibrium& eq, const SimConfig& cfg,
                          const NoiseSource& noise) {
  return run(params, pop, eq, cfg, {}, noise).result;
}

std::vector<DeviationOutcome> deviate(const ModelParams& params,
                                      const Population& pop,
                                      const Equilibrium& eq, const SimConfig& cfg,
                                      std::span<const DeviationSpec> specs) {
  SimConfig base = cfg;
  base.deviation.reset();
  const CounterNoise noise(cfg.seed, cfg.stream);
  return run(params, pop, eq, base, specs, noise).deviations;
}

DeviationOutcome deviate(const ModelParams& params, const Population& pop,
                         const Equilibrium& eq, const SimConfig& cfg) {
  if (!cfg.deviation) throw ModelError("deviate requires a deviation spec");
  const DeviationSpec spec = *cfg.deviation;
  return deviate(params, pop, eq, cfg, std::span<const DeviationSpec>(&spec, 1)).front();
}

double worst_deviation_gain(std::span<const DeviationOutcome> outcomes) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) worst = std::max(worst, -o.diff);
  return outcomes.empty() ? std::numeric_limits<double>::quiet_NaN() : worst;
}

SocialCost social_cost(const ModelParams& params, const Population& pop,
                       const Equilibrium& eq, const SimConfig& cfg) {
  const SimulationResult r = simulate(params, pop, eq, cfg);
  return {r.J_soc_hat, r.J_soc_se};
}

SocialComparison compare_social_cost(const ModelParams& params,
                                     const Population& pop,
                                     const Equilibrium& first,
                                     const Equilibrium& second,
                                     const SimConfig& cfg) {
  const SimulationResult a = simulate(params, pop, first, cfg);
  const SimulationResult b = simulate(params, pop, second, cfg);
  const std::size_t r = cfg.replications;
  const Moments d = moments(
      r, [&](std::size_t i) { return a.J_soc_samples[i] - b.J_soc_samples[i]; });
  SocialComparison out;
  out.first = {a.J_soc_hat, a.J_soc_se};
  out.second = {b.J_soc_hat, b.J_soc_se};
  out.diff = d.mean;
  out.diff_stderr = d.sd / std::sqrt(static_cast<double>(r));
  return out;
}

// ---------------------------------------------------------------------------
// Population sampling and the convergence study

Population draw_population(const PopulationTemplate& tpl, std::size_t n,
                           std::uint64_t seed) {
  if (n < 1) throw ModelError("population.n must be >= 1");
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw ModelError("population.n is too large");
  }
  const auto key = Philox4x32::key_from_seed(seed);
  Population pop;
  pop.x0.resize(n);
  pop.sigma.resize(n);
  pop.x0_bounds = tpl.x0_range;
  pop.sigma_bounds = tpl.sigma_range;
  const auto nn = static_cast<std::uint32_t>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto out = Philox4x32::generate(
        make_counter(static_cast<std::uint32_t>(i), nn, 0, RngDomain::population, 0), key);
    const double u = to_unit(out[0], out[1]);
    const double w = to_unit(out[2], out[3]);
    pop.x0[i] = tpl.x0_range.lo + (tpl.x0_range.hi - tpl.x0_range.lo) * u;
    pop.sigma[i] = tpl.sigma_range.lo + (tpl.sigma_range.hi - tpl.sigma_range.lo) * w;
  }
  pop.validate();
  return pop;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const std::size_t m = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

std::vector<ConvergenceRow> converge(const ModelParams& params,
                                     const PopulationTemplate& tpl,
                                     std::size_t n_steps,
                                     const ConvergenceOptions& opts) {
  if (opts.n_list.empty()) throw ModelError("converge needs at least one N");
  for (std::size_t i = 1; i < opts.n_list.size(); ++i) {
    if (opts.n_list[i] <= opts.n_list[i - 1]) {
      throw ModelError("converge N list must be strictly increasing");
    }
  }
  const TimeGrid grid(params.T, n_steps);
  std::vector<ConvergenceRow> rows;
  std::vector<double> ns, errs;
  for (std::size_t n : opts.n_list) {
    const Population pop = draw_population(tpl, n, opts.seed);
    const Equilibrium eq = solve_equilibrium(opts.mode, params, pop, grid);
    SimConfig cfg;
    cfg.replications = opts.replications;
    cfg.seed = opts.seed;
    cfg.mode = opts.mode;
    cfg.threads = opts.threads;
    cfg.stream = static_cast<std::uint32_t>(n);
    const CounterNoise noise(cfg.seed, cfg.stream);
    const RunOutput out = run(params, pop, eq, cfg, opts.deviations, noise);

    ConvergenceRow row;
    row.n = n;
    row.err_P = out.result.err_P;
    row.err_P_se = out.result.err_P_se;
    row.err_Q = out.result.err_Q;
    row.err_Q_se = out.result.err_Q_se;
    row.worst_deviation_gain = worst_deviation_gain(out.deviations);
    row.moment_bound = out.result.moment_bound;
    row.xbar_gap = out.result.xbar_gap;
    ns.push_back(static_cast<double>(n));
    errs.push_back(row.err_P);
    row.slope_so_far = fit_loglog_slope(ns, errs);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

void write_sim_csv(std::ostream& os, const SimulationResult& r) {
  CsvWriter w(os, {"t", "P_mean", "P_std", "Q_mean", "Q_std", "Xbar_mean",
                   "Pbar_ref", "Qbar_ref"});
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    w.cell(r.grid.t(k))
        .cell(r.P_mean[k])
        .cell(r.P_std[k])
        .cell(r.Q_mean[k])
        .cell(r.Q_std[k])
        .cell(r.Xbar_mean[k])
        .cell(r.P_ref[k])
        .cell(r.Q_ref[k]);
    w.end_row();
  }
}

void write_agents_csv(std::ostream& os, const SimulationResult& r) {
  os << 't';
  for (std::size_t j = 0; j < r.controls.size(); ++j) os << ",v_" << (j + 1);
  os << '\n';
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    os << format_double(r.grid.t(k));
    for (const auto& path : r.controls) os << ',' << format_double(path[k]);
    os << '\n';
  }
}

void write_converge_csv(std::ostream& os, std::span<const ConvergenceRow> rows) {
  CsvWriter w(os, {"N", "err_P", "err_Q", "worst_deviation_gain", "slope_so_far"});
  for (const auto& row : rows) {
    w.cell(static_cast<long long>(row.n))
        .cell(row.err_P)
        .cell(row.err_Q)
        .cell(row.worst_deviation_gain)
        .cell(row.slope_so_far);
    w.end_row();
  }
}

void write_deviate_csv(std::ostream& os, std::span<const DeviationOutcome> rows) {
  CsvWriter w(os, {"family", "delta", "J_dev", "J_eq", "diff", "stderr"});
  for (const auto& d : rows) {
    w.cell(to_string(d.spec.family))
        .cell(d.spec.delta)
        .cell(d.J_dev)
        .cell(d.J_eq)
        .cell(d.diff)
        .cell(d.std_error);
    w.end_row();
  }
}

}  // namespace mfgrid
