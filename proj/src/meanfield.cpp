#include "mfgrid/meanfield.hpp"

#include "mfgrid/csv.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <ostream>
#include <sstream>

namespace mfgrid {

namespace {

std::string describe(const char* what, double value, double scale) {
  std::ostringstream os;
  os << what << " (value " << format_double(value) << ", tolerance "
     << format_double(kShootingTolerance * scale) << ")";
  return os.str();
}

double sup_norm(const Trajectory& tr) {
  double worst = 0.0;
  for (const State& s : tr.values) worst = std::max(worst, s.cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

A1Violated::A1Violated(double b1, double s)
    : std::runtime_error(describe("assumption A1 violated: B1(T) vanishes", b1, s)),
      b1_terminal(b1), scale(s) {}

A3Violated::A3Violated(double d, double s)
    : std::runtime_error(
          describe("assumption A3 violated: shooting matrix is singular", d, s)),
      det(d), scale(s) {}

LinearSystem nash_system(const RiccatiSolution& a, const ModelParams& p,
                         const TimeGrid& grid) {
  const double c = p.c;
  const double alpha = p.alpha;
  LinearSystem sys{3, {}, State(3), grid};
  sys.matrix = [a, c, alpha](double t) {
    const double at = a(t);
    Eigen::MatrixXd m(3, 3);
    m << 2.0 * at / c, 0.0, 2.0 * at / c,
         -1.0 / c, -2.0 * at / c, -1.0 / c,
         alpha / c, 2.0 * alpha * at / c, -alpha + alpha / c;
    return m;
  };
  sys.forcing << p.eta * p.kappa, 0.0, p.alpha * p.beta;
  return sys;
}

LinearSystem social_system(const RiccatiSolution& a, const ModelParams& p,
                           const TimeGrid& grid) {
  const double c = p.c;
  const double alpha = p.alpha;
  LinearSystem sys{4, {}, State(4), grid};
  sys.matrix = [a, c, alpha](double t) {
    const double at = a(t);
    Eigen::MatrixXd m(4, 4);
    m << -alpha + alpha / c, 2.0 * alpha * at / c, alpha / c, alpha * alpha / c,
         -1.0 / c, -2.0 * at / c, -1.0 / c, -alpha / c,
         2.0 * at / c, 0.0, 2.0 * at / c, 2.0 * alpha * at / c,
         -1.0 / c, -2.0 * at / c, -1.0 / c, alpha - alpha / c;
    return m;
  };
  sys.forcing << p.alpha * p.beta, 0.0, p.eta * p.kappa, 0.0;
  return sys;
}

NashDiagnostics nash_diagnostics(const ModelParams& params, const TimeGrid& grid) {
  const RiccatiSolution a = solve_riccati(params);
  const LinearSystem sys = nash_system(a, params, grid).homogeneous();
  NashDiagnostics d{integrate(sys, State::Unit(3, 0)), 0.0, 0.0, false};
  d.b1_terminal = d.homogeneous.back()(0);
  d.scale = 1.0 + sup_norm(d.homogeneous);
  d.holds = std::abs(d.b1_terminal) > kShootingTolerance * d.scale;
  return d;
}

SocialDiagnostics social_diagnostics(const ModelParams& params,
                                     const TimeGrid& grid) {
  const RiccatiSolution a = solve_riccati(params);
  const LinearSystem sys = social_system(a, params, grid).homogeneous();
  SocialDiagnostics d{integrate(sys, State::Unit(4, 2)),
                      integrate(sys, State::Unit(4, 3)),
                      Eigen::Matrix2d::Zero(), 0.0, 0.0, false};
  const State& f = d.first.back();
  const State& s = d.second.back();
  d.shoot_matrix << f(2), s(2), f(3), s(3);
  d.det = d.shoot_matrix.determinant();
  d.scale = d.shoot_matrix.row(0).norm() * d.shoot_matrix.row(1).norm();
  d.holds = std::abs(d.det) > kShootingTolerance * d.scale;
  return d;
}

NashMeanField solve_nash(const ModelParams& params, double xbar0,
                         const TimeGrid& grid) {
  params.validate();
  const RiccatiSolution a = solve_riccati(params);
  const LinearSystem sys = nash_system(a, params, grid);

  const NashDiagnostics diag = nash_diagnostics(params, grid);
  if (!diag.holds) throw A1Violated(diag.b1_terminal, diag.scale);

  State start(3);
  start << 0.0, xbar0, params.p0;
  const Trajectory forced = integrate(sys, start);

  const double target = -params.gamma * params.zeta;
  const double b0 = (target - forced.back()(0)) / diag.b1_terminal;
  const std::array<double, 1> w{b0};
  const Trajectory tr =
      superpose(forced, std::span<const Trajectory>(&diag.homogeneous, 1), w);

  NashMeanField mf{grid, b0, xbar0, diag.b1_terminal, a.sample(grid),
                   tr.component(0), tr.component(1), tr.component(2), {}, true};
  mf.Qbar.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    mf.Qbar[k] = -(mf.Pbar[k] + 2.0 * mf.a[k] * mf.xbar[k] + mf.B[k]) / params.c;
  }
  return mf;
}

NashMeanField solve_nash(const ModelParams& params, const Population& pop,
                         const TimeGrid& grid) {
  pop.validate();
  NashMeanField mf = solve_nash(params, pop.mean_x0(), grid);
  mf.population_in_bounds = population_within_bounds(pop);
  return mf;
}

SocialMeanField solve_social(const ModelParams& params, double xbar0,
                             const TimeGrid& grid) {
  params.validate();
  const RiccatiSolution a = solve_riccati(params);
  const LinearSystem sys = social_system(a, params, grid);

  const SocialDiagnostics diag = social_diagnostics(params, grid);
  if (!diag.holds) throw A3Violated(diag.det, diag.scale);

  State start(4);
  start << params.p0, xbar0, 0.0, 0.0;
  const Trajectory forced = integrate(sys, start);

  // Cramer solve of shoot_matrix * (b0, l0) = (-gamma zeta - b(T), -l(T)).
  const double r0 = -params.gamma * params.zeta - forced.back()(2);
  const double r1 = -forced.back()(3);
  const Eigen::Matrix2d& m = diag.shoot_matrix;
  const double b0 = (r0 * m(1, 1) - m(0, 1) * r1) / diag.det;
  const double l0 = (m(0, 0) * r1 - r0 * m(1, 0)) / diag.det;

  const std::array<Trajectory, 2> basis{diag.first, diag.second};
  const std::array<double, 2> w{b0, l0};
  const Trajectory tr = superpose(forced, basis, w);

  SocialMeanField mf{grid, b0, l0, xbar0, m, diag.det, a.sample(grid),
                     tr.component(0), tr.component(1), tr.component(2),
                     tr.component(3), {}, true, true};
  mf.qbar.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    mf.qbar[k] = -(2.0 * mf.a[k] * mf.xbar[k] + mf.b[k] + mf.pbar[k] +
                   params.alpha * mf.l[k]) / params.c;
  }
  mf.coercive = social_coercivity_holds(params);
  return mf;
}

SocialMeanField solve_social(const ModelParams& params, const Population& pop,
                             const TimeGrid& grid) {
  pop.validate();
  SocialMeanField mf = solve_social(params, pop.mean_x0(), grid);
  mf.population_in_bounds = population_within_bounds(pop);
  return mf;
}

namespace {

Trajectory assemble(const TimeGrid& grid,
                    std::initializer_list<const std::vector<double>*> cols) {
  Trajectory tr{grid, std::vector<State>(grid.size(), State(cols.size()))};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Eigen::Index i = 0;
    for (const auto* c : cols) tr.values[k](i++) = (*c)[k];
  }
  return tr;
}

void fill_residuals(MeanFieldResiduals& r, const LinearSystem& sys,
                    const Trajectory& tr, Eigen::Index xbar_index,
                    const std::vector<double>& rate) {
  const TimeGrid& grid = tr.grid;
  const double h2 = 2.0 * grid.step();
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    const State d = (tr.values[k + 1] - tr.values[k - 1]) / h2;
    const State rhs = sys.matrix(grid.t(k)) * tr.values[k] + sys.forcing;
    r.ode = std::max(r.ode, (d - rhs).cwiseAbs().maxCoeff());
    r.consistency = std::max(r.consistency, std::abs(d(xbar_index) - rate[k]));
  }
  r.direct = integrate(sys, tr.front()).sup_distance(tr);
}

}  // namespace

MeanFieldResiduals residuals(const NashMeanField& mf, const ModelParams& params) {
  const LinearSystem sys = nash_system(solve_riccati(params), params, mf.grid);
  const Trajectory tr = assemble(mf.grid, {&mf.B, &mf.xbar, &mf.Pbar});
  MeanFieldResiduals r;
  r.terminal = std::abs(mf.B.back() + params.gamma * params.zeta);
  fill_residuals(r, sys, tr, 1, mf.Qbar);
  return r;
}

MeanFieldResiduals residuals(const SocialMeanField& mf, const ModelParams& params) {
  const LinearSystem sys = social_system(solve_riccati(params), params, mf.grid);
  const Trajectory tr = assemble(mf.grid, {&mf.pbar, &mf.xbar, &mf.b, &mf.l});
  MeanFieldResiduals r;
  r.terminal = std::abs(mf.b.back() + params.gamma * params.zeta);
  r.terminal_l = std::abs(mf.l.back());
  fill_residuals(r, sys, tr, 1, mf.qbar);
  return r;
}

FeedbackLaw::FeedbackLaw(TimeGrid grid, std::vector<double> slope,
                         std::vector<double> intercept)
    : grid_(grid), slope_(std::move(slope)), intercept_(std::move(intercept)) {
  if (slope_.size() != grid_.size() || intercept_.size() != grid_.size()) {
    throw std::invalid_argument("feedback law must be sampled on every grid point");
  }
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    if (!std::isfinite(slope_[k]) || !std::isfinite(intercept_[k])) {
      throw std::invalid_argument("feedback law coefficients must be finite");
    }
  }
}

double FeedbackLaw::interpolate(const std::vector<double>& v, double t) const {
  if (t <= 0.0) return v.front();
  if (t >= grid_.horizon()) return v.back();
  const double s = t / grid_.step();
  const std::size_t k = std::min(static_cast<std::size_t>(s), grid_.n_steps() - 1);
  const double w = s - static_cast<double>(k);
  return (1.0 - w) * v[k] + w * v[k + 1];
}

double FeedbackLaw::slope_at(double t) const { return interpolate(slope_, t); }
double FeedbackLaw::intercept_at(double t) const {
  return interpolate(intercept_, t);
}

FeedbackLaw nash_feedback(const NashMeanField& mf, const ModelParams& params) {
  const std::size_t n = mf.grid.size();
  std::vector<double> slope(n), intercept(n);
  for (std::size_t k = 0; k < n; ++k) {
    slope[k] = -2.0 * mf.a[k] / params.c;
    intercept[k] = -(mf.Pbar[k] + mf.B[k]) / params.c;
  }
  return FeedbackLaw(mf.grid, std::move(slope), std::move(intercept));
}

FeedbackLaw social_feedback(const SocialMeanField& mf, const ModelParams& params) {
  const std::size_t n = mf.grid.size();
  std::vector<double> slope(n), intercept(n);
  for (std::size_t k = 0; k < n; ++k) {
    slope[k] = -2.0 * mf.a[k] / params.c;
    intercept[k] = -(mf.b[k] + mf.pbar[k] + params.alpha * mf.l[k]) / params.c;
  }
  return FeedbackLaw(mf.grid, std::move(slope), std::move(intercept));
}

namespace {

// F(T) = gamma zeta^2 / 2 and F' = u^2 / (2c) - eta kappa^2 / 2 - sigma^2 a,
// with u the intercept numerator of the feedback law.
std::vector<double> backward_value_constant(const TimeGrid& grid,
                                            const std::vector<double>& u,
                                            const std::vector<double>& a,
                                            const ModelParams& p,
                                            double sigma_i) {
  const std::size_t n = grid.n_steps();
  auto rate = [&](std::size_t k) {
    return u[k] * u[k] / (2.0 * p.c) - 0.5 * p.eta * p.kappa * p.kappa -
           sigma_i * sigma_i * a[k];
  };
  std::vector<double> f(grid.size());
  f[n] = 0.5 * p.gamma * p.zeta * p.zeta;
  for (std::size_t k = n; k > 0; --k) {
    f[k - 1] = f[k] - 0.5 * grid.step() * (rate(k) + rate(k - 1));
  }
  return f;
}

}  // namespace

std::vector<double> value_constant_nash(const NashMeanField& mf,
                                        const ModelParams& params,
                                        double sigma_i) {
  std::vector<double> u(mf.grid.size());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = mf.Pbar[k] + mf.B[k];
  return backward_value_constant(mf.grid, u, mf.a, params, sigma_i);
}

std::vector<double> value_constant_social(const SocialMeanField& mf,
                                          const ModelParams& params,
                                          double sigma_i) {
  std::vector<double> u(mf.grid.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] = mf.b[k] + mf.pbar[k] + params.alpha * mf.l[k];
  }
  return backward_value_constant(mf.grid, u, mf.a, params, sigma_i);
}

void write_nash_csv(std::ostream& os, const NashMeanField& mf) {
  CsvWriter csv(os, {"t", "a", "B", "xbar", "Pbar", "Qbar"});
  for (std::size_t k = 0; k < mf.grid.size(); ++k) {
    csv.cell(mf.grid.t(k)).cell(mf.a[k]).cell(mf.B[k]).cell(mf.xbar[k])
        .cell(mf.Pbar[k]).cell(mf.Qbar[k]);
    csv.end_row();
  }
}

void write_social_csv(std::ostream& os, const SocialMeanField& mf) {
  CsvWriter csv(os, {"t", "a", "b", "l", "pbar", "xbar", "qbar"});
  for (std::size_t k = 0; k < mf.grid.size(); ++k) {
    csv.cell(mf.grid.t(k)).cell(mf.a[k]).cell(mf.b[k]).cell(mf.l[k])
        .cell(mf.pbar[k]).cell(mf.xbar[k]).cell(mf.qbar[k]);
    csv.end_row();
  }
}

}  // namespace mfgrid
