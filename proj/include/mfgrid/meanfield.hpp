#pragma once

// Mean-field consistency systems of the non-cooperative (Nash) and cooperative
// (social) games, solved by superposing one forced trajectory with homogeneous
// fundamental solutions so that the split boundary conditions close exactly.

#include "mfgrid/model.hpp"
#include "mfgrid/odeint.hpp"
#include "mfgrid/riccati.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfgrid {

// The Nash shooting equation degenerates: B_1(T) vanishes.
class A1Violated : public std::runtime_error {
 public:
  A1Violated(double b1_terminal, double scale);
  double b1_terminal;
  double scale;
};

// The social shooting matrix [[b1(T), b2(T)], [l1(T), l2(T)]] is singular.
class A3Violated : public std::runtime_error {
 public:
  A3Violated(double det, double scale);
  double det;
  double scale;
};

inline constexpr double kShootingTolerance = 1e-10;

// State ordering (B, xbar, Pbar); forcing (eta kappa, 0, alpha beta).
LinearSystem nash_system(const RiccatiSolution& a, const ModelParams& params,
                         const TimeGrid& grid);

// State ordering (pbar, xbar, b, l); forcing (alpha beta, 0, eta kappa, 0).
LinearSystem social_system(const RiccatiSolution& a, const ModelParams& params,
                           const TimeGrid& grid);

struct NashDiagnostics {
  Trajectory homogeneous;  // started from (1, 0, 0)
  double b1_terminal = 0.0;
  double scale = 0.0;      // 1 + sup-norm of the homogeneous trajectory
  bool holds = false;
};

struct SocialDiagnostics {
  Trajectory first;   // started from (0, 0, 1, 0)
  Trajectory second;  // started from (0, 0, 0, 1)
  Eigen::Matrix2d shoot_matrix;  // [[b1(T), b2(T)], [l1(T), l2(T)]]
  double det = 0.0;
  double scale = 0.0;  // product of the row norms
  bool holds = false;
};

NashDiagnostics nash_diagnostics(const ModelParams& params, const TimeGrid& grid);
SocialDiagnostics social_diagnostics(const ModelParams& params,
                                     const TimeGrid& grid);

struct NashMeanField {
  TimeGrid grid;
  double b0 = 0.0;
  double xbar0 = 0.0;
  double B1_terminal = 0.0;
  std::vector<double> a;
  std::vector<double> B;
  std::vector<double> xbar;
  std::vector<double> Pbar;
  std::vector<double> Qbar;  // -(Pbar + 2 a xbar + B) / c
  bool population_in_bounds = true;
};

struct SocialMeanField {
  TimeGrid grid;
  double b0 = 0.0;
  double l0 = 0.0;
  double xbar0 = 0.0;
  Eigen::Matrix2d shoot_matrix;
  double shoot_det = 0.0;
  std::vector<double> a;
  std::vector<double> pbar;
  std::vector<double> xbar;
  std::vector<double> b;
  std::vector<double> l;
  std::vector<double> qbar;  // -(2 a xbar + b + pbar + alpha l) / c
  bool population_in_bounds = true;
  bool coercive = true;
};

NashMeanField solve_nash(const ModelParams& params, double xbar0,
                         const TimeGrid& grid);
NashMeanField solve_nash(const ModelParams& params, const Population& pop,
                         const TimeGrid& grid);

SocialMeanField solve_social(const ModelParams& params, double xbar0,
                             const TimeGrid& grid);
SocialMeanField solve_social(const ModelParams& params, const Population& pop,
                             const TimeGrid& grid);

// v(t, x) = slope(t) x + intercept(t), sampled on the grid.
class FeedbackLaw {
 public:
  FeedbackLaw(TimeGrid grid, std::vector<double> slope,
              std::vector<double> intercept);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& slope() const { return slope_; }
  const std::vector<double>& intercept() const { return intercept_; }

  double operator()(std::size_t k, double x) const {
    return slope_[k] * x + intercept_[k];
  }
  // Linear interpolation between grid points.
  double slope_at(double t) const;
  double intercept_at(double t) const;
  double operator()(double t, double x) const {
    return slope_at(t) * x + intercept_at(t);
  }

 private:
  double interpolate(const std::vector<double>& v, double t) const;

  TimeGrid grid_;
  std::vector<double> slope_;
  std::vector<double> intercept_;
};

FeedbackLaw nash_feedback(const NashMeanField& mf, const ModelParams& params);
FeedbackLaw social_feedback(const SocialMeanField& mf, const ModelParams& params);

// Free term F_i of the value function a x^2 + B x + F_i, backward trapezoid
// from F_i(T) = gamma zeta^2 / 2.
std::vector<double> value_constant_nash(const NashMeanField& mf,
                                        const ModelParams& params,
                                        double sigma_i);
// Free term f_i of a x^2 + b x + l u + f_i.
std::vector<double> value_constant_social(const SocialMeanField& mf,
                                          const ModelParams& params,
                                          double sigma_i);

// Post-solve checks, all sup-norms.
struct MeanFieldResiduals {
  double terminal = 0.0;     // |B(T) + gamma zeta| or |b(T) + gamma zeta|
  double terminal_l = 0.0;   // |l(T)|, social only
  double ode = 0.0;          // central differences vs M(t) s + K, interior points
  double consistency = 0.0;  // central-difference dxbar/dt vs Qbar, interior points
  double direct = 0.0;       // superposed vs direct forced integration
};

MeanFieldResiduals residuals(const NashMeanField& mf, const ModelParams& params);
MeanFieldResiduals residuals(const SocialMeanField& mf, const ModelParams& params);

// Columns t, a, B, xbar, Pbar, Qbar.
void write_nash_csv(std::ostream& os, const NashMeanField& mf);
// Columns t, a, b, l, pbar, xbar, qbar.
void write_social_csv(std::ostream& os, const SocialMeanField& mf);

}  // namespace mfgrid
