#include "mfgrid/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>

namespace mfgrid {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ModelError(what);
}

bool finite(double x) { return std::isfinite(x); }

LmiCheck finish_lmi(const Eigen::Matrix3d& lmi) {
  LmiCheck out;
  out.lmi = lmi;
  // Exact symmetrization before the eigensolve.
  out.test = -0.5 * (lmi + lmi.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(out.test,
                                                     Eigen::EigenvaluesOnly);
  out.test_eigenvalues = eig.eigenvalues();
  out.feasible = out.test_eigenvalues.minCoeff() >= -kLmiTolerance;
  return out;
}

}  // namespace

void ModelParams::validate() const {
  require(finite(alpha) && alpha > 0.0, "params.alpha must be > 0");
  require(finite(beta) && beta > 0.0, "params.beta must be > 0");
  require(finite(eta) && eta > 0.0, "params.eta must be > 0");
  require(finite(kappa), "params.kappa must be finite");
  require(finite(gamma) && gamma >= 0.0, "params.gamma must be >= 0");
  require(finite(zeta), "params.zeta must be finite");
  require(finite(c) && c > 0.0, "params.c must be > 0");
  require(finite(p0), "params.p0 must be finite");
  require(finite(T) && T > 0.0, "params.T must be > 0");
}

double Population::mean_x0() const {
  if (x0.empty()) throw ModelError("population is empty");
  return std::accumulate(x0.begin(), x0.end(), 0.0) /
         static_cast<double>(x0.size());
}

void Population::validate() const {
  require(!x0.empty(), "population.n must be >= 1");
  require(x0.size() == sigma.size(),
          "population.x0 and population.sigma must have equal length");
  for (double s : sigma) {
    require(finite(s) && s >= 0.0, "population.sigma entries must be >= 0");
  }
  for (double x : x0) require(finite(x), "population.x0 entries must be finite");
  require(x0_bounds.lo <= x0_bounds.hi, "population.x0_range must have lo <= hi");
  require(sigma_bounds.lo <= sigma_bounds.hi,
          "population.sigma_range must have lo <= hi");
}

TimeGrid::TimeGrid(double horizon, std::size_t n_steps)
    : horizon_(horizon), n_steps_(n_steps), h_(0.0) {
  require(std::isfinite(horizon) && horizon > 0.0, "grid horizon must be > 0");
  require(n_steps >= 2, "grid.n_steps must be >= 2");
  h_ = horizon / static_cast<double>(n_steps);
}

bool population_within_bounds(const Population& pop) {
  for (double x : pop.x0) {
    if (!pop.x0_bounds.contains(x)) return false;
  }
  for (double s : pop.sigma) {
    if (!pop.sigma_bounds.contains(s)) return false;
  }
  return true;
}

bool social_coercivity_holds(const ModelParams& p) {
  return (p.c - 2.0) * p.eta > p.alpha * p.alpha;
}

double lmi_nash_threshold(double eps2) {
  return (std::sqrt(2.0) + 1.0) / (2.0 * eps2);
}

LmiCheck lmi_nash(double eps1, double eps2, long n, double alpha) {
  require(eps1 > 0.0 && eps2 > 0.0, "lmi_nash requires eps1, eps2 > 0");
  require(n >= 1, "lmi_nash requires n >= 1");
  require(alpha > 0.0, "lmi_nash requires alpha > 0");

  const double nn = static_cast<double>(n);
  // System (A, B, C, D) of the deviator: storage integrates v, price decays at
  // rate alpha and is pushed by -alpha v / n. Output y = eps1 x + p + eps2 v.
  Eigen::Matrix2d A;
  A << 0.0, 0.0, 0.0, -alpha;
  Eigen::Vector2d B(1.0, -alpha / nn);
  Eigen::RowVector2d C(eps1, 1.0);
  const double D = eps2;
  Eigen::Matrix2d P = Eigen::Vector2d(eps1, 1.0 / (2.0 * alpha * D)).asDiagonal();

  Eigen::Matrix3d L;
  L.topLeftCorner<2, 2>() = A.transpose() * P + P * A;
  L.topRightCorner<2, 1>() = P * B - C.transpose();
  L.bottomLeftCorner<1, 2>() = B.transpose() * P - C;
  L(2, 2) = -2.0 * D;
  return finish_lmi(L);
}

LmiCheck lmi_social(double alpha) {
  require(alpha > 0.0, "lmi_social requires alpha > 0");
  Eigen::Matrix2d A;
  A << 0.0, 0.0, 0.0, -alpha;
  Eigen::Vector2d B(1.0, -alpha);
  Eigen::RowVector2d C(alpha, 1.0);
  const double D = 1.0;
  Eigen::Matrix2d P = Eigen::Vector2d(alpha, 1.0 / alpha).asDiagonal();

  Eigen::Matrix3d L;
  L.topLeftCorner<2, 2>() = A.transpose() * P + P * A;
  L.topRightCorner<2, 1>() = P * B - C.transpose();
  L.bottomLeftCorner<1, 2>() = B.transpose() * P - C;
  L(2, 2) = -2.0 * D;
  return finish_lmi(L);
}

}  // namespace mfgrid
