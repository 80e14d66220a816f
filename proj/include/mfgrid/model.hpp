#pragma once

// Market, cost and population parameters of the charging game, the uniform
// time grid shared by every solver, and the parameter-level feasibility checks.

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfgrid {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ModelParams {
  double alpha = 1.0;  // price sensitivity
  double beta = 4.0;   // market level
  double eta = 1.0;    // running storage weight
  double kappa = 4.0;  // preferred instantaneous storage
  double gamma = 2.0;  // terminal weight
  double zeta = 9.0;   // preferred final storage
  double c = 4.0;      // control cost weight
  double p0 = 3.0;     // initial price
  double T = 2.0;      // horizon

  // Throws ModelError naming the first violated field.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Population {
  std::vector<double> x0;
  std::vector<double> sigma;
  Interval x0_bounds;
  Interval sigma_bounds;

  std::size_t size() const { return x0.size(); }
  // Empirical mean of the initial storages; enters both consistency systems
  // as the initial condition of the mean storage.
  double mean_x0() const;
  void validate() const;
};

class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t n_steps);

  double horizon() const { return horizon_; }
  std::size_t n_steps() const { return n_steps_; }
  std::size_t size() const { return n_steps_ + 1; }
  double step() const { return h_; }
  // The last point is pinned to the horizon.
  double t(std::size_t k) const {
    return k == n_steps_ ? horizon_ : static_cast<double>(k) * h_;
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  std::size_t n_steps_;
  double h_;
};

// Every initial storage and volatility lies in its compact interval.
bool population_within_bounds(const Population& pop);

// (c - 2) * eta > alpha^2, required for coercivity of the social cost.
bool social_coercivity_holds(const ModelParams& params);

// Positive-real LMI check. `lmi` is the matrix as assembled; `test` = -lmi,
// which must be positive semidefinite for the LMI to hold.
struct LmiCheck {
  Eigen::Matrix3d lmi;
  Eigen::Matrix3d test;
  Eigen::Vector3d test_eigenvalues;  // ascending
  bool feasible = false;
};

inline constexpr double kLmiTolerance = 1e-10;

// LMI for the unilateral-deviation coercivity bound at population size n with
// storage weight eps1 and control weight eps2. The entries do not depend on
// alpha once the diagonal storage matrix is chosen as diag(eps1, 1/(2 alpha eps2)).
LmiCheck lmi_nash(double eps1, double eps2, long n, double alpha = 1.0);

// lmi_nash holds iff n >= (sqrt(2) + 1) / (2 eps2).
double lmi_nash_threshold(double eps2);

// LMI for the cooperative coercivity bound; holds for every alpha > 0.
LmiCheck lmi_social(double alpha = 1.0);

}  // namespace mfgrid
