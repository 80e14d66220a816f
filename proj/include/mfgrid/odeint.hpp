#pragma once

// Fixed-step RK4 for time-varying linear systems k'(t) = M(t) k(t) + K and the
// superposition used to close mixed initial/terminal boundary conditions.

#include "mfgrid/model.hpp"

#include <Eigen/Core>

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace mfgrid {

using State = Eigen::VectorXd;
using MatrixFn = std::function<Eigen::MatrixXd(double)>;

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LinearSystem {
  Eigen::Index dim = 0;
  MatrixFn matrix;
  State forcing;  // constant
  TimeGrid grid;

  // The same system with zero forcing.
  LinearSystem homogeneous() const;
};

struct Trajectory {
  TimeGrid grid;
  std::vector<State> values;  // one per grid point

  Eigen::Index dim() const { return values.empty() ? 0 : values.front().size(); }
  const State& front() const { return values.front(); }
  const State& back() const { return values.back(); }
  // Component i at every grid point.
  std::vector<double> component(Eigen::Index i) const;
  // max_k |values[k] - other.values[k]|_inf
  double sup_distance(const Trajectory& other) const;
};

// Classical RK4 from t = 0 to T with M evaluated at t, t + h/2 and t + h.
// Throws IntegrationError if the state becomes non-finite.
Trajectory integrate(const LinearSystem& sys, const State& initial);

// base + sum_j weights[j] * homogeneous[j], pointwise.
Trajectory superpose(const Trajectory& base,
                     std::span<const Trajectory> homogeneous,
                     std::span<const double> weights);

}  // namespace mfgrid
