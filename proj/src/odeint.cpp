#include "mfgrid/odeint.hpp"

#include <algorithm>
#include <string>

namespace mfgrid {

LinearSystem LinearSystem::homogeneous() const {
  LinearSystem out = *this;
  out.forcing = State::Zero(dim);
  return out;
}

std::vector<double> Trajectory::component(Eigen::Index i) const {
  std::vector<double> out(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) out[k] = values[k](i);
  return out;
}

double Trajectory::sup_distance(const Trajectory& other) const {
  if (values.size() != other.values.size()) {
    throw std::invalid_argument("trajectory lengths differ");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    worst = std::max(worst, (values[k] - other.values[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

Trajectory integrate(const LinearSystem& sys, const State& initial) {
  if (initial.size() != sys.dim || sys.forcing.size() != sys.dim) {
    throw std::invalid_argument("integrate: dimension mismatch");
  }
  const TimeGrid& grid = sys.grid;
  const double h = grid.step();
  const State& K = sys.forcing;

  Trajectory out{grid, {}};
  out.values.reserve(grid.size());
  out.values.push_back(initial);

  State y = initial;
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    const double t = grid.t(k);
    const Eigen::MatrixXd m0 = sys.matrix(t);
    const Eigen::MatrixXd mh = sys.matrix(t + 0.5 * h);
    const Eigen::MatrixXd m1 = sys.matrix(t + h);
    if (m0.rows() != sys.dim || m0.cols() != sys.dim) {
      throw std::invalid_argument("integrate: matrix_fn returned wrong shape");
    }
    const State k1 = m0 * y + K;
    const State k2 = mh * (y + 0.5 * h * k1) + K;
    const State k3 = mh * (y + 0.5 * h * k2) + K;
    const State k4 = m1 * (y + h * k3) + K;
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite()) {
      throw IntegrationError("integrate: state became non-finite at step " +
                             std::to_string(k + 1));
    }
    out.values.push_back(y);
  }
  return out;
}

Trajectory superpose(const Trajectory& base,
                     std::span<const Trajectory> homogeneous,
                     std::span<const double> weights) {
  if (homogeneous.size() != weights.size()) {
    throw std::invalid_argument("superpose: weights and trajectories differ in count");
  }
  for (const Trajectory& h : homogeneous) {
    if (!(h.grid == base.grid) || h.values.size() != base.values.size() ||
        h.dim() != base.dim()) {
      throw std::invalid_argument("superpose: grid or dimension mismatch");
    }
  }
  Trajectory out = base;
  for (std::size_t j = 0; j < homogeneous.size(); ++j) {
    if (weights[j] == 0.0) continue;
    for (std::size_t k = 0; k < out.values.size(); ++k) {
      out.values[k] += weights[j] * homogeneous[j].values[k];
    }
  }
  return out;
}

}  // namespace mfgrid
