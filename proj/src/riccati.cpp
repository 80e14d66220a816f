#include "mfgrid/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mfgrid {

std::string_view to_string(RiccatiBranch b) {
  switch (b) {
    case RiccatiBranch::above: return "above";
    case RiccatiBranch::equal: return "equal";
    case RiccatiBranch::below: return "below";
  }
  return "unknown";
}

RiccatiSolution::RiccatiSolution(double eta, double c, double gamma,
                                 double horizon)
    : eta_(eta), c_(c), gamma_(gamma), horizon_(horizon),
      branch_(RiccatiBranch::equal), scale_(0.0), rate_(0.0), offset_(0.0) {
  if (!(eta > 0.0) || !(c > 0.0) || !(gamma >= 0.0) || !(horizon > 0.0)) {
    throw ModelError("riccati requires eta > 0, c > 0, gamma >= 0, T > 0");
  }
  const double root = std::sqrt(c * eta);
  scale_ = 0.5 * root;
  rate_ = std::sqrt(eta / c);

  // Exact comparison; near-equal inputs use the above/below formulas, which
  // stay accurate until |gamma - root| / root reaches rounding level.
  if (gamma > root) {
    branch_ = RiccatiBranch::above;
    offset_ = std::atanh(root / gamma);
    // The coth argument rate (t - T) - offset must stay < 0 on [0, T].
    if (!(offset_ > 0.0) || !std::isfinite(offset_)) {
      throw RiccatiError("riccati closed form has a pole inside [0, T]");
    }
  } else if (gamma < root) {
    branch_ = RiccatiBranch::below;
    offset_ = std::atanh(gamma / root);
  }
}

double RiccatiSolution::operator()(double t) const {
  switch (branch_) {
    case RiccatiBranch::equal:
      return scale_;
    case RiccatiBranch::above:
      return -scale_ / std::tanh(rate_ * (t - horizon_) - offset_);
    case RiccatiBranch::below:
      return scale_ * std::tanh(rate_ * (horizon_ - t) + offset_);
  }
  return scale_;
}

double RiccatiSolution::derivative(double t) const {
  const double a = (*this)(t);
  return 2.0 * a * a / c_ - 0.5 * eta_;
}

std::vector<double> RiccatiSolution::sample(const TimeGrid& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] = (*this)(grid.t(k));
  return out;
}

RiccatiSolution solve_riccati(const ModelParams& params) {
  return RiccatiSolution(params.eta, params.c, params.gamma, params.T);
}

double verify_riccati(const RiccatiSolution& sol, const TimeGrid& grid) {
  const double c = sol.c();
  const double eta = sol.eta();
  auto rhs = [&](double a) { return 2.0 * a * a / c - 0.5 * eta; };

  const double h = grid.step();
  double a = 0.5 * sol.gamma();
  double worst = std::abs(a - sol(grid.t(grid.n_steps())));
  for (std::size_t k = grid.n_steps(); k > 0; --k) {
    // Step from t_k to t_{k-1} with step -h.
    const double k1 = rhs(a);
    const double k2 = rhs(a - 0.5 * h * k1);
    const double k3 = rhs(a - 0.5 * h * k2);
    const double k4 = rhs(a - h * k3);
    a -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    worst = std::max(worst, std::abs(a - sol(grid.t(k - 1))));
  }
  return worst;
}

std::vector<double> riccati_residual(const RiccatiSolution& sol,
                                     const TimeGrid& grid) {
  const std::vector<double> a = sol.sample(grid);
  const double h = grid.step();
  const std::size_t n = grid.n_steps();
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k <= n; ++k) {
    double da;
    if (k == 0) {
      da = (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * h);
    } else if (k == n) {
      da = (3.0 * a[n] - 4.0 * a[n - 1] + a[n - 2]) / (2.0 * h);
    } else {
      da = (a[k + 1] - a[k - 1]) / (2.0 * h);
    }
    out[k] = std::abs(da + 0.5 * sol.eta() - 2.0 * a[k] * a[k] / sol.c());
  }
  return out;
}

}  // namespace mfgrid
