#pragma once

// Scalar Riccati equation a'(t) + eta/2 - 2 a(t)^2 / c = 0, a(T) = gamma/2.
// It carries the quadratic coefficient of both value functions and the slope
// -2a/c of both feedback laws.

#include "mfgrid/model.hpp"

#include <stdexcept>
#include <string_view>
#include <vector>

namespace mfgrid {

// Sign of gamma - sqrt(c eta).
enum class RiccatiBranch { above, equal, below };

std::string_view to_string(RiccatiBranch b);

class RiccatiError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RiccatiSolution {
 public:
  RiccatiSolution(double eta, double c, double gamma, double horizon);

  double operator()(double t) const;
  // a'(t) from the ODE itself, i.e. 2 a^2 / c - eta / 2.
  double derivative(double t) const;

  RiccatiBranch branch() const { return branch_; }
  double eta() const { return eta_; }
  double c() const { return c_; }
  double gamma() const { return gamma_; }
  double horizon() const { return horizon_; }

  std::vector<double> sample(const TimeGrid& grid) const;

 private:
  double eta_;
  double c_;
  double gamma_;
  double horizon_;
  RiccatiBranch branch_;
  double scale_;   // sqrt(c eta) / 2
  double rate_;    // sqrt(eta / c)
  double offset_;  // arctanh of gamma / sqrt(c eta) or its reciprocal
};

RiccatiSolution solve_riccati(const ModelParams& params);

// Backward classical RK4 from a(T) = gamma/2 on the grid; returns the sup over
// grid points of |a_rk4 - a_closed|.
double verify_riccati(const RiccatiSolution& sol, const TimeGrid& grid);

// |a' + eta/2 - 2a^2/c| per grid point with a' by finite differences
// (central inside, second-order one-sided at the ends).
std::vector<double> riccati_residual(const RiccatiSolution& sol,
                                     const TimeGrid& grid);

}  // namespace mfgrid
