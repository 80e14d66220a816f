#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include "mfgrid/model.hpp"
#include "mfgrid/riccati.hpp"

#include <array>

namespace oracle {

using mfgrid::ModelParams;
using mfgrid::RiccatiSolution;
using mfgrid::solve_riccati;

// Terminal B(T) + gamma zeta of the forced Nash system started at (b, xbar0, p0),
// stepped with a separate RK4 loop.
inline double nash_terminal_gap(const ModelParams& p, double b, double xbar0, int steps) {
  const RiccatiSolution a = solve_riccati(p);
  const double h = p.T / steps;
  auto f = [&](double t, const std::array<double, 3>& s) {
    const double at = a(t);
    return std::array<double, 3>{
        2 * at / p.c * s[0] + 2 * at / p.c * s[2] + p.eta * p.kappa,
        -s[0] / p.c - 2 * at / p.c * s[1] - s[2] / p.c,
        p.alpha / p.c * s[0] + 2 * p.alpha * at / p.c * s[1] +
            (-p.alpha + p.alpha / p.c) * s[2] + p.alpha * p.beta};
  };
  auto axpy = [](const std::array<double, 3>& x, double w, const std::array<double, 3>& y) {
    return std::array<double, 3>{x[0] + w * y[0], x[1] + w * y[1], x[2] + w * y[2]};
  };
  std::array<double, 3> s{b, xbar0, p.p0};
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const auto k1 = f(t, s);
    const auto k2 = f(t + h / 2, axpy(s, h / 2, k1));
    const auto k3 = f(t + h / 2, axpy(s, h / 2, k2));
    const auto k4 = f(t + h, axpy(s, h, k3));
    for (int i = 0; i < 3; ++i) s[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return s[0] + p.gamma * p.zeta;
}

inline double bisect_b0(const ModelParams& p, double xbar0) {
  double lo = -100.0, hi = 100.0;
  double flo = nash_terminal_gap(p, lo, xbar0, 2000);
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = nash_terminal_gap(p, mid, xbar0, 2000);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
