#include "mfgrid/riccati.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace mfgrid;

namespace {

// Backward RK4 on a' = 2a^2/c - eta/2 with its own stepping, reused as an oracle.
double rk4_a0(double eta, double c, double gamma, double T, int steps) {
  const double h = T / steps;
  auto f = [&](double a) { return 2.0 * a * a / c - 0.5 * eta; };
  double a = 0.5 * gamma;
  for (int k = 0; k < steps; ++k) {
    const double k1 = f(a);
    const double k2 = f(a - 0.5 * h * k1);
    const double k3 = f(a - 0.5 * h * k2);
    const double k4 = f(a - h * k3);
    a -= h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return a;
}

}  // namespace

TEST(Riccati, EqualBranchIsConstant) {
  const RiccatiSolution a = solve_riccati(ModelParams{});
  EXPECT_EQ(a.branch(), RiccatiBranch::equal);
  const TimeGrid g(2.0, 2000);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(a(g.t(k)), 1.0, 1e-12);
  EXPECT_LE(verify_riccati(a, g), 1e-10);
}

TEST(Riccati, FrozenHighAccuracyValues) {
  // Reference values from an independent adaptive high-order integrator.
  const struct { double gamma, a0, a1; RiccatiBranch branch; } cases[] = {
      {5.0, 1.1231441340274746, 1.3743455317253614, RiccatiBranch::above},
      {1.0, 0.9136709340400119, 0.7815364548539478, RiccatiBranch::below},
      {0.0, 0.7615941559557559, 0.46211715725990415, RiccatiBranch::below},
  };
  for (const auto& c : cases) {
    const RiccatiSolution a(1.0, 4.0, c.gamma, 2.0);
    EXPECT_EQ(a.branch(), c.branch);
    EXPECT_NEAR(a(0.0), c.a0, 1e-12) << c.gamma;
    EXPECT_NEAR(a(1.0), c.a1, 1e-12) << c.gamma;
    EXPECT_NEAR(a(2.0), 0.5 * c.gamma, 1e-12 * std::max(1.0, c.gamma));
  }
}

TEST(Riccati, AboveBranchMatchesFineRk4) {
  const RiccatiSolution a(1.0, 4.0, 5.0, 2.0);
  EXPECT_NEAR(a(0.0), rk4_a0(1.0, 4.0, 5.0, 2.0, 100000), 1e-12);
}

TEST(Riccati, ZeroTerminalWeight) {
  const RiccatiSolution a(1.0, 4.0, 0.0, 2.0);
  EXPECT_EQ(a(2.0), 0.0);
  EXPECT_GT(a(0.0), 0.0);
}

TEST(Riccati, VerifyAtDefaultGrid) {
  const TimeGrid g(2.0, 2000);
  for (double gamma : {1.0, 5.0}) {
    EXPECT_LE(verify_riccati(RiccatiSolution(1.0, 4.0, gamma, 2.0), g), 1e-8) << gamma;
  }
}

TEST(Riccati, OdeResidualOnFineGrid) {
  // Central differences carry h^2 truncation, so the 1e-8 residual needs a
  // finer grid than the solver default for the curved branches.
  const TimeGrid g(2.0, 200000);
  for (double gamma : {0.0, 1.0, 2.0, 5.0}) {
    const auto r = riccati_residual(RiccatiSolution(1.0, 4.0, gamma, 2.0), g);
    EXPECT_LE(*std::max_element(r.begin(), r.end()), 1e-8) << gamma;
  }
}

TEST(Riccati, RandomDrawsAgreeWithRk4AndStayAboveLowerBound) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.2, 4.0);
  std::uniform_real_distribution<double> ug(0.0, 8.0);
  const TimeGrid g(2.0, 2000);
  for (int i = 0; i < 100; ++i) {
    const double eta = u(rng), c = u(rng), gamma = ug(rng);
    const RiccatiSolution a(eta, c, gamma, 2.0);
    EXPECT_LE(verify_riccati(a, g), 1e-7) << eta << " " << c << " " << gamma;
    const double lower = -0.5 * std::sqrt(c * eta);
    for (std::size_t k = 0; k < g.size(); k += 50) {
      const double v = a(g.t(k));
      EXPECT_TRUE(std::isfinite(v));
      EXPECT_GT(v, lower);
    }
  }
}

TEST(Riccati, DerivativeConsistent) {
  const RiccatiSolution a(1.0, 4.0, 5.0, 2.0);
  const double h = 1e-5;
  EXPECT_NEAR(a.derivative(0.7), (a(0.7 + h) - a(0.7 - h)) / (2 * h), 1e-8);
}

TEST(Riccati, BranchNames) {
  EXPECT_EQ(to_string(RiccatiBranch::above), "above");
  EXPECT_EQ(to_string(RiccatiBranch::equal), "equal");
  EXPECT_EQ(to_string(RiccatiBranch::below), "below");
}
