#include "mfgrid/odeint.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

using namespace mfgrid;

namespace {

LinearSystem constant_system(Eigen::MatrixXd m, State k, TimeGrid g) {
  const Eigen::Index d = m.rows();
  return LinearSystem{d, [m](double) { return m; }, std::move(k), g};
}

double exp_error(std::size_t steps) {
  const auto sys = constant_system(Eigen::MatrixXd::Constant(1, 1, -1.0),
                                   State::Zero(1), TimeGrid(1.0, steps));
  const Trajectory tr = integrate(sys, State::Ones(1));
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.grid.size(); ++k) {
    worst = std::max(worst, std::abs(tr.values[k](0) - std::exp(-tr.grid.t(k))));
  }
  return worst;
}

}  // namespace

TEST(Integrate, ConstantQuadrature) {
  const auto sys = constant_system(Eigen::MatrixXd::Zero(1, 1), State::Ones(1),
                                   TimeGrid(2.0, 10));
  EXPECT_NEAR(integrate(sys, State::Zero(1)).back()(0), 2.0, 1e-12);
}

TEST(Integrate, Exponential) {
  const auto sys = constant_system(Eigen::MatrixXd::Constant(1, 1, -1.0),
                                   State::Zero(1), TimeGrid(1.0, 2000));
  EXPECT_NEAR(integrate(sys, State::Ones(1)).back()(0), std::exp(-1.0), 1e-10);
}

TEST(Integrate, Rotation) {
  Eigen::MatrixXd m(2, 2);
  m << 0, -1, 1, 0;
  const auto sys = constant_system(m, State::Zero(2), TimeGrid(std::numbers::pi / 2, 2000));
  State x0(2);
  x0 << 1, 0;
  const State end = integrate(sys, x0).back();
  EXPECT_NEAR(end(0), 0.0, 1e-8);
  EXPECT_NEAR(end(1), 1.0, 1e-8);
}

TEST(Integrate, FourthOrderConvergence) {
  std::size_t n = 10;
  double prev = exp_error(n);
  for (int i = 0; i < 3; ++i) {
    n *= 2;
    const double e = exp_error(n);
    const double ratio = prev / e;
    EXPECT_GE(ratio, 12.0) << n;
    EXPECT_LE(ratio, 20.0) << n;
    prev = e;
  }
}

TEST(Integrate, TimeVaryingMatrixUsesMidpoints) {
  // x' = t x, x(0) = 1 -> exp(t^2 / 2)
  const LinearSystem sys{1, [](double t) { return Eigen::MatrixXd::Constant(1, 1, t); },
                         State::Zero(1), TimeGrid(1.0, 1000)};
  EXPECT_NEAR(integrate(sys, State::Ones(1)).back()(0), std::exp(0.5), 1e-11);
}

TEST(Integrate, LinearityOfHomogeneousSystem) {
  const LinearSystem sys{3,
                         [](double t) {
                           Eigen::MatrixXd m(3, 3);
                           m << std::sin(t), 0.5, -1, 0.2, -t, 0.3, 1, std::cos(t), 0;
                           return m;
                         },
                         State::Zero(3), TimeGrid(2.0, 500)};
  State u(3), v(3);
  u << 1, -2, 0.5;
  v << -0.3, 4, 2;
  const Trajectory tu = integrate(sys, u), tv = integrate(sys, v), tw = integrate(sys, u + v);
  for (std::size_t k = 0; k < tw.grid.size(); ++k) {
    const State sum = tu.values[k] + tv.values[k];
    EXPECT_LE((tw.values[k] - sum).cwiseAbs().maxCoeff(),
              1e-10 * std::max(1.0, sum.cwiseAbs().maxCoeff()));
  }
}

TEST(Integrate, Deterministic) {
  const LinearSystem sys{2,
                         [](double t) {
                           Eigen::MatrixXd m(2, 2);
                           m << -t, 1, 0.5, std::tanh(t);
                           return m;
                         },
                         State::Ones(2), TimeGrid(2.0, 300)};
  const Trajectory a = integrate(sys, State::Ones(2));
  const Trajectory b = integrate(sys, State::Ones(2));
  for (std::size_t k = 0; k < a.grid.size(); ++k) {
    for (Eigen::Index i = 0; i < 2; ++i) EXPECT_EQ(a.values[k](i), b.values[k](i));
  }
}

TEST(Integrate, NonFiniteStateThrows) {
  const auto sys = constant_system(Eigen::MatrixXd::Constant(1, 1, 1e300),
                                   State::Zero(1), TimeGrid(1.0, 10));
  EXPECT_THROW(integrate(sys, State::Ones(1)), IntegrationError);
}

TEST(Integrate, DimensionMismatchThrows) {
  const auto sys = constant_system(Eigen::MatrixXd::Zero(2, 2), State::Zero(2),
                                   TimeGrid(1.0, 10));
  EXPECT_ANY_THROW(integrate(sys, State::Zero(3)));
}

TEST(Superpose, Identities) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, -1, 0;
  const TimeGrid g(1.0, 50);
  const auto forced = constant_system(m, State::Ones(2), g);
  const auto hom = forced.homogeneous();
  const Trajectory base = integrate(forced, State::Zero(2));
  const Trajectory h1 = integrate(hom, State::Unit(2, 0));
  const Trajectory h2 = integrate(hom, State::Unit(2, 1));
  const std::array<Trajectory, 2> hs{h1, h2};

  const std::array<double, 2> zero{0.0, 0.0};
  EXPECT_EQ(superpose(base, hs, zero).sup_distance(base), 0.0);

  Trajectory nothing = base;
  for (auto& s : nothing.values) s.setZero();
  const std::array<double, 1> one{1.0};
  EXPECT_EQ(superpose(nothing, std::span(&h1, 1), one).sup_distance(h1), 0.0);

  const std::array<double, 2> w23{2.0, 3.0}, w11{1.0, 1.0}, w12{1.0, 2.0};
  const Trajectory lhs = superpose(base, hs, w23);
  const Trajectory a = superpose(base, hs, w11);
  const Trajectory b = superpose(nothing, hs, w12);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_LE((lhs.values[k] - a.values[k] - b.values[k]).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Superpose, Mismatches) {
  const auto sys = constant_system(Eigen::MatrixXd::Zero(2, 2), State::Zero(2),
                                   TimeGrid(1.0, 10));
  const Trajectory a = integrate(sys, State::Ones(2));
  const Trajectory other_grid = integrate(
      constant_system(Eigen::MatrixXd::Zero(2, 2), State::Zero(2), TimeGrid(1.0, 20)),
      State::Ones(2));
  const Trajectory other_dim = integrate(
      constant_system(Eigen::MatrixXd::Zero(3, 3), State::Zero(3), TimeGrid(1.0, 10)),
      State::Ones(3));
  const std::array<double, 1> w{1.0};
  const std::array<double, 2> w2{1.0, 1.0};
  EXPECT_ANY_THROW(superpose(a, std::span(&other_grid, 1), w));
  EXPECT_ANY_THROW(superpose(a, std::span(&other_dim, 1), w));
  EXPECT_ANY_THROW(superpose(a, std::span(&a, 1), w2));
}
