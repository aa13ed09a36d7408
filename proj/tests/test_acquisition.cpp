#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rei/acquisition.hpp"
#include "test_util.hpp"

using namespace rei;
using testgen::Gen;
using testgen::rel_err;

namespace {

// sigma * integral_0^inf s phi(z - s) ds with z = (f_ref - mean) / sigma, the
// improvement integral after substituting f = f_ref - sigma s.
double ei_quadrature(double mean, double variance, double f_ref) {
  const double sigma = std::sqrt(variance);
  const double z = (f_ref - mean) / sigma;
  auto integrand = [z](double s) { return s * std::exp(-0.5 * (z - s) * (z - s)) / std::sqrt(2.0 * M_PI); };
  const double upper = std::max(0.0, z) + 40.0;
  return sigma * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, upper, 30, 1e-14);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST(Ei, DeterministicImprovement) { EXPECT_DOUBLE_EQ(ei(-1.0, 0.0, 0.0), 1.0); }

TEST(Ei, AtIncumbentEqualsPdfAtZero) {
  EXPECT_NEAR(ei(0.3, 1.0, 0.3), 0.3989422804014327, 1e-15);
  EXPECT_NEAR(ei(0.3, 1.0, 0.3), ei_quadrature(0.3, 1.0, 0.3), 1e-12);
}

TEST(Ei, FarAboveIncumbentIsTiny) {
  const double v = ei(5.0, 0.01, 0.0);
  EXPECT_LT(v, 1e-10);
  EXPECT_GE(v, 0.0);
  EXPECT_LT(rel_err(v, ei_quadrature(5.0, 0.01, 0.0)), 1e-6);
}

TEST(Ei, QuadratureGrid) {
  // 10 x 10 x 5 grid of (mean offset, sigma, f_ref).
  double worst = 0.0;
  for (double off : linspace(-3.0, 3.0, 10))
    for (double ls : linspace(std::log(0.1), std::log(3.0), 10))
      for (double f_ref : linspace(-1.0, 1.0, 5)) {
        const double sigma = std::exp(ls);
        const double mean = f_ref + off;
        worst = std::max(worst, rel_err(ei(mean, sigma * sigma, f_ref), ei_quadrature(mean, sigma * sigma, f_ref)));
      }
  EXPECT_LE(worst, 1e-6);
}

TEST(Ei, MonotoneInSigmaAndMean) {
  for (double f_ref : {-1.0, 0.0, 2.0})
    for (double mean : linspace(-4.0, 4.0, 41)) {
      double prev = -1.0;
      for (double sigma : linspace(0.0, 3.0, 61)) {
        const double v = ei(mean, sigma * sigma, f_ref);
        EXPECT_GE(v, 0.0);
        EXPECT_GE(v, prev - 1e-15);
        prev = v;
      }
    }
  for (double sigma : {0.0, 0.1, 1.0, 3.0}) {
    double prev = INFINITY;
    for (double mean : linspace(-4.0, 4.0, 81)) {
      const double v = ei(mean, sigma * sigma, 0.0);
      EXPECT_LE(v, prev + 1e-15);
      prev = v;
    }
  }
}

TEST(LogEi, DeterministicLimit) { EXPECT_NEAR(log_ei(-1.0, 1e-18, 0.0), 0.0, 1e-6); }

TEST(LogEi, ExpMatchesEiOnGrid) {
  double worst = 0.0;
  for (double off : linspace(-5.0, 30.0, 71))
    for (double sigma : {1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0})
      for (double f_ref : {-2.0, 0.0, 1.5}) {
        const double mean = f_ref + off * sigma;
        const double e = ei(mean, sigma * sigma, f_ref);
        if (!(e > 1e-12)) continue;
        worst = std::max(worst, rel_err(std::exp(log_ei(mean, sigma * sigma, f_ref)), e));
      }
  EXPECT_LE(worst, 1e-10);
}

TEST(LogEi, DeepTailIsFinite) {
  // log(phi(-40) - 40 Phi(-40)) evaluated with 50-digit arithmetic (mpmath).
  const double oracle = -808.2985683566199602409399;
  const double v = log_ei(40.0, 1.0, 0.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_LT(v, -700.0);
  EXPECT_LT(rel_err(v, oracle), 1e-12);
  // z = -10, same oracle.
  EXPECT_LT(rel_err(log_ei(10.0, 1.0, 0.0), -55.55312203612235592718335), 1e-12);
}

TEST(LogEi, MonotoneThroughUnderflow) {
  double prev = INFINITY;
  for (double mean : linspace(0.0, 200.0, 2001)) {
    const double v = log_ei(mean, 1.0, 0.0);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(LogEi, GradientMatchesCentralDifferences) {
  Gen g(21);
  for (int t = 0; t < 2000; ++t) {
    const double sigma = g.log_uniform(0.05, 5.0);
    const double z = g.uniform(-30.0, 5.0);
    const double f_ref = g.uniform(-2.0, 2.0);
    const double mean = f_ref - z * sigma;
    const LogEiValue v = log_ei_with_grad(mean, sigma * sigma, f_ref);
    const double h = 1e-6 * std::max(1.0, std::abs(mean));
    const double dm = (log_ei(mean + h, sigma * sigma, f_ref) - log_ei(mean - h, sigma * sigma, f_ref)) / (2 * h);
    const double hs = 1e-6 * sigma;
    const double ds = (log_ei(mean, (sigma + hs) * (sigma + hs), f_ref) -
                       log_ei(mean, (sigma - hs) * (sigma - hs), f_ref)) /
                      (2 * hs);
    EXPECT_LE(std::abs(v.d_mean - dm), 1e-4 * std::max(std::abs(dm), 1e-3)) << "z=" << z;
    EXPECT_LE(std::abs(v.d_sigma - ds), 1e-4 * std::max(std::abs(ds), 1e-3)) << "z=" << z;
  }
}

TEST(Ucb, Examples) {
  EXPECT_EQ(ucb_min(1.5, 2.0, 0.0), -1.5);
  EXPECT_EQ(ucb_min(1.5, 0.0, 9.0), -1.5);
  EXPECT_DOUBLE_EQ(ucb_min(1.0, 4.0, 4.0), 3.0);
}

TEST(QImprovement, Examples) {
  Eigen::MatrixXd above = Eigen::MatrixXd::Constant(10, 3, 2.0);
  EXPECT_EQ(q_improvement(above, 1.0), 0.0);
  Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(7, 1, -0.5);
  EXPECT_DOUBLE_EQ(q_improvement(constant, 1.0), 1.5);
  Eigen::MatrixXd two(2, 2);
  two << 3.0, 0.0, 0.5, 4.0;  // row minima 0 and 0.5
  EXPECT_DOUBLE_EQ(q_improvement(two, 1.0), 0.75);
}

TEST(QImprovement, UnbiasedForEi) {
  Gen g(22);
  const int n = 100000;
  for (int t = 0; t < 10; ++t) {
    const double mean = g.uniform(-1.0, 1.0), sigma = g.log_uniform(0.2, 2.0), f_ref = g.uniform(-1.0, 1.0);
    Eigen::MatrixXd draws(n, 1);
    for (int i = 0; i < n; ++i) draws(i, 0) = mean + sigma * g.normal();
    const double est = q_improvement(draws, f_ref);
    const Eigen::ArrayXd imp = (f_ref - draws.col(0).array()).max(0.0);
    const double se = std::sqrt((imp - imp.mean()).square().sum() / (n - 1) / n);
    EXPECT_LE(std::abs(est - ei(mean, sigma * sigma, f_ref)), 4 * se + 1e-9);
  }
}
