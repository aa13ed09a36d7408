#include <gtest/gtest.h>

#include <cmath>

#include "rei/acquisition.hpp"
#include "rei/regional.hpp"
#include "test_util.hpp"

using namespace rei;
using testgen::Gen;

namespace {

RegionGeometry geom(std::initializer_list<double> c, std::initializer_list<double> l) {
  RegionGeometry g;
  g.center = Eigen::VectorXd(static_cast<Eigen::Index>(c.size()));
  g.lengths = Eigen::VectorXd(static_cast<Eigen::Index>(l.size()));
  Eigen::Index i = 0;
  for (double v : c) g.center[i++] = v;
  i = 0;
  for (double v : l) g.lengths[i++] = v;
  return g;
}

GpModel six_point_model() {
  Eigen::MatrixXd x(6, 1);
  x << 0.05, 0.2, 0.35, 0.5, 0.8, 0.95;
  Eigen::VectorXd y(6);
  y << 0.4, -0.8, 0.1, 0.9, -0.3, 0.6;
  return GpModel(x, y, GpHyperparams{Eigen::VectorXd::Constant(1, 0.15), 1.0, 1e-4});
}

// Trapezoid rule on a uniform grid of n points over [a, b].
template <typename F>
double trapezoid_mean(F f, double a, double b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    s += w * f(a + (b - a) * i / (n - 1));
  }
  return s / (n - 1);
}

double ei_at(const GpModel& m, double x, double f_ref) {
  const Posterior p = m.posterior(Eigen::MatrixXd::Constant(1, 1, x));
  return ei(p.mean[0], p.variance[0], f_ref);
}

}  // namespace

TEST(RegionBounds, Examples) {
  const Box a = region_bounds(geom({0.5, 0.5}, {0.8, 0.8}));
  EXPECT_NEAR(a.lower[0], 0.1, 1e-15);
  EXPECT_NEAR(a.upper[1], 0.9, 1e-15);
  const Box b = region_bounds(geom({0.0}, {0.8}));
  EXPECT_EQ(b.lower[0], 0.0);
  EXPECT_NEAR(b.upper[0], 0.4, 1e-15);
  const Box c = region_bounds(geom({1.0}, {2.0}));
  EXPECT_EQ(c.lower[0], 0.0);
  EXPECT_EQ(c.upper[0], 1.0);
}

TEST(RegionBounds, WidthsPositiveAndAtMostLength) {
  Gen g(30);
  for (int t = 0; t < 500; ++t) {
    RegionGeometry r{g.point(3), Eigen::Vector3d(g.log_uniform(1e-6, 2.0), g.log_uniform(1e-6, 2.0), 0.5)};
    const Box b = region_bounds(r);
    EXPECT_TRUE((b.width().array() > 0.0).all());
    EXPECT_TRUE((b.width().array() <= r.lengths.array() + 1e-15).all());
    EXPECT_TRUE(b.contains(r.center));
  }
}

TEST(Rei, DegenerateRegionIsEiAtCenter) {
  const GpModel m = six_point_model();
  const double f_ref = m.best_target();
  const double v = rei::rei(m, geom({0.6}, {1e-12}), f_ref, 128, 3);
  EXPECT_NEAR(v, ei_at(m, 0.6, f_ref), 1e-9);
}

TEST(Rei, FlatPosteriorFarFromData) {
  const GpModel m(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 0.5),
                  GpHyperparams{Eigen::VectorXd::Constant(1, 0.01), 1.0, 1e-6});
  const double c = ei(0.0, 1.0, 0.5);
  EXPECT_NEAR(rei::rei(m, geom({0.7}, {0.4}), 0.5, 64, 1), c, 1e-6);
  EXPECT_NEAR(log_rei(m, geom({0.7}, {0.4}), 0.5, 64, 1), std::log(c), 1e-8);
  EXPECT_NEAR(rucb(m, geom({0.7}, {0.4}), 0.0, 64, 1), 0.0, 1e-6);
}

TEST(Rei, MatchesTrapezoidOracle1d) {
  const GpModel m = six_point_model();
  const double f_ref = m.best_target();
  for (double c : {0.15, 0.5, 0.75}) {
    const RegionGeometry g = geom({c}, {0.3});
    const Box b = region_bounds(g);
    const double oracle = trapezoid_mean([&](double x) { return ei_at(m, x, f_ref); }, b.lower[0], b.upper[0], 10000);
    EXPECT_NEAR(rei::rei(m, g, f_ref, 2048, 7), oracle, 0.01 * oracle) << "center " << c;
  }
}

TEST(Rei, FullCubeEqualsGlobalAverage) {
  const GpModel m = six_point_model();
  const double f_ref = m.best_target();
  const double oracle = trapezoid_mean([&](double x) { return ei_at(m, x, f_ref); }, 0.0, 1.0, 20000);
  EXPECT_NEAR(rei::rei(m, geom({0.5}, {1.0}), f_ref, 4096, 2), oracle, 0.01 * oracle);
}

TEST(Rei, ConvergenceRateAtLeastHalfOrder) {
  const GpModel m = six_point_model();
  const double f_ref = m.best_target();
  const RegionGeometry g = geom({0.5}, {0.6});
  const Box b = region_bounds(g);
  const double oracle = trapezoid_mean([&](double x) { return ei_at(m, x, f_ref); }, b.lower[0], b.upper[0], 20000);
  auto rms = [&](std::size_t n_x) {
    double s = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) s += std::pow(rei::rei(m, g, f_ref, n_x, seed) - oracle, 2);
    return std::sqrt(s / 30);
  };
  const double coarse = rms(32), fine = rms(512);
  // N^{-1/2} would shrink the error by 4 over a 16x increase.
  EXPECT_LE(fine, coarse / 4.0);
}

TEST(LogRei, MatchesLogOfRei) {
  Gen g(31);
  for (int t = 0; t < 20; ++t) {
    const GpModel m = g.model(10, 2);
    const double f_ref = m.best_target();
    const RegionGeometry r{g.point(2), Eigen::Vector2d(g.uniform(0.05, 1.0), g.uniform(0.05, 1.0))};
    const double a = rei::rei(m, r, f_ref, 128, 5);
    if (a > 1e-200) EXPECT_NEAR(log_rei(m, r, f_ref, 128, 5), std::log(a), 1e-8);
  }
}

TEST(LogRei, DegenerateRegionIsLogEiAtCenter) {
  const GpModel m = six_point_model();
  const double f_ref = m.best_target();
  const Posterior p = m.posterior(Eigen::MatrixXd::Constant(1, 1, 0.42));
  EXPECT_NEAR(log_rei(m, geom({0.42}, {1e-12}), f_ref, 64, 1), log_ei(p.mean[0], p.variance[0], f_ref), 1e-8);
}

TEST(LogRei, FiniteWhereReiUnderflows) {
  const GpModel m = six_point_model();
  const double v = log_rei(m, geom({0.5}, {0.2}), m.best_target() - 60.0, 64, 1);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(rei::rei(m, geom({0.5}, {0.2}), m.best_target() - 60.0, 64, 1), 0.0);
}

TEST(Rucb, DegenerateAndTrapezoid) {
  const GpModel m = six_point_model();
  const Posterior p = m.posterior(Eigen::MatrixXd::Constant(1, 1, 0.3));
  EXPECT_NEAR(rucb(m, geom({0.3}, {1e-12}), 4.0, 64, 2), ucb_min(p.mean[0], p.variance[0], 4.0), 1e-9);
  const RegionGeometry g = geom({0.6}, {0.3});
  const Box b = region_bounds(g);
  auto ucb_at = [&](double x) {
    const Posterior q = m.posterior(Eigen::MatrixXd::Constant(1, 1, x));
    return ucb_min(q.mean[0], q.variance[0], 4.0);
  };
  const double oracle = trapezoid_mean(ucb_at, b.lower[0], b.upper[0], 10000);
  EXPECT_NEAR(rucb(m, g, 4.0, 2048, 3), oracle, 0.01 * std::abs(oracle));
}

TEST(Qrei, DegenerateRegionMatchesEi) {
  Gen g(32);
  RegionalAcqSpec spec;
  spec.n_x = 1;
  spec.n_f = 100000;
  for (int t = 0; t < 5; ++t) {
    const GpModel m = g.model(8, 2);
    const double f_ref = m.best_target();
    const Eigen::VectorXd c = g.point(2);
    spec.base_sample_seed = static_cast<std::uint64_t>(t);
    const double est = qrei(m, {RegionGeometry{c, Eigen::Vector2d(1e-12, 1e-12)}}, f_ref, spec);
    const Posterior p = m.posterior(c.transpose());
    const double sigma = std::sqrt(p.variance[0]);
    // Standard error of the improvement under the exact normal law.
    const double e = ei(p.mean[0], p.variance[0], f_ref);
    const double z = (f_ref - p.mean[0]) / sigma;
    const double second = ((f_ref - p.mean[0]) * (f_ref - p.mean[0]) + p.variance[0]) * normal_cdf(z) +
                          (f_ref - p.mean[0]) * sigma * normal_pdf(z);
    const double se = std::sqrt((second - e * e) / spec.n_f);
    EXPECT_LE(std::abs(est - e), 4 * se + 1e-12);
  }
}

TEST(Qrei, NoImprovementMass) {
  const GpModel m = six_point_model();
  RegionalAcqSpec spec;
  spec.n_x = 64;
  spec.n_f = 256;
  // Posterior sd is at most 1, so an incumbent 20 below every mean is >= 10 sigma away.
  const Posterior p = m.posterior(Eigen::VectorXd::LinSpaced(200, 0, 1));
  const double f_ref = p.mean.minCoeff() - 20.0;
  EXPECT_LT(qrei(m, {geom({0.5}, {0.8})}, f_ref, spec), 1e-6);
}

TEST(Qrei, NonNegativeAndDeterministic) {
  Gen g(33);
  RegionalAcqSpec spec;
  spec.n_x = 32;
  spec.n_f = 64;
  for (int t = 0; t < 20; ++t) {
    const GpModel m = g.model(10, 3);
    spec.q = static_cast<std::size_t>(g.integer(1, 3));
    spec.base_sample_seed = static_cast<std::uint64_t>(t);
    std::vector<RegionGeometry> regions;
    for (std::size_t i = 0; i < spec.q; ++i) regions.push_back({g.point(3), Eigen::Vector3d::Constant(0.3)});
    const double a = qrei(m, regions, m.best_target(), spec), b = qrei(m, regions, m.best_target(), spec);
    EXPECT_GE(a, 0.0);
    EXPECT_EQ(a, b);
    EXPECT_GE(rei::rei(m, regions[0], m.best_target(), 32, 1), 0.0);
  }
}

TEST(RegionalAcquisition, CommonRandomNumbersAcrossCenters) {
  const GpModel m = six_point_model();
  RegionalAcqSpec spec;
  spec.n_x = 16;
  spec.n_f = 32;
  spec.base_sample_seed = 4;
  const RegionalAcquisition acq(m, spec, m.best_target());
  // Same unit points mapped into different regions.
  const Eigen::MatrixXd a = acq.region_points(geom({0.3}, {0.2})), b = acq.region_points(geom({0.6}, {0.2}));
  EXPECT_LT(((b.array() - a.array()) - 0.3).abs().maxCoeff(), 1e-12);
  EXPECT_EQ(acq({geom({0.3}, {0.2})}), acq({geom({0.3}, {0.2})}));
}

TEST(RegionalAcquisition, ParseBase) {
  EXPECT_EQ(parse_regional_base("qei"), RegionalBase::kQImprovement);
  EXPECT_EQ(to_string(parse_regional_base(to_string(RegionalBase::kUcb))), to_string(RegionalBase::kUcb));
}
