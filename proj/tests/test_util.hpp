#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rei/gp.hpp"
#include "rei/problem.hpp"

namespace rei::testgen {

// Hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Eigen::VectorXd point(std::size_t dim) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(dim));
    for (auto& v : x) v = uniform();
    return x;
  }
  Eigen::MatrixXd points(std::size_t n, std::size_t dim) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < x.rows(); ++i) x.row(i) = point(dim).transpose();
    return x;
  }
  Eigen::VectorXd normals(std::size_t n) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (auto& e : v) e = normal();
    return v;
  }
  GpHyperparams hyperparams(std::size_t dim) {
    GpHyperparams hp;
    hp.lengthscales.resize(static_cast<Eigen::Index>(dim));
    for (auto& l : hp.lengthscales) l = log_uniform(0.1, 1.0);
    hp.signal_variance = log_uniform(0.3, 3.0);
    hp.noise_variance = log_uniform(1e-6, 1e-2);
    return hp;
  }
  /// GP model on n random points with smooth random targets.
  GpModel model(std::size_t n, std::size_t dim) {
    const Eigen::MatrixXd x = points(n, dim);
    Eigen::VectorXd y(x.rows());
    const Eigen::VectorXd w = normals(dim);
    for (Eigen::Index i = 0; i < x.rows(); ++i) y[i] = std::sin(3.0 * x.row(i).dot(w)) + 0.3 * normal();
    return GpModel(x, y, hyperparams(dim));
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace rei::testgen
