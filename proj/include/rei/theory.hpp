#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rei::theory {

/// Scalar field on R^D; must already be extended beyond the unit cube.
using ScalarField = std::function<double(const Eigen::VectorXd&)>;

/// Monte Carlo estimate of the average of f over x + prod[-l_i/2, l_i/2].
double region_average_mc(const ScalarField& f, const Eigen::VectorXd& x, const Eigen::VectorXd& lengths,
                         std::size_t n_mc, std::uint64_t seed);

/// Fourier transform of the normalized box indicator: prod sinc(omega_i l_i / 2).
double indicator_fourier_factor(const Eigen::VectorXd& omega, const Eigen::VectorXd& lengths);

enum class GridKernel { kMatern52, kSquaredExponential };

/// Periodic function on M = 2^k points of [0, 1): f = K alpha, a finite sum of
/// kernel translates centered on the grid nodes.
struct GridFunction1D {
  Eigen::VectorXd alpha;
  GridKernel kernel = GridKernel::kMatern52;
  double lengthscale = 0.05;

  std::size_t size() const { return static_cast<std::size_t>(alpha.size()); }
  double spacing() const { return 1.0 / static_cast<double>(alpha.size()); }
  /// First row of the periodized kernel matrix.
  Eigen::VectorXd kernel_row() const;
  /// Real DFT of kernel_row; throws std::domain_error if any weight is not positive.
  Eigen::VectorXd spectral_weights() const;
  /// Grid values K alpha.
  Eigen::VectorXd values() const;
};

/// Odd cell count of the discrete indicator for region length l on an M grid.
std::size_t indicator_width(double length, std::size_t m);

/// |DFT| of the normalized discrete indicator at integer frequency k.
double discrete_indicator_factor(long k, std::size_t width, std::size_t m);

struct NormReduction {
  double norm_f = 0.0;
  double norm_sf = 0.0;
  bool passed = false;
};

/// Computes ||f|| from alpha^T K alpha, forms Sf by circular convolution with
/// the normalized indicator, and evaluates ||Sf|| spectrally.
NormReduction discrete_norm_reduction_check(const GridFunction1D& f, double length);

struct SelfTestItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Seeded battery of the checks above, used by the CLI self-test.
std::vector<SelfTestItem> run_selftest(std::uint64_t seed);

}  // namespace rei::theory
