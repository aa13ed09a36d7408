#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rei {

using Point = Eigen::VectorXd;

/// Raw box bounds of a problem. Optimization always happens in [0,1]^D;
/// to_raw/to_unit are the affine maps between the two.
class DesignSpace {
 public:
  DesignSpace(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static DesignSpace uniform(std::size_t dim, double lower, double upper);

  std::size_t dim() const { return static_cast<std::size_t>(lower_.size()); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

  Point to_raw(const Point& unit) const;
  Point to_unit(const Point& raw) const;

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

/// Evaluated samples: points in [0,1]^D with raw objective values.
struct Dataset {
  std::vector<Point> points;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  std::size_t dim() const { return points.empty() ? 0 : static_cast<std::size_t>(points.front().size()); }

  void add(const Point& x, double f);
  void append(const Dataset& other);
  /// Lowest index achieving the minimum value. Precondition: non-empty.
  std::size_t best_index() const;
  double best_value() const;
  /// Points as rows of an n x D matrix.
  Eigen::MatrixXd points_matrix() const;
  Dataset subset(const std::vector<std::size_t>& indices) const;
};

struct Standardized {
  std::vector<double> values;
  double mean = 0.0;
  double stddev = 1.0;
};

/// Zero-mean, unit-variance transform with the population (1/n) convention.
/// When the spread is zero (all values equal) the stddev falls back to 1.
Standardized standardize(const std::vector<double>& values);
double unstandardize(double z, double mean, double stddev);

/// Largest dimension sobol_points supports.
std::size_t sobol_max_dim();

/// First `count` points of the Sobol sequence in `dim` dimensions (rows of the
/// returned matrix), Owen-scrambled with a hash keyed by `seed`. The unscrambled
/// origin is point 0, so power-of-two prefixes keep their stratification.
Eigen::MatrixXd sobol_points(std::size_t count, std::size_t dim, std::uint64_t seed);

/// Deterministic objective on [0,1]^D, evaluated through the raw-space map.
struct ObjectiveFn {
  std::string name;
  DesignSpace space;
  std::function<double(const Point& raw)> raw_fn;
  std::optional<double> known_optimum;

  std::size_t dim() const { return space.dim(); }
  double operator()(const Point& unit) const { return raw_fn(space.to_raw(unit)); }
};

/// Names accepted by benchmark_suite.
const std::vector<std::string>& benchmark_names();

/// Synthetic benchmarks with fixed raw bounds:
///   ackley           [-32.768, 32.768]^D, min 0 at origin
///   rastrigin        [-5.12, 5.12]^D,     min 0 at origin
///   rosenbrock       [-5, 10]^D (D >= 2), min 0 at (1,...,1)
///   levy             [-10, 10]^D,         min 0 at (1,...,1)
///   styblinski_tang  [-5, 5]^D,           min -39.16616570377142 D
///   sharp_broad_1d   [0, 1] (D = 1), narrow deep valley at 0.15, broad
///                    shallower valley at 0.70
/// Throws ConfigError on an unknown name or unsupported dimension.
ObjectiveFn benchmark_suite(const std::string& name, std::size_t dim);

}  // namespace rei
