#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace rei {

/// Axis-aligned box [lower, upper].
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static Box unit(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)};
  }

  std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
  Eigen::VectorXd width() const { return upper - lower; }

  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const {
    return ((x.array() >= lower.array() - tol) && (x.array() <= upper.array() + tol)).all();
  }
  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

  /// Maps points from [0,1]^D (rows) affinely into the box.
  Eigen::MatrixXd map_unit(const Eigen::MatrixXd& unit_rows) const {
    return (unit_rows.array().rowwise() * width().transpose().array()).rowwise() + lower.transpose().array();
  }
};

}  // namespace rei
