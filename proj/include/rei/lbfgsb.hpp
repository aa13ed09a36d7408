#pragma once

#include <functional>

#include <Eigen/Core>

#include "rei/box.hpp"

namespace rei {

/// f(x), optionally writing the gradient into *grad (may be null).
using SmoothObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct LbfgsOptions {
  int max_iters = 100;
  int memory = 10;
  double pg_tol = 1e-9;   // sup-norm of the projected gradient
  double f_rel_tol = 1e-12;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Projected limited-memory BFGS on a box: two-loop recursion restricted to
/// the free variables, projected backtracking Armijo line search. Non-finite
/// objective values are treated as infeasible and backtracked away from.
LbfgsResult minimize_bounded(const SmoothObjective& f, const Box& box, const Eigen::VectorXd& x0,
                             const LbfgsOptions& opts = {});

LbfgsResult maximize_bounded(const SmoothObjective& f, const Box& box, const Eigen::VectorXd& x0,
                             const LbfgsOptions& opts = {});

/// Wraps a value-only objective with a central-difference gradient of the
/// given step; the stencil is shifted one-sided at the box faces.
SmoothObjective with_finite_difference_gradient(std::function<double(const Eigen::VectorXd&)> f,
                                                const Box& box, double step = 1e-4);

}  // namespace rei
