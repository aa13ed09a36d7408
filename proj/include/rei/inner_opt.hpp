#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rei/box.hpp"
#include "rei/gp.hpp"
#include "rei/lbfgsb.hpp"

namespace rei {

struct MultiStartConfig {
  std::size_t n_raw = 512;
  std::size_t n_restarts = 10;
  LbfgsOptions local{100, 10, 1e-9, 1e-12};
};

struct Optimum {
  Point x;
  double value = 0.0;
};

/// Evaluates n_raw scrambled Sobol candidates in `bounds`, then runs bounded
/// L-BFGS from the best n_restarts of them and returns the best point found.
/// The result is never worse than the best raw candidate; ties go to the
/// lexicographically smallest point.
Optimum maximize_smooth(const SmoothObjective& objective, const Box& bounds, const MultiStartConfig& cfg,
                        std::uint64_t seed);

/// 2000 candidates up to D = 50, 5000 from D = 200, linear in between.
std::size_t default_ts_candidates(std::size_t dim);

/// TS candidate set (rows): copies of the center in which each coordinate is
/// replaced, with probability min(20/D, 1), by the matching coordinate of a
/// scrambled Sobol point in tr_bounds. Every candidate has at least one
/// replaced coordinate.
Eigen::MatrixXd ts_candidates(const Box& tr_bounds, const Point& center, std::size_t n_candidates,
                              std::uint64_t seed);

/// Draws one joint posterior sample over ts_candidates(...) and returns the
/// candidate at which it is smallest.
Point ts_candidate_argmin(const GpModel& model, const Box& tr_bounds, const Point& center,
                          std::size_t n_candidates, std::uint64_t seed);

/// Batch version: `batch` joint draws over one candidate set, each picking
/// its minimizer among candidates not already chosen.
std::vector<Point> ts_select_batch(const GpModel& model, const Box& tr_bounds, const Point& center,
                                   std::size_t n_candidates, std::size_t batch, std::uint64_t seed);

}  // namespace rei
