#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rei/gp.hpp"
#include "rei/problem.hpp"
#include "rei/regional.hpp"
#include "rei/turbo_config.hpp"

namespace rei {

/// Evaluates the objective at a unit-cube point for region `slot`; is_center
/// marks the selected center. The caller records the evaluation.
using Evaluator = std::function<double(const Point& x, std::size_t slot, bool is_center)>;

struct SelectionResult {
  Point center;
  Eigen::VectorXd lengths;  // per-dimension lengths of the selected region
  Dataset initial_samples;  // center first, then the in-region design
  bool fell_back = false;   // the global model could not be fitted
};

/// Per-dimension side lengths l * s_d / geomean(s), each capped at l_max.
Eigen::VectorXd per_dim_lengths(double l, const Eigen::VectorXd& lengthscales, double l_max);

/// Region lengths used while scoring candidate centers against `model`.
Eigen::VectorXd selection_lengths(const GpModel& model, const TurboConfig& cfg);

/// Maximizes the configured selection acquisition over q centers in the unit
/// cube (a q*D dimensional search with common random numbers) and returns the
/// centers. q > 1 is only valid for qREI.
std::vector<Point> choose_centers(const GpModel& model, const Eigen::VectorXd& lengths, std::size_t q,
                                  const TurboConfig& cfg, std::uint64_t seed);

/// Joint region selection for q regions from the global data. Each region
/// gets its center plus n_init - 1 scrambled Sobol points inside its bounds,
/// all evaluated through `evaluate` region by region; `max_evals` caps the
/// total number of evaluations. With empty global data this is a plain random
/// initial design of n_init points over the cube (one region).
std::vector<SelectionResult> select_trust_regions(const Dataset& global_data, const Evaluator& evaluate,
                                                  const TurboConfig& cfg, std::size_t dim, std::size_t q,
                                                  std::size_t max_evals, std::uint64_t seed);

SelectionResult select_trust_region(const Dataset& global_data, const Evaluator& evaluate,
                                    const TurboConfig& cfg, std::size_t dim, std::size_t max_evals,
                                    std::uint64_t seed);

}  // namespace rei
