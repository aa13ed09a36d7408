#pragma once

#include <cstddef>
#include <vector>

#include "rei/problem.hpp"

namespace rei {

struct RegretScores {
  std::vector<double> regret;      // r_i in [0, 1]
  std::vector<double> normalized;  // (f_i - f_min) / (f_max - f_min)
  double normalized_min_positive = 0.0;
};

/// r_i = (log(fbar_i + fbar_min) - log fbar_min) / (log(1 + fbar_min) - log fbar_min),
/// with fbar_min the smallest strictly positive normalized value.
/// Throws DegenerateInputError when fewer than two values or all are equal.
RegretScores log_regret(const std::vector<double>& values);

/// Greedy max-min selection of min(n_gp, |data|) samples in the space of
/// (x, r). Starts from the lowest-index minimizer of the objective; each
/// subsequent pick maximizes the Euclidean distance to the nearest selected
/// sample, ties to the lowest index.
std::vector<std::size_t> select_representatives(const Dataset& data, std::size_t n_gp);

}  // namespace rei
