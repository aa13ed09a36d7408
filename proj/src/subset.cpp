#include "rei/subset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rei/error.hpp"

namespace rei {

RegretScores log_regret(const std::vector<double>& values) {
  if (values.size() < 2) throw DegenerateInputError("log_regret needs at least two values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double f_min = *lo, f_max = *hi;
  if (!(f_max > f_min)) throw DegenerateInputError("log_regret: all values are equal");
  RegretScores out;
  out.normalized.reserve(values.size());
  double pos_min = std::numeric_limits<double>::infinity();
  for (double f : values) {
    const double v = (f - f_min) / (f_max - f_min);
    out.normalized.push_back(v);
    if (v > 0.0) pos_min = std::min(pos_min, v);
  }
  out.normalized_min_positive = pos_min;
  const double denom = std::log(1.0 + pos_min) - std::log(pos_min);
  out.regret.reserve(values.size());
  for (double v : out.normalized) out.regret.push_back((std::log(v + pos_min) - std::log(pos_min)) / denom);
  return out;
}

std::vector<std::size_t> select_representatives(const Dataset& data, std::size_t n_gp) {
  const std::size_t n = data.size();
  std::vector<std::size_t> chosen;
  if (n == 0 || n_gp == 0) return chosen;
  if (n <= n_gp) {
    chosen.resize(n);
    std::iota(chosen.begin(), chosen.end(), 0);
    return chosen;
  }
  std::vector<double> r(n, 0.0);
  try {
    r = log_regret(data.values).regret;
  } catch (const DegenerateInputError&) {
    // all values equal: select on the design variables alone
  }
  const Eigen::Index d = static_cast<Eigen::Index>(data.dim());
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n), d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    z.row(static_cast<Eigen::Index>(i)).head(d) = data.points[i].transpose();
    z(static_cast<Eigen::Index>(i), d) = r[i];
  }

  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<bool> taken(n, false);
  std::size_t pick = data.best_index();
  for (std::size_t k = 0; k < n_gp; ++k) {
    chosen.push_back(pick);
    taken[pick] = true;
    const auto zp = z.row(static_cast<Eigen::Index>(pick));
    std::size_t next = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      nearest[i] = std::min(nearest[i], (z.row(static_cast<Eigen::Index>(i)) - zp).squaredNorm());
      if (next == n || nearest[i] > nearest[next]) next = i;
    }
    pick = next;
  }
  return chosen;
}

}  // namespace rei
