#include "rei/inner_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rei/error.hpp"
#include "rei/parallel.hpp"
#include "rei/random.hpp"

namespace rei {

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Strictly better value, or equal value at a lexicographically smaller point.
bool better(double va, const Eigen::VectorXd& a, double vb, const Eigen::VectorXd& b) {
  if (va != vb) return va > vb;
  return lex_less(a, b);
}

double finite_or_lowest(double v) { return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v; }

}  // namespace

Optimum maximize_smooth(const SmoothObjective& objective, const Box& bounds, const MultiStartConfig& cfg,
                        std::uint64_t seed) {
  if (cfg.n_raw == 0 || cfg.n_restarts > cfg.n_raw)
    throw ConfigError("maximize_smooth requires 1 <= n_raw and n_restarts <= n_raw");
  const Eigen::MatrixXd raw = bounds.map_unit(sobol_points(cfg.n_raw, bounds.dim(), seed));
  std::vector<double> raw_values(cfg.n_raw);
  parallel_for(cfg.n_raw, [&](std::size_t i) {
    raw_values[i] = finite_or_lowest(objective(bounds.clamp(raw.row(static_cast<Eigen::Index>(i)).transpose()), nullptr));
  });

  std::vector<std::size_t> order(cfg.n_raw);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return better(raw_values[a], raw.row(static_cast<Eigen::Index>(a)).transpose(), raw_values[b],
                  raw.row(static_cast<Eigen::Index>(b)).transpose());
  });

  Optimum best{bounds.clamp(raw.row(static_cast<Eigen::Index>(order.front())).transpose()), raw_values[order.front()]};

  std::vector<Optimum> local(cfg.n_restarts);
  parallel_for(cfg.n_restarts, [&](std::size_t r) {
    const Eigen::VectorXd x0 = raw.row(static_cast<Eigen::Index>(order[r])).transpose();
    if (!std::isfinite(raw_values[order[r]])) {
      local[r] = {bounds.clamp(x0), raw_values[order[r]]};
      return;
    }
    LbfgsResult res = maximize_bounded(objective, bounds, x0, cfg.local);
    local[r] = {res.x, finite_or_lowest(res.value)};
  });
  for (const auto& cand : local)
    if (better(cand.value, cand.x, best.value, best.x)) best = cand;
  return best;
}

std::size_t default_ts_candidates(std::size_t dim) {
  if (dim <= 50) return 2000;
  if (dim >= 200) return 5000;
  return 2000 + (dim - 50) * 3000 / 150;
}

Eigen::MatrixXd ts_candidates(const Box& tr_bounds, const Point& center, std::size_t n_candidates,
                              std::uint64_t seed) {
  if (n_candidates == 0) throw ConfigError("ts_candidates requires at least one candidate");
  const std::size_t dim = tr_bounds.dim();
  const Eigen::MatrixXd pert = tr_bounds.map_unit(sobol_points(n_candidates, dim, mix_seed(seed, 11)));
  const double prob = std::min(20.0 / static_cast<double>(dim), 1.0);
  Rng rng(mix_seed(seed, 12));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
  Eigen::MatrixXd cands = center.transpose().replicate(static_cast<Eigen::Index>(n_candidates), 1);
  for (Eigen::Index i = 0; i < cands.rows(); ++i) {
    bool any = false;
    for (Eigen::Index d = 0; d < static_cast<Eigen::Index>(dim); ++d) {
      if (unif(rng) < prob) {
        cands(i, d) = pert(i, d);
        any = true;
      }
    }
    if (!any) {
      const auto d = static_cast<Eigen::Index>(pick(rng));
      cands(i, d) = pert(i, d);
    }
  }
  return cands;
}

std::vector<Point> ts_select_batch(const GpModel& model, const Box& tr_bounds, const Point& center,
                                   std::size_t n_candidates, std::size_t batch, std::uint64_t seed) {
  if (batch == 0 || batch > n_candidates) throw ConfigError("TS batch must be in [1, n_candidates]");
  const Eigen::MatrixXd cands = ts_candidates(tr_bounds, center, n_candidates, seed);
  const Eigen::MatrixXd draws = sample_posterior(model, cands, batch, mix_seed(seed, 13));
  std::vector<bool> taken(n_candidates, false);
  std::vector<Point> out;
  for (Eigen::Index k = 0; k < draws.rows(); ++k) {
    std::size_t arg = n_candidates;
    for (std::size_t i = 0; i < n_candidates; ++i) {
      if (taken[i]) continue;
      if (arg == n_candidates || draws(k, static_cast<Eigen::Index>(i)) < draws(k, static_cast<Eigen::Index>(arg))) arg = i;
    }
    taken[arg] = true;
    out.push_back(cands.row(static_cast<Eigen::Index>(arg)).transpose());
  }
  return out;
}

Point ts_candidate_argmin(const GpModel& model, const Box& tr_bounds, const Point& center,
                          std::size_t n_candidates, std::uint64_t seed) {
  return ts_select_batch(model, tr_bounds, center, n_candidates, 1, seed).front();
}

}  // namespace rei
