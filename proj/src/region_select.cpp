#include "rei/region_select.hpp"

#include <cmath>
#include <iostream>

#include "rei/acquisition.hpp"
#include "rei/error.hpp"
#include "rei/inner_opt.hpp"
#include "rei/random.hpp"
#include "rei/subset.hpp"

namespace rei {

Eigen::VectorXd per_dim_lengths(double l, const Eigen::VectorXd& lengthscales, double l_max) {
  const double log_geomean = lengthscales.array().log().mean();
  Eigen::VectorXd out = (l * (lengthscales.array().log() - log_geomean).exp()).matrix();
  return out.cwiseMin(l_max);
}

Eigen::VectorXd selection_lengths(const GpModel& model, const TurboConfig& cfg) {
  if (!cfg.shaped_selection_lengths)
    return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(model.dim()), cfg.l_init);
  return per_dim_lengths(cfg.l_init, model.hyperparams().lengthscales, cfg.l_max);
}

namespace {

RegionalBase regional_base(SelectionAcquisition a) {
  switch (a) {
    case SelectionAcquisition::kQrei: return RegionalBase::kQImprovement;
    case SelectionAcquisition::kRei: return RegionalBase::kEi;
    case SelectionAcquisition::kLogRei: return RegionalBase::kLogEi;
    case SelectionAcquisition::kRucb: return RegionalBase::kUcb;
    case SelectionAcquisition::kLogEi: break;
  }
  throw ConfigError("pointwise LogEI is not a regional acquisition");
}

std::vector<Point> split_centers(const Eigen::VectorXd& x, std::size_t q, std::size_t dim) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < q; ++i)
    out.push_back(x.segment(static_cast<Eigen::Index>(i * dim), static_cast<Eigen::Index>(dim)));
  return out;
}

}  // namespace

std::vector<Point> choose_centers(const GpModel& model, const Eigen::VectorXd& lengths, std::size_t q,
                                  const TurboConfig& cfg, std::uint64_t seed) {
  const std::size_t dim = model.dim();
  const double f_ref = model.best_target();
  if (q == 0) throw ConfigError("choose_centers requires q >= 1");

  if (cfg.selection_acquisition == SelectionAcquisition::kLogEi) {
    if (q != 1) throw ConfigError("pointwise LogEI selection scores one region at a time");
    SmoothObjective obj = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
      const PosteriorGradient pg = model.posterior_with_gradient(x);
      const LogEiValue v = log_ei_with_grad(pg.mean, pg.variance, f_ref);
      if (grad) {
        const double sigma = std::sqrt(pg.variance);
        *grad = v.d_mean * pg.d_mean;
        if (sigma > 0.0) *grad += v.d_sigma * pg.d_variance / (2.0 * sigma);
      }
      return v.value;
    };
    return {maximize_smooth(obj, Box::unit(dim), cfg.selection_inner, mix_seed(seed, 3)).x};
  }

  RegionalAcqSpec spec = cfg.regional;
  spec.base = regional_base(cfg.selection_acquisition);
  spec.q = q;
  spec.base_sample_seed = mix_seed(seed, 4);
  if (q > 1 && spec.base != RegionalBase::kQImprovement)
    throw ConfigError("joint selection of several regions requires qREI");
  const RegionalAcquisition acq(model, spec, f_ref);

  const Box box = Box::unit(q * dim);
  auto value = [&](const Eigen::VectorXd& x) {
    std::vector<RegionGeometry> geoms;
    for (auto& c : split_centers(x, q, dim)) geoms.push_back({std::move(c), lengths});
    return acq(geoms);
  };
  const Optimum best =
      maximize_smooth(with_finite_difference_gradient(value, box, cfg.fd_step), box, cfg.selection_inner,
                      mix_seed(seed, 3));
  return split_centers(best.x, q, dim);
}

std::vector<SelectionResult> select_trust_regions(const Dataset& global_data, const Evaluator& evaluate,
                                                  const TurboConfig& cfg, std::size_t dim, std::size_t q,
                                                  std::size_t max_evals, std::uint64_t seed) {
  std::vector<SelectionResult> out;
  std::size_t evals = 0;
  auto eval_into = [&](Dataset& ds, const Point& x, std::size_t slot, bool is_center) {
    ds.add(x, evaluate(x, slot, is_center));
    ++evals;
  };

  if (global_data.empty()) {
    SelectionResult res;
    const Eigen::MatrixXd design = sobol_points(cfg.n_init, dim, mix_seed(seed, 5));
    for (Eigen::Index i = 0; i < design.rows() && evals < max_evals; ++i) eval_into(res.initial_samples, design.row(i).transpose(), 0, false);
    if (!res.initial_samples.empty()) res.center = res.initial_samples.points[res.initial_samples.best_index()];
    res.lengths = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), cfg.l_init);
    out.push_back(std::move(res));
    return out;
  }

  if (global_data.dim() != dim) throw ConfigError("select_trust_regions: data dimension mismatch");
  std::vector<Point> centers;
  Eigen::VectorXd lengths = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), cfg.l_init);
  bool fell_back = false;
  try {
    Dataset train = global_data;
    if (cfg.n_gp > 0 && global_data.size() > cfg.n_gp) train = global_data.subset(select_representatives(global_data, cfg.n_gp));
    FitConfig fit = cfg.fit;
    fit.seed = mix_seed(seed, 6);
    fit.warm_start.reset();
    const GpModel model = fit_map(train, fit);
    lengths = selection_lengths(model, cfg);
    centers = choose_centers(model, lengths, q, cfg, seed);
  } catch (const ModelFitError& e) {
    std::cerr << "warning: region selection fell back to random centers (" << e.what() << ")\n";
    fell_back = true;
    const Eigen::MatrixXd rnd = sobol_points(q, dim, mix_seed(seed, 7));
    centers.clear();
    for (Eigen::Index i = 0; i < rnd.rows(); ++i) centers.push_back(rnd.row(i).transpose());
  }

  for (std::size_t i = 0; i < q; ++i) {
    SelectionResult res;
    res.center = centers[i];
    res.lengths = lengths;
    res.fell_back = fell_back;
    const Box bounds = region_bounds({centers[i], lengths});
    if (evals < max_evals) eval_into(res.initial_samples, centers[i], i, true);
    if (cfg.n_init > 1) {
      const Eigen::MatrixXd pts = bounds.map_unit(sobol_points(cfg.n_init - 1, dim, mix_seed(seed, 8 + i)));
      for (Eigen::Index j = 0; j < pts.rows() && evals < max_evals; ++j) eval_into(res.initial_samples, pts.row(j).transpose(), i, false);
    }
    out.push_back(std::move(res));
  }
  return out;
}

SelectionResult select_trust_region(const Dataset& global_data, const Evaluator& evaluate,
                                    const TurboConfig& cfg, std::size_t dim, std::size_t max_evals,
                                    std::uint64_t seed) {
  return select_trust_regions(global_data, evaluate, cfg, dim, 1, max_evals, seed).front();
}

}  // namespace rei
