#include "rei/turbo.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <optional>

#include "rei/acquisition.hpp"
#include "rei/error.hpp"
#include "rei/inner_opt.hpp"
#include "rei/random.hpp"
#include "rei/region_select.hpp"
#include "rei/subset.hpp"

namespace rei {

void TurboConfig::validate(std::size_t dim) const {
  if (!(l_min > 0.0 && l_min < l_init && l_init <= l_max)) throw ConfigError("require 0 < l_min < l_init <= l_max");
  if (tau_succ < 1 || tau_fail < 0) throw ConfigError("tau_succ must be >= 1 and tau_fail >= 0");
  if (n_init < 1) throw ConfigError("n_init must be >= 1");
  if (budget < n_init) throw ConfigError("budget must be at least n_init");
  if (batch < 1) throw ConfigError("batch must be >= 1");
  if (batch > 1 && acquisition != LocalAcquisition::kTs) throw ConfigError("batch > 1 requires TS proposals");
  if (local_inner.n_restarts > local_inner.n_raw || selection_inner.n_restarts > selection_inner.n_raw)
    throw ConfigError("inner optimizer restarts exceed raw candidates");
  if (regional.n_x == 0 || regional.n_f == 0) throw ConfigError("n_x and n_f must be positive");
  if (dim == 0) throw ConfigError("problem dimension must be positive");
}

TrustRegion make_trust_region(Dataset local_data, const TurboConfig& cfg) {
  TrustRegion tr;
  tr.center = local_data.points.at(local_data.best_index());
  tr.length = cfg.l_init;
  tr.local_data = std::move(local_data);
  return tr;
}

TrustRegion update_trust_region(TrustRegion tr, const Point& new_point, double new_value, double prev_best,
                                const TurboConfig& cfg) {
  if (tr.status != RegionStatus::kActive) return tr;
  if (new_value < prev_best) {
    ++tr.success_count;
    tr.failure_count = 0;
    tr.center = new_point;
  } else {
    ++tr.failure_count;
    tr.success_count = 0;
  }
  const int tau_fail = cfg.effective_tau_fail(static_cast<std::size_t>(new_point.size()));
  if (tr.success_count >= cfg.tau_succ) {
    tr.length = std::min(2.0 * tr.length, cfg.l_max);
    tr.success_count = 0;
  } else if (tr.failure_count >= tau_fail) {
    tr.length /= 2.0;
    tr.failure_count = 0;
  }
  if (tr.length < cfg.l_min) tr.status = RegionStatus::kCollapsed;
  return tr;
}

std::string to_string(EventTag tag) {
  switch (tag) {
    case EventTag::kInit: return "init";
    case EventTag::kLocal: return "local";
    case EventTag::kRestartSelect: return "restart-select";
    case EventTag::kRestartInit: return "restart-init";
  }
  return "?";
}

EventTag parse_event_tag(const std::string& s) {
  if (s == "init") return EventTag::kInit;
  if (s == "local") return EventTag::kLocal;
  if (s == "restart-select") return EventTag::kRestartSelect;
  if (s == "restart-init") return EventTag::kRestartInit;
  throw ConfigError("unknown event tag '" + s + "'");
}

namespace {

class Runner {
 public:
  Runner(const ObjectiveFn& objective, const TurboConfig& cfg, std::size_t m, std::uint64_t seed)
      : objective_(objective), cfg_(cfg), m_(m), seed_(seed), dim_(objective.dim()),
        regions_(m), started_(m, false), warm_(m), restarts_(m, 0) {
    if (m_ == 0) throw ConfigError("number of trust regions must be positive");
    cfg_.validate(dim_);
    if (cfg_.global_model && m_ != 1) throw ConfigError("global-model mode uses a single region");
  }

  std::vector<RunRecord> run() {
    initialize();
    std::size_t r = 0;
    while (remaining() > 0) {
      if (!started_[r] || regions_[r].status == RegionStatus::kCollapsed)
        restart(r);
      else
        local_step(r);
      r = (r + 1) % m_;
    }
    return std::move(records_);
  }

 private:
  std::size_t remaining() const { return cfg_.budget - global_.size(); }

  double evaluate(const Point& x, std::size_t region, EventTag tag) {
    double v;
    try {
      v = objective_(x);
    } catch (const std::exception& e) {
      throw RunAborted(std::string("objective evaluation failed: ") + e.what(), records_);
    }
    if (!std::isfinite(v)) throw RunAborted("objective returned a non-finite value", records_);
    global_.add(x, v);
    best_ = std::min(best_, v);
    records_.push_back({seed_, global_.size(), x, v, best_, region, tag});
    return v;
  }

  Evaluator selection_evaluator(std::size_t region_offset) {
    return [this, region_offset](const Point& x, std::size_t slot, bool is_center) {
      return evaluate(x, region_offset + slot, is_center ? EventTag::kRestartSelect : EventTag::kRestartInit);
    };
  }

  void start_region(std::size_t r, Dataset local) {
    if (local.empty()) return;
    regions_[r] = make_trust_region(std::move(local), cfg_);
    started_[r] = true;
    warm_[r].reset();
  }

  Dataset random_design(std::size_t r, EventTag tag, std::uint64_t stream) {
    Dataset local;
    const Eigen::MatrixXd design = sobol_points(cfg_.n_init, dim_, stream);
    for (Eigen::Index i = 0; i < design.rows() && remaining() > 0; ++i) {
      const Point x = design.row(i).transpose();
      local.add(x, evaluate(x, r, tag));
    }
    return local;
  }

  void initialize() {
    if (cfg_.selection == SelectionMode::kQreiInitRestart && !cfg_.global_model) {
      // Random design over the cube first; it only seeds the global model.
      random_design(0, EventTag::kInit, mix_seed(seed_, 100));
      if (remaining() == 0) return;
      auto picks = select_trust_regions(global_, selection_evaluator(0), cfg_, dim_, m_, remaining(),
                                        mix_seed(seed_, 101));
      for (std::size_t i = 0; i < picks.size(); ++i) start_region(i, std::move(picks[i].initial_samples));
      return;
    }
    for (std::size_t r = 0; r < m_ && remaining() > 0; ++r)
      start_region(r, random_design(r, EventTag::kInit, mix_seed(seed_, 200 + r)));
  }

  void restart(std::size_t r) {
    const std::uint64_t stream = mix_seed(mix_seed(seed_, 300 + r), restarts_[r]++);
    if (cfg_.selection == SelectionMode::kRandom || cfg_.global_model) {
      start_region(r, random_design(r, EventTag::kRestartInit, stream));
      return;
    }
    auto pick = select_trust_region(global_, selection_evaluator(r), cfg_, dim_, remaining(), stream);
    start_region(r, std::move(pick.initial_samples));
  }

  void local_step(std::size_t r) {
    TrustRegion& tr = regions_[r];
    const std::uint64_t stream = mix_seed(mix_seed(seed_, 500 + r), global_.size());
    Dataset train = tr.local_data;
    if (cfg_.n_gp > 0 && train.size() > cfg_.n_gp) train = train.subset(select_representatives(train, cfg_.n_gp));

    std::optional<GpModel> model;
    try {
      FitConfig fit = cfg_.fit;
      fit.seed = mix_seed(stream, 1);
      fit.warm_start = warm_[r];
      if (warm_[r] && cfg_.refit_restarts > 0) fit.n_restarts = cfg_.refit_restarts;
      model.emplace(fit_map(train, fit));
      warm_[r] = model->hyperparams();
    } catch (const ModelFitError& e) {
      std::cerr << "warning: local GP fit failed, proposing a random point (" << e.what() << ")\n";
    }

    Eigen::VectorXd lengths;
    if (cfg_.global_model)
      lengths = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim_), 2.0);
    else if (model)
      lengths = per_dim_lengths(tr.length, model->hyperparams().lengthscales, cfg_.l_max);
    else
      lengths = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim_), tr.length);
    const Box bounds = region_bounds({tr.center, lengths});

    std::vector<Point> proposals;
    const std::size_t batch = std::min(cfg_.batch, remaining());
    if (!model) {
      const Eigen::MatrixXd pts = bounds.map_unit(sobol_points(batch, dim_, mix_seed(stream, 2)));
      for (Eigen::Index i = 0; i < pts.rows(); ++i) proposals.push_back(pts.row(i).transpose());
    } else if (cfg_.acquisition == LocalAcquisition::kTs) {
      const std::size_t n_cand = cfg_.n_ts_candidates > 0 ? cfg_.n_ts_candidates : default_ts_candidates(dim_);
      proposals = ts_select_batch(*model, bounds, tr.center, std::max(n_cand, batch), batch, mix_seed(stream, 3));
    } else {
      const GpModel& gp = *model;
      const double f_ref = gp.best_target();
      SmoothObjective obj = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
        const PosteriorGradient pg = gp.posterior_with_gradient(x);
        const LogEiValue v = log_ei_with_grad(pg.mean, pg.variance, f_ref);
        if (grad) {
          *grad = v.d_mean * pg.d_mean;
          const double sigma = std::sqrt(pg.variance);
          if (sigma > 0.0) *grad += v.d_sigma * pg.d_variance / (2.0 * sigma);
        }
        return v.value;
      };
      proposals.push_back(maximize_smooth(obj, bounds, cfg_.local_inner, mix_seed(stream, 4)).x);
    }

    const double prev_best = tr.local_data.best_value();
    double batch_best = std::numeric_limits<double>::infinity();
    Point batch_best_x;
    for (const auto& x : proposals) {
      const double v = evaluate(x, r, EventTag::kLocal);
      if (v < batch_best) {
        batch_best = v;
        batch_best_x = x;
      }
      tr.local_data.add(x, v);
    }
    if (!cfg_.global_model) {
      Dataset local = std::move(tr.local_data);
      tr = update_trust_region(std::move(tr), batch_best_x, batch_best, prev_best, cfg_);
      tr.local_data = std::move(local);
    }
  }

  const ObjectiveFn& objective_;
  TurboConfig cfg_;
  std::size_t m_;
  std::uint64_t seed_;
  std::size_t dim_;
  Dataset global_;
  std::vector<TrustRegion> regions_;
  std::vector<bool> started_;
  std::vector<std::optional<GpHyperparams>> warm_;
  std::vector<std::uint64_t> restarts_;
  std::vector<RunRecord> records_;
  double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

std::vector<RunRecord> turbo_m_run(const ObjectiveFn& objective, const TurboConfig& cfg, std::size_t m,
                                   std::uint64_t seed) {
  return Runner(objective, cfg, m, seed).run();
}

std::vector<RunRecord> turbo1_run(const ObjectiveFn& objective, const TurboConfig& cfg, std::uint64_t seed) {
  return turbo_m_run(objective, cfg, 1, seed);
}

}  // namespace rei
