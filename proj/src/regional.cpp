#include "rei/regional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rei/acquisition.hpp"
#include "rei/error.hpp"
#include "rei/random.hpp"

namespace rei {

Box region_bounds(const RegionGeometry& geom) {
  const Eigen::VectorXd half = 0.5 * geom.lengths;
  return {(geom.center - half).cwiseMax(0.0), (geom.center + half).cwiseMin(1.0)};
}

RegionalBase parse_regional_base(const std::string& name) {
  if (name == "ei" || name == "rei") return RegionalBase::kEi;
  if (name == "logei" || name == "logrei") return RegionalBase::kLogEi;
  if (name == "ucb" || name == "rucb") return RegionalBase::kUcb;
  if (name == "qei" || name == "qrei") return RegionalBase::kQImprovement;
  throw ConfigError("unknown regional acquisition '" + name + "'");
}

std::string to_string(RegionalBase base) {
  switch (base) {
    case RegionalBase::kEi: return "rei";
    case RegionalBase::kLogEi: return "logrei";
    case RegionalBase::kUcb: return "rucb";
    case RegionalBase::kQImprovement: return "qrei";
  }
  return "?";
}

RegionalAcquisition::RegionalAcquisition(const GpModel& model, RegionalAcqSpec spec, double f_ref)
    : model_(&model), spec_(spec), f_ref_(f_ref) {
  if (spec_.n_x == 0 || spec_.q == 0) throw ConfigError("regional acquisition requires n_x >= 1 and q >= 1");
  if (spec_.base == RegionalBase::kQImprovement && spec_.n_f == 0)
    throw ConfigError("qREI requires n_f >= 1");
  if (spec_.base != RegionalBase::kQImprovement && spec_.q != 1)
    throw ConfigError("joint scoring of several regions is only defined for qREI");
  const std::size_t dim = model.dim();
  unit_points_ = sobol_points(spec_.n_x, spec_.q * dim, mix_seed(spec_.base_sample_seed, 1));
  if (spec_.base == RegionalBase::kQImprovement) {
    base_normals_ = standard_normal_matrix(static_cast<Eigen::Index>(spec_.n_f),
                                           static_cast<Eigen::Index>(spec_.q * spec_.n_x),
                                           mix_seed(spec_.base_sample_seed, 2));
  }
}

Eigen::MatrixXd RegionalAcquisition::region_points(const RegionGeometry& geom, std::size_t slot) const {
  const auto d = static_cast<Eigen::Index>(model_->dim());
  return region_bounds(geom).map_unit(unit_points_.middleCols(static_cast<Eigen::Index>(slot) * d, d));
}

double RegionalAcquisition::operator()(const std::vector<RegionGeometry>& regions) const {
  if (regions.size() != spec_.q) throw ConfigError("regional acquisition: expected q regions");
  if (spec_.base == RegionalBase::kQImprovement) return score_q(regions);

  const Eigen::MatrixXd pts = region_points(regions.front());
  const Posterior post = model_->posterior(pts);
  const auto n = static_cast<double>(pts.rows());
  switch (spec_.base) {
    case RegionalBase::kEi: {
      double s = 0.0;
      for (Eigen::Index j = 0; j < pts.rows(); ++j) s += ei(post.mean[j], post.variance[j], f_ref_);
      return s / n;
    }
    case RegionalBase::kUcb: {
      double s = 0.0;
      for (Eigen::Index j = 0; j < pts.rows(); ++j) s += ucb_min(post.mean[j], post.variance[j], spec_.ucb_beta);
      return s / n;
    }
    case RegionalBase::kLogEi: {
      Eigen::VectorXd logs(pts.rows());
      for (Eigen::Index j = 0; j < pts.rows(); ++j) logs[j] = log_ei(post.mean[j], post.variance[j], f_ref_);
      const double m = logs.maxCoeff();
      if (!std::isfinite(m)) return m;
      return m + std::log((logs.array() - m).exp().sum()) - std::log(n);
    }
    case RegionalBase::kQImprovement: break;
  }
  return 0.0;
}

double RegionalAcquisition::score_q(const std::vector<RegionGeometry>& regions) const {
  const auto nx = static_cast<Eigen::Index>(spec_.n_x);
  const auto d = static_cast<Eigen::Index>(model_->dim());
  Eigen::MatrixXd pts(nx * static_cast<Eigen::Index>(spec_.q), d);
  for (std::size_t i = 0; i < spec_.q; ++i)
    pts.middleRows(static_cast<Eigen::Index>(i) * nx, nx) = region_points(regions[i], i);
  const Eigen::MatrixXd draws = sample_posterior_with_base(*model_, pts, base_normals_);
  double total = 0.0;
  for (Eigen::Index k = 0; k < draws.rows(); ++k) {
    for (Eigen::Index j = 0; j < nx; ++j) {
      double best = draws(k, j);
      for (Eigen::Index i = 1; i < static_cast<Eigen::Index>(spec_.q); ++i) best = std::min(best, draws(k, i * nx + j));
      total += std::max(f_ref_ - best, 0.0);
    }
  }
  return total / static_cast<double>(draws.rows() * nx);
}

double rei(const GpModel& model, const RegionGeometry& geom, double f_ref, std::size_t n_x, std::uint64_t seed) {
  RegionalAcqSpec spec{RegionalBase::kEi, n_x, 1, 1, seed, 0.0};
  return RegionalAcquisition(model, spec, f_ref)({geom});
}

double log_rei(const GpModel& model, const RegionGeometry& geom, double f_ref, std::size_t n_x,
               std::uint64_t seed) {
  RegionalAcqSpec spec{RegionalBase::kLogEi, n_x, 1, 1, seed, 0.0};
  return RegionalAcquisition(model, spec, f_ref)({geom});
}

double rucb(const GpModel& model, const RegionGeometry& geom, double beta, std::size_t n_x, std::uint64_t seed) {
  RegionalAcqSpec spec{RegionalBase::kUcb, n_x, 1, 1, seed, beta};
  return RegionalAcquisition(model, spec, 0.0)({geom});
}

double qrei(const GpModel& model, const std::vector<RegionGeometry>& geoms, double f_ref,
            const RegionalAcqSpec& spec) {
  RegionalAcqSpec s = spec;
  s.base = RegionalBase::kQImprovement;
  s.q = geoms.size();
  return RegionalAcquisition(model, s, f_ref)(geoms);
}

}  // namespace rei
