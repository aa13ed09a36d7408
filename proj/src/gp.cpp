#include "rei/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rei/error.hpp"
#include "rei/random.hpp"

namespace rei {

namespace {

const double kSqrt5 = std::sqrt(5.0);

// d k / d(log lengthscale_d) = signal * (5/3)(1 + sqrt5 r) exp(-sqrt5 r) * delta_d^2 / l_d^2;
// this returns the factor in front of delta_d^2 / l_d^2.
double matern52_radial_factor(double r) { return (5.0 / 3.0) * (1.0 + kSqrt5 * r) * std::exp(-kSqrt5 * r); }

// Pairwise scaled distances between the rows of a and b.
Eigen::MatrixXd scaled_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 const Eigen::VectorXd& lengthscales) {
  const Eigen::RowVectorXd inv = lengthscales.cwiseInverse().transpose();
  const Eigen::MatrixXd as = a.array().rowwise() * inv.array();
  const Eigen::MatrixXd bs = b.array().rowwise() * inv.array();
  Eigen::MatrixXd d2 = (-2.0 * as * bs.transpose()).colwise() + as.rowwise().squaredNorm();
  d2.rowwise() += bs.rowwise().squaredNorm().transpose();
  return d2.cwiseMax(0.0).cwiseSqrt();
}

// Eigen reports success on NaN input; require a finite positive diagonal too.
bool usable(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  if (llt.info() != Eigen::Success) return false;
  const auto diag = llt.matrixLLT().diagonal().array();
  return diag.isFinite().all() && (diag > 0.0).all();
}

std::optional<std::pair<Eigen::LLT<Eigen::MatrixXd>, double>> factorize_with_jitter(Eigen::MatrixXd k,
                                                                                    double scale) {
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (usable(llt)) return std::make_pair(std::move(llt), 0.0);
  double added = 0.0;
  for (double jitter = 1e-8; jitter <= 1e-4 * 1.0000001; jitter *= 10.0) {
    const double amount = jitter * scale;
    k.diagonal().array() += amount - added;
    added = amount;
    llt.compute(k);
    if (usable(llt)) return std::make_pair(std::move(llt), amount);
  }
  return std::nullopt;
}

}  // namespace

Eigen::VectorXd GpHyperparams::to_log() const {
  const auto d = lengthscales.size();
  Eigen::VectorXd out(d + 2);
  out.head(d) = lengthscales.array().log();
  out[d] = std::log(signal_variance);
  out[d + 1] = std::log(noise_variance);
  return out;
}

GpHyperparams GpHyperparams::from_log(const Eigen::VectorXd& log_params) {
  const auto d = log_params.size() - 2;
  GpHyperparams hp;
  hp.lengthscales = log_params.head(d).array().exp();
  hp.signal_variance = std::exp(log_params[d]);
  hp.noise_variance = std::exp(log_params[d + 1]);
  return hp;
}

double matern52(double r) { return (1.0 + kSqrt5 * r + (5.0 / 3.0) * r * r) * std::exp(-kSqrt5 * r); }

double kernel(const Point& x, const Point& x_prime, const GpHyperparams& hp) {
  const double r = (x - x_prime).cwiseQuotient(hp.lengthscales).norm();
  return hp.signal_variance * matern52(r);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const GpHyperparams& hp) {
  Eigen::MatrixXd r = scaled_distances(a, b, hp.lengthscales);
  return r.unaryExpr([&](double v) { return hp.signal_variance * matern52(v); });
}

LogNormalPrior FitConfig::lengthscale_prior(std::size_t dim) const {
  return {lengthscale_prior_loc + 0.5 * std::log(static_cast<double>(dim)), lengthscale_prior_scale};
}

Box FitConfig::log_bounds(std::size_t dim) const {
  const auto d = static_cast<Eigen::Index>(dim);
  Box box{Eigen::VectorXd(d + 2), Eigen::VectorXd(d + 2)};
  box.lower.head(d).setConstant(std::log(lengthscale_min));
  box.upper.head(d).setConstant(std::log(lengthscale_max));
  box.lower[d] = std::log(signal_min);
  box.upper[d] = std::log(signal_max);
  box.lower[d + 1] = std::log(noise_min);
  box.upper[d + 1] = std::log(noise_max);
  return box;
}

double log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GpHyperparams& hp,
                               Eigen::VectorXd* grad) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const Eigen::MatrixXd r = scaled_distances(x, x, hp.lengthscales);
  Eigen::MatrixXd k0 = r.unaryExpr([&](double v) { return hp.signal_variance * matern52(v); });
  Eigen::MatrixXd k = k0;
  k.diagonal().array() += hp.noise_variance;
  auto fac = factorize_with_jitter(std::move(k), hp.signal_variance);
  if (!fac) return -std::numeric_limits<double>::infinity();
  const auto& llt = fac->first;
  const Eigen::VectorXd alpha = llt.solve(y);
  const Eigen::MatrixXd lmat = llt.matrixL();
  const double log_det = 2.0 * lmat.diagonal().array().log().sum();
  const double value =
      -0.5 * y.dot(alpha) - 0.5 * log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  if (grad) {
    grad->resize(d + 2);
    Eigen::MatrixXd w = -llt.solve(Eigen::MatrixXd::Identity(n, n));
    w.noalias() += alpha * alpha.transpose();
    // M_ij = W_ij * signal * radial(r_ij); the lengthscale gradient is
    // (1/2) sum_ij M_ij (x_id - x_jd)^2 / l_d^2.
    const Eigen::MatrixXd m =
        w.cwiseProduct(r.unaryExpr([&](double v) { return hp.signal_variance * matern52_radial_factor(v); }));
    const Eigen::VectorXd row_sums = m.rowwise().sum();
    const Eigen::MatrixXd mx = m * x;
    for (Eigen::Index c = 0; c < d; ++c) {
      const double s = x.col(c).cwiseAbs2().dot(row_sums) - x.col(c).dot(mx.col(c));
      (*grad)[c] = s / (hp.lengthscales[c] * hp.lengthscales[c]);
    }
    (*grad)[d] = 0.5 * w.cwiseProduct(k0).sum();
    (*grad)[d + 1] = 0.5 * hp.noise_variance * w.trace();
  }
  return value;
}

double log_map_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GpHyperparams& hp,
                         const FitConfig& cfg, Eigen::VectorXd* grad) {
  double value = log_marginal_likelihood(x, y, hp, grad);
  if (!std::isfinite(value)) return value;
  const auto d = static_cast<Eigen::Index>(hp.dim());
  const Eigen::VectorXd eta = hp.to_log();
  const LogNormalPrior ls_prior = cfg.lengthscale_prior(hp.dim());
  for (Eigen::Index c = 0; c < d; ++c) {
    value += ls_prior.log_density(eta[c]);
    if (grad) (*grad)[c] += ls_prior.d_log_density(eta[c]);
  }
  value += cfg.signal_prior.log_density(eta[d]) + cfg.noise_prior.log_density(eta[d + 1]);
  if (grad) {
    (*grad)[d] += cfg.signal_prior.d_log_density(eta[d]);
    (*grad)[d + 1] += cfg.noise_prior.d_log_density(eta[d + 1]);
  }
  return value;
}

GpModel::GpModel(Eigen::MatrixXd x, Eigen::VectorXd y, GpHyperparams hp, double y_mean, double y_std)
    : x_(std::move(x)), y_(std::move(y)), hp_(std::move(hp)), y_mean_(y_mean), y_std_(y_std) {
  if (x_.rows() != y_.size() || x_.cols() != hp_.lengthscales.size() || x_.rows() == 0)
    throw ConfigError("GpModel: inconsistent training data shapes");
  Eigen::MatrixXd k = kernel_matrix(x_, x_, hp_);
  k.diagonal().array() += hp_.noise_variance;
  auto fac = factorize_with_jitter(std::move(k), hp_.signal_variance);
  if (!fac) throw ModelFitError("Cholesky of the kernel matrix failed", 1e-4 * hp_.signal_variance);
  llt_ = std::move(fac->first);
  jitter_ = fac->second;
  alpha_ = llt_.solve(y_);
}

Posterior GpModel::posterior(const Eigen::MatrixXd& points) const {
  const Eigen::MatrixXd ks = kernel_matrix(x_, points, hp_);
  Posterior out;
  out.mean = ks.transpose() * alpha_;
  const Eigen::MatrixXd v = llt_.matrixL().solve(ks);
  out.variance = (hp_.signal_variance - v.colwise().squaredNorm().transpose().array()).cwiseMax(0.0);
  return out;
}

PosteriorGradient GpModel::posterior_with_gradient(const Point& x) const {
  const Eigen::Index n = x_.rows();
  const Eigen::Index d = x_.cols();
  Eigen::VectorXd k(n);
  Eigen::MatrixXd dk(n, d);
  const Eigen::ArrayXd inv_l2 = hp_.lengthscales.array().square().inverse();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::ArrayXd delta = x.array() - x_.row(i).transpose().array();
    const double r = std::sqrt((delta.square() * inv_l2).sum());
    k[i] = hp_.signal_variance * matern52(r);
    dk.row(i) = (-hp_.signal_variance * matern52_radial_factor(r) * delta * inv_l2).matrix().transpose();
  }
  PosteriorGradient out;
  out.mean = k.dot(alpha_);
  out.d_mean = dk.transpose() * alpha_;
  const Eigen::VectorXd w = llt_.solve(k);
  out.variance = hp_.signal_variance - k.dot(w);
  out.d_variance = -2.0 * dk.transpose() * w;
  if (out.variance < 0.0) {
    out.variance = 0.0;
    out.d_variance.setZero();
  }
  return out;
}

JointPosterior GpModel::joint_posterior(const Eigen::MatrixXd& points) const {
  const Eigen::MatrixXd ks = kernel_matrix(x_, points, hp_);
  JointPosterior out;
  out.mean = ks.transpose() * alpha_;
  const Eigen::MatrixXd v = llt_.matrixL().solve(ks);
  out.covariance = kernel_matrix(points, points, hp_);
  out.covariance.noalias() -= v.transpose() * v;
  return out;
}

GpModel fit_map(const Dataset& data, const FitConfig& cfg) {
  if (data.empty()) throw ConfigError("fit_map requires at least one sample");
  const Standardized st = standardize(data.values);
  const Eigen::MatrixXd x = data.points_matrix();
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(st.values.data(), static_cast<Eigen::Index>(st.values.size()));
  const std::size_t dim = data.dim();
  const Box bounds = cfg.log_bounds(dim);

  auto objective = [&](const Eigen::VectorXd& eta, Eigen::VectorXd* grad) {
    return log_map_objective(x, y, GpHyperparams::from_log(eta), cfg, grad);
  };

  std::vector<Eigen::VectorXd> starts;
  if (cfg.warm_start && cfg.warm_start->dim() == dim) {
    starts.push_back(bounds.clamp(cfg.warm_start->to_log()));
  } else {
    Eigen::VectorXd mode(bounds.dim());
    const auto d = static_cast<Eigen::Index>(dim);
    mode.head(d).setConstant(cfg.lengthscale_prior(dim).loc);
    mode[d] = cfg.signal_prior.loc;
    mode[d + 1] = cfg.noise_prior.loc;
    starts.push_back(bounds.clamp(mode));
  }
  if (cfg.n_restarts > 1) {
    const Eigen::MatrixXd sob = bounds.map_unit(
        sobol_points(static_cast<std::size_t>(cfg.n_restarts - 1), bounds.dim(), mix_seed(cfg.seed, 0x6770)));
    for (Eigen::Index i = 0; i < sob.rows(); ++i) starts.push_back(sob.row(i).transpose());
  }

  double best_value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_eta = starts.front();
  for (const auto& s : starts) {
    LbfgsResult r = maximize_bounded(objective, bounds, s, cfg.local);
    if (std::isfinite(r.value) && r.value > best_value) {
      best_value = r.value;
      best_eta = r.x;
    }
  }
  if (!std::isfinite(best_value))
    throw ModelFitError("MAP fit failed: no restart produced a factorizable kernel matrix",
                        1e-4 * cfg.signal_max);
  return GpModel(x, y, GpHyperparams::from_log(best_eta), st.mean, st.stddev);
}

Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov) {
  const double scale = cov.diagonal().maxCoeff();
  if (!(scale > 0.0)) return Eigen::MatrixXd::Zero(cov.rows(), cov.cols());
  auto fac = factorize_with_jitter(cov, scale);
  if (!fac) throw ModelFitError("posterior covariance factorization failed", 1e-4 * scale);
  return fac->first.matrixL();
}

Eigen::MatrixXd sample_posterior_with_base(const GpModel& model, const Eigen::MatrixXd& points,
                                           const Eigen::MatrixXd& base_normals) {
  if (base_normals.cols() != points.rows())
    throw ConfigError("sample_posterior: base sample width must match the number of points");
  const JointPosterior jp = model.joint_posterior(points);
  const Eigen::MatrixXd l = covariance_factor(jp.covariance);
  Eigen::MatrixXd draws = base_normals * l.transpose();
  draws.rowwise() += jp.mean.transpose();
  return draws;
}

Eigen::MatrixXd sample_posterior(const GpModel& model, const Eigen::MatrixXd& points, std::size_t n_draws,
                                 std::uint64_t seed) {
  if (points.rows() == 0 || n_draws == 0) throw ConfigError("sample_posterior requires points and draws");
  return sample_posterior_with_base(
      model, points, standard_normal_matrix(static_cast<Eigen::Index>(n_draws), points.rows(), seed));
}

}  // namespace rei
