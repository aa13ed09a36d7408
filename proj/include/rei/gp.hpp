#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "rei/lbfgsb.hpp"
#include "rei/problem.hpp"

namespace rei {

struct GpHyperparams {
  Eigen::VectorXd lengthscales;  // ARD, one per input dimension
  double signal_variance = 1.0;
  double noise_variance = 1e-6;

  std::size_t dim() const { return static_cast<std::size_t>(lengthscales.size()); }
  /// [log lengthscales..., log signal variance, log noise variance]
  Eigen::VectorXd to_log() const;
  static GpHyperparams from_log(const Eigen::VectorXd& log_params);
};

/// Matern-5/2 correlation as a function of the scaled distance r.
double matern52(double r);

/// signal_variance * matern52(|| (x - x') / lengthscales ||).
double kernel(const Point& x, const Point& x_prime, const GpHyperparams& hp);

/// Cross-covariance between the rows of a (n x D) and the rows of b (m x D).
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const GpHyperparams& hp);

/// Normal density on the log of a positive hyperparameter.
struct LogNormalPrior {
  double loc = 0.0;
  double scale = 1.0;
  double log_density(double log_value) const {
    const double z = (log_value - loc) / scale;
    return -0.5 * z * z;
  }
  double d_log_density(double log_value) const { return -(log_value - loc) / (scale * scale); }
};

/// MAP fit settings. Priors live on log-parameters; the lengthscale location
/// is shifted by 0.5*log(D) so that the prior tracks the growth of typical
/// inter-point distances in the unit cube.
struct FitConfig {
  int n_restarts = 8;
  LbfgsOptions local{60, 10, 1e-6, 1e-10};
  std::uint64_t seed = 0;

  double lengthscale_min = 0.005, lengthscale_max = 10.0;
  double signal_min = 0.05, signal_max = 20.0;
  double noise_min = 1e-8, noise_max = 0.1;

  double lengthscale_prior_loc = -0.6931471805599453;  // log(0.5), before the log(D)/2 shift
  double lengthscale_prior_scale = 1.0;
  LogNormalPrior signal_prior{0.0, 1.0};
  LogNormalPrior noise_prior{-6.907755278982137, 2.0};  // log(1e-3)

  /// Replaces the first restart point (otherwise the prior mode) when set.
  std::optional<GpHyperparams> warm_start;

  LogNormalPrior lengthscale_prior(std::size_t dim) const;
  Box log_bounds(std::size_t dim) const;
};

/// Log marginal likelihood of standardized targets y at inputs x (rows), with
/// the gradient with respect to GpHyperparams::to_log() when grad is non-null.
/// Returns -inf when the kernel matrix cannot be factorized.
double log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GpHyperparams& hp,
                               Eigen::VectorXd* grad = nullptr);

/// Log marginal likelihood plus log prior; the quantity fit_map maximizes.
double log_map_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GpHyperparams& hp,
                         const FitConfig& cfg, Eigen::VectorXd* grad = nullptr);

struct Posterior {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
};

struct PosteriorGradient {
  double mean = 0.0;
  double variance = 0.0;
  Eigen::VectorXd d_mean;
  Eigen::VectorXd d_variance;
};

struct JointPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// Zero-mean GP posterior conditioned on (x, y) with fixed hyperparameters.
/// Targets are used as given; models built by fit_map carry the standardization
/// applied to the raw values. Immutable after construction.
class GpModel {
 public:
  /// Throws ModelFitError when K + noise I cannot be factorized with up to
  /// 1e-4 * signal_variance of added jitter.
  GpModel(Eigen::MatrixXd x, Eigen::VectorXd y, GpHyperparams hp, double y_mean = 0.0, double y_std = 1.0);

  const GpHyperparams& hyperparams() const { return hp_; }
  const Eigen::MatrixXd& train_points() const { return x_; }
  const Eigen::VectorXd& train_targets() const { return y_; }
  std::size_t dim() const { return hp_.dim(); }
  std::size_t size() const { return static_cast<std::size_t>(y_.size()); }
  double jitter() const { return jitter_; }
  Eigen::MatrixXd cholesky_factor() const { return llt_.matrixL(); }
  const Eigen::VectorXd& alpha() const { return alpha_; }

  double y_mean() const { return y_mean_; }
  double y_std() const { return y_std_; }
  double standardize(double raw) const { return (raw - y_mean_) / y_std_; }
  /// Smallest training target (standardized space).
  double best_target() const { return y_.minCoeff(); }

  /// Pointwise posterior at the rows of `points`; variances clamped at 0.
  Posterior posterior(const Eigen::MatrixXd& points) const;
  PosteriorGradient posterior_with_gradient(const Point& x) const;
  JointPosterior joint_posterior(const Eigen::MatrixXd& points) const;

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  GpHyperparams hp_;
  double y_mean_, y_std_;
  double jitter_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

/// Standardizes the data and maximizes log_map_objective by multi-start
/// bounded L-BFGS in log-parameter space. Deterministic given data and seed.
GpModel fit_map(const Dataset& data, const FitConfig& cfg = {});

/// Joint draws (rows) of the latent function at the rows of `points`.
Eigen::MatrixXd sample_posterior(const GpModel& model, const Eigen::MatrixXd& points, std::size_t n_draws,
                                 std::uint64_t seed);

/// Same as sample_posterior but with caller-supplied standard normals
/// (n_draws x |points|), so repeated calls share base samples.
Eigen::MatrixXd sample_posterior_with_base(const GpModel& model, const Eigen::MatrixXd& points,
                                           const Eigen::MatrixXd& base_normals);

/// Lower-triangular L with L L^T ~= cov. Tries no jitter first, then adds
/// 1e-8 .. 1e-4 times the largest diagonal entry. An all-zero covariance
/// yields a zero factor. Throws ModelFitError on failure.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov);

}  // namespace rei
