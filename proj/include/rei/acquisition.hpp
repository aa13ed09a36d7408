#pragma once

#include <Eigen/Core>

namespace rei {

// Pointwise acquisitions for minimization, in standardized objective space.
// f_ref is the incumbent (smallest standardized observation in scope).

double normal_pdf(double z);
double normal_cdf(double z);

/// (f_ref - mean) Phi(z) + sigma phi(z), z = (f_ref - mean) / sigma;
/// max(f_ref - mean, 0) when the variance is zero.
double ei(double mean, double variance, double f_ref);

struct LogEiValue {
  double value = 0.0;
  double d_mean = 0.0;   // d log_ei / d mean
  double d_sigma = 0.0;  // d log_ei / d sigma (sigma = sqrt(variance))
};

/// log(ei) without underflow: for z < -6 the improvement factor
/// h(z) = phi(z) + z Phi(z) is evaluated as phi(z) c / (|z| + c) with c from
/// the continued fraction of the Mills ratio, which avoids the cancellation
/// in the direct formula.
LogEiValue log_ei_with_grad(double mean, double variance, double f_ref);
double log_ei(double mean, double variance, double f_ref);

/// Minimization-form UCB: -mean + sqrt(beta * variance).
double ucb_min(double mean, double variance, double beta);

/// Mean over draws (rows) of max(f_ref - min over the row, 0).
double q_improvement(const Eigen::MatrixXd& draws, double f_ref);

}  // namespace rei
