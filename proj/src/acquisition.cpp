#include "rei/acquisition.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace rei {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
constexpr double kTailSwitch = -6.0;

// c(x) = 1 / (x + 2 / (x + 3 / (x + ...))) for x >= 6. With the Mills ratio
// R(x) = 1 / (x + c), 1 - x R(x) = c / (x + c).
double mills_tail(double x) {
  double t = x;
  for (int k = 80; k >= 2; --k) t = x + k / t;
  return 1.0 / t;
}

}  // namespace

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double ei(double mean, double variance, double f_ref) {
  const double diff = f_ref - mean;
  if (!(variance > 0.0)) return std::max(diff, 0.0);
  const double sigma = std::sqrt(variance);
  const double z = diff / sigma;
  if (z < kTailSwitch) {
    const double x = -z;
    const double c = mills_tail(x);
    return sigma * normal_pdf(z) * c / (x + c);
  }
  return std::max(diff * normal_cdf(z) + sigma * normal_pdf(z), 0.0);
}

LogEiValue log_ei_with_grad(double mean, double variance, double f_ref) {
  const double diff = f_ref - mean;
  LogEiValue out;
  if (!(variance > 0.0)) {
    if (diff > 0.0) {
      out.value = std::log(diff);
      out.d_mean = -1.0 / diff;
    } else {
      out.value = -std::numeric_limits<double>::infinity();
    }
    return out;
  }
  const double sigma = std::sqrt(variance);
  const double z = diff / sigma;
  double log_h;
  double cdf_over_h;  // Phi(z) / h(z)
  double pdf_over_h;  // phi(z) / h(z)
  if (z < kTailSwitch) {
    const double x = -z;
    const double c = mills_tail(x);
    log_h = -0.5 * z * z - kLogSqrt2Pi + std::log(c / (x + c));
    cdf_over_h = 1.0 / c;
    pdf_over_h = (x + c) / c;
  } else {
    const double pdf = normal_pdf(z);
    const double cdf = normal_cdf(z);
    const double h = pdf + z * cdf;
    log_h = std::log(h);
    cdf_over_h = cdf / h;
    pdf_over_h = pdf / h;
  }
  out.value = log_h + std::log(sigma);
  out.d_mean = -cdf_over_h / sigma;
  out.d_sigma = pdf_over_h / sigma;
  return out;
}

double log_ei(double mean, double variance, double f_ref) { return log_ei_with_grad(mean, variance, f_ref).value; }

double ucb_min(double mean, double variance, double beta) {
  return -mean + std::sqrt(beta) * std::sqrt(std::max(variance, 0.0));
}

double q_improvement(const Eigen::MatrixXd& draws, double f_ref) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < draws.rows(); ++k) total += std::max(f_ref - draws.row(k).minCoeff(), 0.0);
  return total / static_cast<double>(draws.rows());
}

}  // namespace rei
