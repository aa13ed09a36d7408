#include "rei/theory.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "rei/error.hpp"
#include "rei/random.hpp"

namespace rei::theory {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double t) { return std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t; }

double kernel_value(GridKernel kernel, double r, double lengthscale) {
  const double s = std::abs(r) / lengthscale;
  if (kernel == GridKernel::kSquaredExponential) return std::exp(-0.5 * s * s);
  const double a = std::sqrt(5.0) * s;
  return (1.0 + a + a * a / 3.0) * std::exp(-a);
}

std::vector<std::complex<double>> dft(const Eigen::VectorXd& v) {
  Eigen::FFT<double> fft;
  std::vector<double> in(v.data(), v.data() + v.size());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  return out;
}

Eigen::VectorXd circular_convolve(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index m = a.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out[i] += a[j] * b[(i - j + m) % m];
  return out;
}

}  // namespace

double region_average_mc(const ScalarField& f, const Eigen::VectorXd& x, const Eigen::VectorXd& lengths,
                         std::size_t n_mc, std::uint64_t seed) {
  if (n_mc == 0) throw ConfigError("n_mc must be >= 1");
  if (lengths.size() != x.size()) throw ConfigError("lengths must match the dimension of x");
  if ((lengths.array() <= 0.0).any()) throw ConfigError("region lengths must be positive");
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Eigen::VectorXd p(x.size());
  double sum = 0.0;
  for (std::size_t s = 0; s < n_mc; ++s) {
    for (Eigen::Index d = 0; d < x.size(); ++d) p[d] = x[d] + lengths[d] * u(rng);
    sum += f(p);
  }
  return sum / static_cast<double>(n_mc);
}

double indicator_fourier_factor(const Eigen::VectorXd& omega, const Eigen::VectorXd& lengths) {
  if (lengths.size() != omega.size()) throw ConfigError("lengths must match the dimension of omega");
  double v = 1.0;
  for (Eigen::Index i = 0; i < omega.size(); ++i) v *= sinc(0.5 * omega[i] * lengths[i]);
  return v;
}

Eigen::VectorXd GridFunction1D::kernel_row() const {
  const std::size_t m = size();
  if (m < 2 || (m & (m - 1)) != 0) throw ConfigError("grid size must be a power of two");
  if (!(lengthscale > 0.0)) throw ConfigError("lengthscale must be positive");
  // Sum periodic images until they are negligible.
  const int images = static_cast<int>(std::ceil(40.0 * lengthscale)) + 1;
  Eigen::VectorXd row(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    const double r = static_cast<double>(j) / static_cast<double>(m);
    double s = 0.0;
    for (int n = -images; n <= images; ++n) s += kernel_value(kernel, r + n, lengthscale);
    row[static_cast<Eigen::Index>(j)] = s;
  }
  return row;
}

Eigen::VectorXd GridFunction1D::spectral_weights() const {
  const auto spec = dft(kernel_row());
  Eigen::VectorXd w(static_cast<Eigen::Index>(spec.size()));
  double wmax = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    w[static_cast<Eigen::Index>(k)] = spec[k].real();
    wmax = std::max(wmax, spec[k].real());
  }
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (!(w[k] > 1e-13 * wmax))
      throw std::domain_error("kernel spectral weight " + std::to_string(k) + " is not positive");
  return w;
}

Eigen::VectorXd GridFunction1D::values() const { return circular_convolve(kernel_row(), alpha); }

std::size_t indicator_width(double length, std::size_t m) {
  if (!(length > 0.0)) throw ConfigError("region length must be positive");
  const double cells = length * static_cast<double>(m);
  auto half = static_cast<long>(std::lround((cells - 1.0) / 2.0));
  half = std::clamp<long>(half, 0, static_cast<long>(m / 2) - 1);
  return static_cast<std::size_t>(2 * half + 1);
}

double discrete_indicator_factor(long k, std::size_t width, std::size_t m) {
  const double t = kPi * static_cast<double>(k) / static_cast<double>(m);
  const double den = static_cast<double>(width) * std::sin(t);
  if (std::abs(den) < 1e-300) return 1.0;
  return std::abs(std::sin(static_cast<double>(width) * t) / den);
}

NormReduction discrete_norm_reduction_check(const GridFunction1D& f, double length) {
  const std::size_t m = f.size();
  const Eigen::VectorXd weights = f.spectral_weights();
  const Eigen::VectorXd values = f.values();
  NormReduction out;
  out.norm_f = std::sqrt(std::max(0.0, f.alpha.dot(values)));

  const std::size_t w = indicator_width(length, m);
  Eigen::VectorXd chi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  const long half = static_cast<long>(w / 2);
  for (long j = -half; j <= half; ++j)
    chi[(j + static_cast<long>(m)) % static_cast<long>(m)] = 1.0 / static_cast<double>(w);
  const Eigen::VectorXd sf = circular_convolve(chi, values);

  const auto spec = dft(sf);
  double sq = 0.0;
  for (std::size_t k = 0; k < m; ++k) sq += std::norm(spec[k]) / weights[static_cast<Eigen::Index>(k)];
  out.norm_sf = std::sqrt(sq / static_cast<double>(m));
  out.passed = out.norm_sf <= out.norm_f * (1.0 + 1e-8);
  return out;
}

std::vector<SelfTestItem> run_selftest(std::uint64_t seed) {
  std::vector<SelfTestItem> items;
  Rng rng(seed);

  {
    std::normal_distribution<double> n(0.0, 20.0);
    std::uniform_real_distribution<double> u(0.01, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
      Eigen::VectorXd omega(3), l(3);
      for (int d = 0; d < 3; ++d) {
        omega[d] = n(rng);
        l[d] = u(rng);
      }
      worst = std::max(worst, std::abs(indicator_fourier_factor(omega, l)));
    }
    std::ostringstream os;
    os << "max |factor| over 1e5 frequencies = " << worst;
    items.push_back({"indicator factor bounded by 1", worst <= 1.0, os.str()});
  }

  {
    const double lengths[] = {0.1, 0.3, 0.5};
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> ls(0.03, 0.15);
    int passed = 0;
    double worst_ratio = 0.0;
    for (int i = 0; i < 100; ++i) {
      GridFunction1D f;
      f.kernel = (i % 2 == 0) ? GridKernel::kMatern52 : GridKernel::kSquaredExponential;
      f.lengthscale = f.kernel == GridKernel::kMatern52 ? ls(rng) : 0.004 + 0.004 * ls(rng) / 0.15;
      f.alpha = Eigen::VectorXd::Zero(128);
      for (int t = 0; t < 5; ++t) f.alpha[static_cast<Eigen::Index>(rng() % 128)] += n(rng);
      const auto r = discrete_norm_reduction_check(f, lengths[i % 3]);
      passed += r.passed ? 1 : 0;
      if (r.norm_f > 0.0) worst_ratio = std::max(worst_ratio, r.norm_sf / r.norm_f);
    }
    std::ostringstream os;
    os << passed << "/100 instances, max ||Sf||/||f|| = " << worst_ratio;
    items.push_back({"discrete norm reduction", passed == 100, os.str()});
  }

  {
    auto f = [](const Eigen::VectorXd& x) { return std::sin(2.0 * kPi * x[0]); };
    Eigen::VectorXd x(1), l(1);
    x << 0.25;
    l << 0.5;
    const double est = region_average_mc(f, x, l, 100000, mix_seed(seed, 1));
    // (1/l) * integral of sin(2 pi t) over [0, 0.5].
    const double exact = 2.0 / kPi;
    const double se = std::sqrt(0.5 - exact * exact) / std::sqrt(100000.0);
    std::ostringstream os;
    os << "estimate " << est << " vs " << exact << " (" << std::abs(est - exact) / se << " SE)";
    items.push_back({"region average of sin", std::abs(est - exact) <= 4.0 * se, os.str()});
  }
  return items;
}

}  // namespace rei::theory
