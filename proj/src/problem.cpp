#include "rei/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/random/sobol.hpp>

#include "rei/error.hpp"
#include "rei/random.hpp"

namespace rei {

DesignSpace::DesignSpace(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() == 0 || lower_.size() != upper_.size())
    throw ConfigError("design space bounds must be non-empty and of equal length");
  for (Eigen::Index d = 0; d < lower_.size(); ++d)
    if (!(lower_[d] < upper_[d])) throw ConfigError("design space requires lower < upper");
}

DesignSpace DesignSpace::uniform(std::size_t dim, double lower, double upper) {
  const auto n = static_cast<Eigen::Index>(dim);
  return {Eigen::VectorXd::Constant(n, lower), Eigen::VectorXd::Constant(n, upper)};
}

Point DesignSpace::to_raw(const Point& unit) const {
  return lower_ + (upper_ - lower_).cwiseProduct(unit);
}

Point DesignSpace::to_unit(const Point& raw) const {
  return (raw - lower_).cwiseQuotient(upper_ - lower_);
}

void Dataset::add(const Point& x, double f) {
  points.push_back(x);
  values.push_back(f);
}

void Dataset::append(const Dataset& other) {
  points.insert(points.end(), other.points.begin(), other.points.end());
  values.insert(values.end(), other.values.begin(), other.values.end());
}

std::size_t Dataset::best_index() const {
  return static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
}

double Dataset::best_value() const { return values[best_index()]; }

Eigen::MatrixXd Dataset::points_matrix() const {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < size(); ++i) m.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  return m;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  for (auto i : indices) out.add(points.at(i), values.at(i));
  return out;
}

Standardized standardize(const std::vector<double>& values) {
  Standardized out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double sd = std::sqrt(ss / n);
  out.stddev = sd > 1e-12 * std::max(1.0, std::abs(out.mean)) ? sd : 1.0;
  out.values.reserve(values.size());
  for (double v : values) out.values.push_back((v - out.mean) / out.stddev);
  return out;
}

double unstandardize(double z, double mean, double stddev) { return z * stddev + mean; }

namespace {

std::uint32_t reverse_bits(std::uint32_t x) {
  x = ((x >> 1) & 0x55555555u) | ((x & 0x55555555u) << 1);
  x = ((x >> 2) & 0x33333333u) | ((x & 0x33333333u) << 2);
  x = ((x >> 4) & 0x0f0f0f0fu) | ((x & 0x0f0f0f0fu) << 4);
  x = ((x >> 8) & 0x00ff00ffu) | ((x & 0x00ff00ffu) << 8);
  return (x >> 16) | (x << 16);
}

// Hash whose output bit k depends only on input bits <= k (Laine-Karras form);
// applied to bit-reversed values this is a nested uniform (Owen) scramble.
std::uint32_t laine_karras_permutation(std::uint32_t x, std::uint32_t seed) {
  x += seed;
  x ^= x * 0x6c50b47cu;
  x ^= x * 0xb82f1e52u;
  x ^= x * 0xc7afe638u;
  x ^= x * 0x8d22f6e6u;
  return x;
}

std::uint32_t owen_scramble(std::uint32_t x, std::uint32_t seed) {
  return reverse_bits(laine_karras_permutation(reverse_bits(x), seed));
}

}  // namespace

std::size_t sobol_max_dim() { return boost::random::detail::qrng_tables::sobol::max_dimension; }

Eigen::MatrixXd sobol_points(std::size_t count, std::size_t dim, std::uint64_t seed) {
  if (dim == 0 || count == 0) throw ConfigError("sobol_points requires count >= 1 and dim >= 1");
  if (dim > sobol_max_dim())
    throw ConfigError("sobol_points: dimension " + std::to_string(dim) + " exceeds the supported limit " +
                      std::to_string(sobol_max_dim()));
  std::vector<std::uint32_t> dim_seeds(dim);
  for (std::size_t d = 0; d < dim; ++d) dim_seeds[d] = static_cast<std::uint32_t>(mix_seed(seed, d) >> 32);

  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));
  // boost's engine starts at the second Sobol point; the origin is prepended.
  boost::random::sobol_engine<std::uint32_t, 32> engine(dim);
  constexpr double scale = 1.0 / 4294967296.0;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      const std::uint32_t raw = i == 0 ? 0u : engine();
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
          static_cast<double>(owen_scramble(raw, dim_seeds[d])) * scale;
    }
  }
  return out;
}

namespace {

constexpr double kPi = std::numbers::pi;

double ackley(const Point& x) {
  const double n = static_cast<double>(x.size());
  const double sq = x.squaredNorm() / n;
  double c = 0.0;
  for (double v : x) c += std::cos(2.0 * kPi * v);
  return -20.0 * std::exp(-0.2 * std::sqrt(sq)) - std::exp(c / n) + 20.0 + std::numbers::e;
}

double rastrigin(const Point& x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * kPi * v);
  return s;
}

double rosenbrock(const Point& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double levy(const Point& x) {
  const Eigen::Index n = x.size();
  auto w = [&](Eigen::Index i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  const double w0 = w(0);
  double s = std::pow(std::sin(kPi * w0), 2);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double wi = w(i);
    s += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * std::pow(std::sin(kPi * wi + 1.0), 2));
  }
  const double wn = w(n - 1);
  s += (wn - 1.0) * (wn - 1.0) * (1.0 + std::pow(std::sin(2.0 * kPi * wn), 2));
  return s;
}

double styblinski_tang(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v * v * v - 16.0 * v * v + 5.0 * v;
  return 0.5 * s;
}

double sharp_broad(const Point& x) {
  const double v = x[0];
  const double sharp = (v - 0.15) / 0.012;
  const double broad = (v - 0.70) / 0.14;
  return -1.0 * std::exp(-0.5 * sharp * sharp) - 0.75 * std::exp(-0.5 * broad * broad);
}

}  // namespace

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"ackley", "rastrigin", "rosenbrock",
                                              "levy",   "styblinski_tang", "sharp_broad_1d"};
  return names;
}

ObjectiveFn benchmark_suite(const std::string& name, std::size_t dim) {
  if (dim == 0) throw ConfigError("benchmark dimension must be positive");
  if (name == "ackley")
    return {name, DesignSpace::uniform(dim, -32.768, 32.768), ackley, 0.0};
  if (name == "rastrigin")
    return {name, DesignSpace::uniform(dim, -5.12, 5.12), rastrigin, 0.0};
  if (name == "rosenbrock") {
    if (dim < 2) throw ConfigError("rosenbrock requires dim >= 2");
    return {name, DesignSpace::uniform(dim, -5.0, 10.0), rosenbrock, 0.0};
  }
  if (name == "levy") return {name, DesignSpace::uniform(dim, -10.0, 10.0), levy, 0.0};
  if (name == "styblinski_tang")
    return {name, DesignSpace::uniform(dim, -5.0, 5.0), styblinski_tang,
            -39.16616570377142 * static_cast<double>(dim)};
  if (name == "sharp_broad_1d") {
    if (dim != 1) throw ConfigError("sharp_broad_1d is one-dimensional");
    return {name, DesignSpace::uniform(1, 0.0, 1.0), sharp_broad, std::nullopt};
  }
  throw ConfigError("unknown benchmark '" + name + "'");
}

}  // namespace rei
