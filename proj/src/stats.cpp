#include "rei/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rei/acquisition.hpp"
#include "rei/error.hpp"

namespace rei {

namespace {

constexpr std::size_t kExactSignedRankMax = 20;
constexpr std::size_t kExactRankSumMax = 40;

// Sum over tie groups of t^3 - t.
double tie_term(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double t = static_cast<double>(j - i);
    s += t * t * t - t;
    i = j;
  }
  return s;
}

double two_sided(double p_le, double p_ge) { return std::min(1.0, 2.0 * std::min(p_le, p_ge)); }

double normal_two_sided(double z) { return std::min(1.0, 2.0 * normal_cdf(-std::abs(z))); }

}  // namespace

std::vector<double> midranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw ConfigError("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 5) throw ConfigError("signed-rank test needs paired samples of size >= 5");
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] - b[i] != 0.0) d.push_back(a[i] - b[i]);
  if (d.empty()) throw DegenerateInputError("all paired differences are zero");

  std::vector<double> mag(d.size());
  std::transform(d.begin(), d.end(), mag.begin(), [](double x) { return std::abs(x); });
  const std::vector<double> ranks = midranks(mag);
  const std::size_t n = d.size();

  if (n <= kExactSignedRankMax) {
    // Doubled midranks are integers; count sign patterns per doubled W+.
    std::vector<long> r2(n);
    long total = 0, w_obs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      r2[i] = std::lround(2.0 * ranks[i]);
      total += r2[i];
      if (d[i] > 0.0) w_obs += r2[i];
    }
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1.0;
    long reach = 0;
    for (long r : r2) {
      for (long s = reach; s >= 0; --s)
        if (count[static_cast<std::size_t>(s)] != 0.0) count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
      reach += r;
    }
    const double patterns = std::ldexp(1.0, static_cast<int>(n));
    double le = 0.0, ge = 0.0;
    for (long s = 0; s <= total; ++s) {
      if (s <= w_obs) le += count[static_cast<std::size_t>(s)];
      if (s >= w_obs) ge += count[static_cast<std::size_t>(s)];
    }
    return two_sided(le / patterns, ge / patterns);
  }

  double w_plus = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0.0) w_plus += ranks[i];
  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term(mag) / 48.0;
  return normal_two_sided((w_plus - mean) / std::sqrt(var));
}

double wilcoxon_rank_sum(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 4 || b.size() < 4) throw ConfigError("rank-sum test needs samples of size >= 4");
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<double> ranks = midranks(pooled);
  const std::size_t n1 = a.size(), n = pooled.size();

  if (n <= kExactRankSumMax) {
    std::vector<long> r2(n);
    long total = 0, obs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      r2[i] = std::lround(2.0 * ranks[i]);
      total += r2[i];
      if (i < n1) obs += r2[i];
    }
    // count[k][s]: subsets of size k with doubled rank sum s.
    const auto width = static_cast<std::size_t>(total) + 1;
    std::vector<double> count((n1 + 1) * width, 0.0);
    count[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = std::min(i + 1, n1); k >= 1; --k)
        for (std::size_t s = width - 1; s + 1 > static_cast<std::size_t>(r2[i]); --s)
          count[k * width + s] += count[(k - 1) * width + s - static_cast<std::size_t>(r2[i])];
    double all = 0.0, le = 0.0, ge = 0.0;
    for (std::size_t s = 0; s < width; ++s) {
      const double c = count[n1 * width + s];
      all += c;
      if (static_cast<long>(s) <= obs) le += c;
      if (static_cast<long>(s) >= obs) ge += c;
    }
    return two_sided(le / all, ge / all);
  }

  double r1 = 0.0;
  for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];
  const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(b.size()), dn = static_cast<double>(n);
  const double mean = dn1 * (dn + 1.0) / 2.0;
  const double var = dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term(pooled) / (dn * (dn - 1.0)));
  if (!(var > 0.0)) return 1.0;
  return normal_two_sided((r1 - mean) / std::sqrt(var));
}

}  // namespace rei
