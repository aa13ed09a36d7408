#pragma once

#include <vector>

namespace rei {

/// Paired two-sided signed-rank test on a - b. Zero differences are dropped;
/// exact null distribution (midranks for ties) when at most 20 remain, normal
/// approximation with tie correction otherwise.
/// Throws ConfigError unless |a| == |b| >= 5, DegenerateInputError if every
/// difference is zero.
double wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

/// Two-sided rank-sum test. Exact permutation distribution of the rank sum of
/// `a` (midranks for ties) when |a| + |b| <= 40, tie-corrected normal
/// approximation otherwise. Throws ConfigError unless |a|, |b| >= 4.
double wilcoxon_rank_sum(const std::vector<double>& a, const std::vector<double>& b);

/// Midranks (1-based) of v.
std::vector<double> midranks(const std::vector<double>& v);

/// Linear-interpolation quantile (R type 7) of unsorted values.
double quantile(std::vector<double> v, double p);

}  // namespace rei
