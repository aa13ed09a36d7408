#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rei/box.hpp"
#include "rei/gp.hpp"

namespace rei {

/// Candidate trust region: center in [0,1]^D and per-dimension side lengths.
struct RegionGeometry {
  Point center;
  Eigen::VectorXd lengths;
};

/// prod_d [max(c_d - l_d/2, 0), min(c_d + l_d/2, 1)].
Box region_bounds(const RegionGeometry& geom);

/// Pointwise acquisition that gets averaged over a region.
enum class RegionalBase { kEi, kLogEi, kUcb, kQImprovement };

RegionalBase parse_regional_base(const std::string& name);
std::string to_string(RegionalBase base);

struct RegionalAcqSpec {
  RegionalBase base = RegionalBase::kQImprovement;
  std::size_t n_x = 128;  // region points per evaluation
  std::size_t n_f = 256;  // posterior draws (kQImprovement only)
  std::size_t q = 1;      // regions scored jointly (kQImprovement only)
  std::uint64_t base_sample_seed = 0;
  double ucb_beta = 4.0;
};

/// Region-averaged acquisition over a fixed model with frozen base samples:
/// the scrambled Sobol points in the unit cube and, for kQImprovement, the
/// standard normals behind the posterior draws are drawn once at
/// construction. Evaluating at different centers therefore scores every
/// candidate with common random numbers, making the value a deterministic
/// function of the regions. The model must outlive this object.
class RegionalAcquisition {
 public:
  RegionalAcquisition(const GpModel& model, RegionalAcqSpec spec, double f_ref);

  /// Scores `regions` (size q for kQImprovement, size 1 otherwise).
  /// kEi/kUcb/kQImprovement return averages; kLogEi returns the log of the
  /// average EI computed by log-mean-exp over pointwise LogEI.
  double operator()(const std::vector<RegionGeometry>& regions) const;

  /// Points at which a region is evaluated (rows), i.e. the unit block for
  /// region `slot` mapped into region_bounds(geom).
  Eigen::MatrixXd region_points(const RegionGeometry& geom, std::size_t slot = 0) const;

  const RegionalAcqSpec& spec() const { return spec_; }

 private:
  double score_q(const std::vector<RegionGeometry>& regions) const;

  const GpModel* model_;
  RegionalAcqSpec spec_;
  double f_ref_;
  Eigen::MatrixXd unit_points_;   // n_x x (q * D)
  Eigen::MatrixXd base_normals_;  // n_f x (q * n_x), empty unless kQImprovement
};

/// Mean EI over n_x scrambled Sobol points in the region.
double rei(const GpModel& model, const RegionGeometry& geom, double f_ref, std::size_t n_x, std::uint64_t seed);

/// log of the region-averaged EI, computed stably from pointwise LogEI.
double log_rei(const GpModel& model, const RegionGeometry& geom, double f_ref, std::size_t n_x,
               std::uint64_t seed);

/// Mean of ucb_min over the region's points.
double rucb(const GpModel& model, const RegionGeometry& geom, double beta, std::size_t n_x, std::uint64_t seed);

/// Monte Carlo regional EI over q jointly scored regions: the mean over region
/// points j and posterior draws k of max(f_ref - min_i TS_k(x_j^(i)), 0).
/// For q = 1 this is the plain qREI estimator.
double qrei(const GpModel& model, const std::vector<RegionGeometry>& geoms, double f_ref,
            const RegionalAcqSpec& spec);

}  // namespace rei
