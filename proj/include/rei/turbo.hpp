#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rei/problem.hpp"
#include "rei/turbo_config.hpp"

namespace rei {

enum class RegionStatus { kActive, kCollapsed };

struct TrustRegion {
  Point center;
  double length = 0.8;
  int success_count = 0;
  int failure_count = 0;
  RegionStatus status = RegionStatus::kActive;
  Dataset local_data;  // samples gathered since this region was (re)started
};

/// Fresh region of base length cfg.l_init centered at the best local sample.
TrustRegion make_trust_region(Dataset local_data, const TurboConfig& cfg);

/// One success/failure step. An improvement on prev_best moves the center to
/// new_point; tau_succ consecutive successes double the length (capped at
/// l_max), tau_fail consecutive failures halve it, and a length below l_min
/// collapses the region. Counters reset whenever the length changes.
TrustRegion update_trust_region(TrustRegion tr, const Point& new_point, double new_value, double prev_best,
                                const TurboConfig& cfg);

enum class EventTag { kInit, kLocal, kRestartSelect, kRestartInit };

std::string to_string(EventTag tag);
EventTag parse_event_tag(const std::string& s);

struct RunRecord {
  std::uint64_t seed = 0;
  std::size_t eval_index = 0;  // 1-based, contiguous
  Point x;                     // unit-cube coordinates
  double value = 0.0;
  double best_so_far = 0.0;
  std::size_t region_id = 0;
  EventTag event = EventTag::kInit;
};

/// Thrown when the objective fails mid-run; carries the records so far.
class RunAborted : public std::runtime_error {
 public:
  RunAborted(const std::string& what, std::vector<RunRecord> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const std::vector<RunRecord>& partial() const { return partial_; }

 private:
  std::vector<RunRecord> partial_;
};

/// TuRBO-1: a single trust region, local GP on the region's samples, LogEI or
/// TS proposals, restart on collapse. Fresh regions are placed according to
/// cfg.selection. Deterministic given (cfg, seed).
std::vector<RunRecord> turbo1_run(const ObjectiveFn& objective, const TurboConfig& cfg, std::uint64_t seed);

/// TuRBO-m: m independent regions visited round-robin, one proposal (or one
/// batch) per visit. With qREI initialization the m starting regions are
/// chosen jointly (q = m); restarts select one region at a time (q = 1).
std::vector<RunRecord> turbo_m_run(const ObjectiveFn& objective, const TurboConfig& cfg, std::size_t m,
                                   std::uint64_t seed);

}  // namespace rei
