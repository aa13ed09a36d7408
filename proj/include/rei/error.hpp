#pragma once

#include <stdexcept>
#include <string>

namespace rei {

/// Invalid user-facing configuration (unknown names, out-of-range settings).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cholesky failed even at the largest jitter level.
class ModelFitError : public std::runtime_error {
 public:
  ModelFitError(const std::string& what, double last_jitter)
      : std::runtime_error(what), last_jitter_(last_jitter) {}
  double last_jitter() const noexcept { return last_jitter_; }

 private:
  double last_jitter_;
};

/// Input for which a statistic is undefined (all-equal values, zero differences).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rei
