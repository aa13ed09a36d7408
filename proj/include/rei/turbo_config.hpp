#pragma once

#include <cmath>
#include <cstddef>

#include "rei/gp.hpp"
#include "rei/inner_opt.hpp"
#include "rei/regional.hpp"

namespace rei {

enum class LocalAcquisition { kLogEi, kTs };

/// How a fresh trust region is placed at the start of a run and after a collapse.
enum class SelectionMode {
  kRandom,            // new random initial design over the cube
  kQreiInitRestart,   // region selection at initialization and at every restart
  kQreiRestartOnly,   // random initial design, region selection at restarts
};

/// Acquisition maximized over centers during region selection.
enum class SelectionAcquisition { kQrei, kRei, kLogRei, kRucb, kLogEi };

struct TurboConfig {
  double l_init = 0.8;
  double l_min = 0.0078125;  // 0.5^7
  double l_max = 1.6;
  int tau_succ = 10;
  int tau_fail = 0;  // 0 means D
  std::size_t n_init = 30;
  std::size_t budget = 100;
  std::size_t batch = 1;
  LocalAcquisition acquisition = LocalAcquisition::kLogEi;
  SelectionMode selection = SelectionMode::kRandom;
  SelectionAcquisition selection_acquisition = SelectionAcquisition::kQrei;
  /// MC settings for region selection; base_sample_seed is re-derived per selection event.
  RegionalAcqSpec regional{};
  /// Scale selection-time lengths by the global model's lengthscales (else isotropic l_init).
  bool shaped_selection_lengths = true;
  MultiStartConfig local_inner{};
  MultiStartConfig selection_inner{};
  FitConfig fit{};
  /// Restarts for local refits once the region has warm-start hyperparameters
  /// (the warm start plus refit_restarts - 1 Sobol starts); 0 keeps fit.n_restarts.
  int refit_restarts = 0;
  /// GP training sets larger than this are reduced by select_representatives (0 disables).
  std::size_t n_gp = 500;
  std::size_t n_ts_candidates = 0;  // 0: default_ts_candidates(D)
  double fd_step = 1e-4;
  /// Plain GP-BO: one region covering the whole cube that is never resized.
  bool global_model = false;

  int effective_tau_fail(std::size_t dim) const { return tau_fail > 0 ? tau_fail : static_cast<int>(dim); }
  /// Throws ConfigError when the settings are inconsistent.
  void validate(std::size_t dim) const;
};

}  // namespace rei
