#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rei/turbo.hpp"
#include "rei/turbo_config.hpp"

namespace rei {

/// Loop configuration behind a method id.
///   gp-logei
///   turbo1-{logei,ts}[-{qrei,rei,logrei,rucb,logei}[-restart]]
///   turbom-{logei,ts}[-{qrei,rei,logrei,rucb,logei}[-restart]]
/// A selection suffix switches on region selection at initialization and at
/// restarts; "-restart" limits it to restarts.
struct MethodSpec {
  std::string id;
  bool multi_region = false;
  bool global_model = false;
  LocalAcquisition acquisition = LocalAcquisition::kLogEi;
  SelectionMode selection = SelectionMode::kRandom;
  SelectionAcquisition selection_acquisition = SelectionAcquisition::kQrei;
};

/// Throws ConfigError for ids outside the grammar above.
MethodSpec parse_method(const std::string& id);

/// base with the method's loop settings applied.
TurboConfig apply_method(const MethodSpec& method, TurboConfig base);

struct ExperimentConfig {
  std::string problem = "ackley";
  std::size_t dim = 2;
  std::vector<std::string> methods{"turbo1-logei"};
  std::vector<std::uint64_t> seeds{0};
  std::size_t m = 2;  // regions for turbom-* methods
  std::filesystem::path out_dir = "rei_out";
  TurboConfig turbo{};  // budget, n_init, batch and all loop overrides

  /// Throws ConfigError on unknown problems/methods or inconsistent settings.
  void validate() const;
};

/// Reads a JSON config. Top-level keys: problem, dim, methods, seeds, m, out,
/// budget, n_init, batch, and a "turbo" section whose keys mirror TurboConfig
/// with nested "regional", "fit", "local_inner" and "selection_inner" sections.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Parses "0-10" (inclusive range) or "1,4,7" into a seed list.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

struct RunOutcome {
  std::string method;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  std::size_t evaluations = 0;
  double final_best = 0.0;
  std::filesystem::path csv;
};

struct ExperimentSummary {
  std::vector<RunOutcome> runs;  // method-major, then seed order
  std::map<std::string, std::filesystem::path> aggregates;
  bool all_ok() const;
  /// Final best_f per seed (successful runs only), in seed order.
  std::vector<double> final_bests(const std::string& method) const;
};

/// Runs every (method, seed) pair concurrently. Writes
/// out/<method>/seed_<seed>.csv per run and out/<method>/aggregate.csv per
/// method. A failing run keeps its partial trace and does not stop the rest.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Run CSV: seed, eval_index, event, region_id, f, best_f, x_1..x_D.
void write_run_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records, std::size_t dim);
std::vector<RunRecord> read_run_csv(const std::filesystem::path& path);

struct AggregateRow {
  std::size_t eval_index = 0;
  std::size_t n_runs = 0;
  double mean = 0.0, median = 0.0, q25 = 0.0, q75 = 0.0;
};

struct Aggregate {
  std::string method;
  std::vector<AggregateRow> rows;
};

/// Per-evaluation statistics of best_so_far across runs; index t uses the
/// runs that reached t evaluations.
Aggregate aggregate_runs(const std::string& method, const std::vector<std::vector<RunRecord>>& runs);
void write_aggregate_csv(const std::filesystem::path& path, const Aggregate& agg);
Aggregate read_aggregate_csv(const std::filesystem::path& path);

/// SVG with one mean-best curve per aggregate. The plot-area group carries
/// its pixel frame and data ranges as data-* attributes. Throws ConfigError
/// on empty input, or on non-positive means when log_y is set.
void emit_convergence_plot(const std::vector<Aggregate>& aggregates, const std::filesystem::path& path,
                           bool log_y = false);

}  // namespace rei
