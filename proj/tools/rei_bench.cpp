// rei_bench: experiment runner, plotting, statistics and theory self-test.
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rei/error.hpp"
#include "rei/experiment.hpp"
#include "rei/stats.hpp"
#include "rei/theory.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_methods(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& r : raw) {
    std::size_t start = 0;
    while (start <= r.size()) {
      const auto comma = r.find(',', start);
      const auto piece = r.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!piece.empty()) out.push_back(piece);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

void report_comparison(const std::string& a_name, const std::vector<double>& a, const std::string& b_name,
                       const std::vector<double>& b) {
  std::printf("%-36s median %.6g (n=%zu)\n", a_name.c_str(), a.empty() ? 0.0 : rei::quantile(a, 0.5), a.size());
  std::printf("%-36s median %.6g (n=%zu)\n", b_name.c_str(), b.empty() ? 0.0 : rei::quantile(b, 0.5), b.size());
  if (a.size() == b.size() && a.size() >= 5) {
    try {
      std::printf("signed-rank p = %.6g\n", rei::wilcoxon_signed_rank(a, b));
    } catch (const rei::DegenerateInputError& e) {
      std::printf("signed-rank p undefined: %s\n", e.what());
    }
  }
  if (a.size() >= 4 && b.size() >= 4) std::printf("rank-sum p = %.6g\n", rei::wilcoxon_rank_sum(a, b));
}

std::vector<double> final_bests_in(const fs::path& dir) {
  std::map<std::uint64_t, double> by_seed;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("seed_", 0) != 0 || entry.path().extension() != ".csv") continue;
    const auto records = rei::read_run_csv(entry.path());
    if (!records.empty()) by_seed[records.front().seed] = records.back().best_so_far;
  }
  if (by_seed.empty()) throw rei::ConfigError("no run CSVs in " + dir.string());
  std::vector<double> out;
  for (const auto& [seed, v] : by_seed) out.push_back(v);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-region Bayesian optimization benchmark harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run (method, seed) experiments and write CSV traces");
  std::string config_path, problem, seeds_text, out_dir, plot_path;
  std::vector<std::string> methods;
  std::size_t dim = 0, budget = 0, n_init = 0, batch = 0, m = 0;
  bool log_y = false;
  run->add_option("--config", config_path, "JSON experiment config");
  run->add_option("--problem", problem, "benchmark name");
  run->add_option("--dim", dim, "problem dimension");
  run->add_option("--method", methods, "method id(s), repeatable or comma separated");
  run->add_option("--budget", budget, "evaluations per run");
  run->add_option("--n-init", n_init, "initial design size");
  run->add_option("--seeds", seeds_text, "seed range a-b or list a,b,c");
  run->add_option("--batch", batch, "proposals per local step");
  run->add_option("--m", m, "trust regions for turbom-* methods");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--plot", plot_path, "also write a convergence SVG here");
  run->add_flag("--log-y", log_y, "log-scale y axis for --plot");

  auto* plot = app.add_subcommand("plot", "render aggregate CSVs as an SVG");
  std::vector<std::string> plot_inputs;
  std::string plot_out;
  bool plot_log_y = false;
  plot->add_option("inputs", plot_inputs, "aggregate CSV files")->required();
  plot->add_option("--out", plot_out, "SVG path")->required();
  plot->add_flag("--log-y", plot_log_y, "log-scale y axis");

  auto* stats = app.add_subcommand("stats", "compare final best values of two run directories");
  std::string dir_a, dir_b;
  stats->add_option("dir_a", dir_a, "run directory of method A")->required();
  stats->add_option("dir_b", dir_b, "run directory of method B")->required();

  auto* selftest = app.add_subcommand("selftest", "numerical checks of the region-averaging theory");
  std::uint64_t selftest_seed = 0;
  selftest->add_option("--seed", selftest_seed, "seed for the random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      rei::ExperimentConfig cfg = config_path.empty() ? rei::ExperimentConfig{} : rei::load_experiment_config(config_path);
      if (!problem.empty()) cfg.problem = problem;
      if (dim > 0) cfg.dim = dim;
      if (!methods.empty()) cfg.methods = split_methods(methods);
      if (budget > 0) cfg.turbo.budget = budget;
      if (n_init > 0) cfg.turbo.n_init = n_init;
      if (batch > 0) cfg.turbo.batch = batch;
      if (m > 0) cfg.m = m;
      if (!seeds_text.empty()) cfg.seeds = rei::parse_seed_list(seeds_text);
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      cfg.validate();

      const auto summary = rei::run_experiment(cfg);
      for (const auto& r : summary.runs) {
        if (r.ok)
          std::printf("%s seed %llu: %zu evaluations, best %.10g\n", r.method.c_str(),
                      static_cast<unsigned long long>(r.seed), r.evaluations, r.final_best);
        else
          std::printf("%s seed %llu: FAILED after %zu evaluations: %s\n", r.method.c_str(),
                      static_cast<unsigned long long>(r.seed), r.evaluations, r.error.c_str());
      }
      if (cfg.methods.size() == 2)
        report_comparison(cfg.methods[0], summary.final_bests(cfg.methods[0]), cfg.methods[1],
                          summary.final_bests(cfg.methods[1]));
      if (!plot_path.empty()) {
        std::vector<rei::Aggregate> aggs;
        for (const auto& method : cfg.methods) aggs.push_back(rei::read_aggregate_csv(summary.aggregates.at(method)));
        rei::emit_convergence_plot(aggs, plot_path, log_y);
      }
      return summary.all_ok() ? 0 : 2;
    }
    if (*plot) {
      std::vector<rei::Aggregate> aggs;
      for (const auto& p : plot_inputs) aggs.push_back(rei::read_aggregate_csv(p));
      rei::emit_convergence_plot(aggs, plot_out, plot_log_y);
      return 0;
    }
    if (*stats) {
      report_comparison(fs::path(dir_a).filename().string(), final_bests_in(dir_a),
                        fs::path(dir_b).filename().string(), final_bests_in(dir_b));
      return 0;
    }
    if (*selftest) {
      bool ok = true;
      for (const auto& item : rei::theory::run_selftest(selftest_seed)) {
        std::printf("%s %s: %s\n", item.passed ? "PASS" : "FAIL", item.name.c_str(), item.detail.c_str());
        ok = ok && item.passed;
      }
      return ok ? 0 : 2;
    }
  } catch (const rei::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
