#include "rei/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rei/error.hpp"
#include "rei/parallel.hpp"
#include "rei/problem.hpp"
#include "rei/stats.hpp"

namespace rei {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ConfigError("malformed number '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("malformed non-negative integer '" + s + "'");
  return std::stoull(s);
}

SelectionAcquisition parse_selection_acquisition(const std::string& s) {
  if (s == "qrei") return SelectionAcquisition::kQrei;
  if (s == "rei") return SelectionAcquisition::kRei;
  if (s == "logrei") return SelectionAcquisition::kLogRei;
  if (s == "rucb") return SelectionAcquisition::kRucb;
  if (s == "logei") return SelectionAcquisition::kLogEi;
  throw ConfigError("unknown region-selection acquisition '" + s + "'");
}

using nlohmann::json;

template <typename T>
void maybe(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

void read_lbfgs(const json& j, LbfgsOptions& o) {
  maybe(j, "max_iters", o.max_iters);
  maybe(j, "memory", o.memory);
  maybe(j, "pg_tol", o.pg_tol);
  maybe(j, "f_rel_tol", o.f_rel_tol);
}

void read_multistart(const json& j, MultiStartConfig& c) {
  maybe(j, "n_raw", c.n_raw);
  maybe(j, "n_restarts", c.n_restarts);
  if (j.contains("local")) read_lbfgs(j.at("local"), c.local);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"problem", "dim", "methods", "seeds", "m", "out",
                                          "budget", "n_init", "batch", "turbo"};
  return keys;
}

void read_turbo(const json& j, TurboConfig& t) {
  maybe(j, "l_init", t.l_init);
  maybe(j, "l_min", t.l_min);
  maybe(j, "l_max", t.l_max);
  maybe(j, "tau_succ", t.tau_succ);
  maybe(j, "tau_fail", t.tau_fail);
  maybe(j, "n_gp", t.n_gp);
  maybe(j, "refit_restarts", t.refit_restarts);
  maybe(j, "n_ts_candidates", t.n_ts_candidates);
  maybe(j, "fd_step", t.fd_step);
  maybe(j, "shaped_selection_lengths", t.shaped_selection_lengths);
  if (j.contains("regional")) {
    const json& r = j.at("regional");
    if (r.contains("base")) t.regional.base = parse_regional_base(r.at("base").get<std::string>());
    maybe(r, "n_x", t.regional.n_x);
    maybe(r, "n_f", t.regional.n_f);
    maybe(r, "ucb_beta", t.regional.ucb_beta);
  }
  if (j.contains("fit")) {
    const json& f = j.at("fit");
    maybe(f, "n_restarts", t.fit.n_restarts);
    if (f.contains("local")) read_lbfgs(f.at("local"), t.fit.local);
  }
  if (j.contains("local_inner")) read_multistart(j.at("local_inner"), t.local_inner);
  if (j.contains("selection_inner")) read_multistart(j.at("selection_inner"), t.selection_inner);
}

}  // namespace

MethodSpec parse_method(const std::string& id) {
  MethodSpec spec;
  spec.id = id;
  if (id == "gp-logei") {
    spec.global_model = true;
    return spec;
  }
  const auto parts = split(id, '-');
  if (parts.size() < 2 || parts.size() > 4) throw ConfigError("unknown method id '" + id + "'");
  if (parts[0] == "turbom")
    spec.multi_region = true;
  else if (parts[0] != "turbo1")
    throw ConfigError("unknown method id '" + id + "'");
  if (parts[1] == "ts")
    spec.acquisition = LocalAcquisition::kTs;
  else if (parts[1] != "logei")
    throw ConfigError("unknown local acquisition in method id '" + id + "'");
  if (parts.size() >= 3) {
    spec.selection_acquisition = parse_selection_acquisition(parts[2]);
    spec.selection = SelectionMode::kQreiInitRestart;
  }
  if (parts.size() == 4) {
    if (parts[3] != "restart") throw ConfigError("unknown method suffix in '" + id + "'");
    spec.selection = SelectionMode::kQreiRestartOnly;
  }
  return spec;
}

TurboConfig apply_method(const MethodSpec& method, TurboConfig base) {
  base.global_model = method.global_model;
  base.acquisition = method.acquisition;
  base.selection = method.selection;
  base.selection_acquisition = method.selection_acquisition;
  return base;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("at least one method is required");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  const ObjectiveFn objective = benchmark_suite(problem, dim);
  for (const auto& id : methods) {
    const MethodSpec spec = parse_method(id);
    const TurboConfig t = apply_method(spec, turbo);
    t.validate(objective.dim());
    if (spec.multi_region && m < 1) throw ConfigError("m must be >= 1");
    if (spec.multi_region && m > 1 && spec.selection == SelectionMode::kQreiInitRestart &&
        spec.selection_acquisition != SelectionAcquisition::kQrei)
      throw ConfigError("joint selection of several regions requires qrei (method '" + id + "')");
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
  ExperimentConfig cfg;
  try {
    maybe(j, "problem", cfg.problem);
    maybe(j, "dim", cfg.dim);
    maybe(j, "methods", cfg.methods);
    maybe(j, "m", cfg.m);
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    if (j.contains("seeds")) {
      const json& s = j.at("seeds");
      cfg.seeds = s.is_string() ? parse_seed_list(s.get<std::string>()) : s.get<std::vector<std::uint64_t>>();
    }
    maybe(j, "budget", cfg.turbo.budget);
    maybe(j, "n_init", cfg.turbo.n_init);
    maybe(j, "batch", cfg.turbo.batch);
    if (j.contains("turbo")) read_turbo(j.at("turbo"), cfg.turbo);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto dash = text.find('-');
  if (dash != std::string::npos && text.find(',') == std::string::npos) {
    const std::uint64_t lo = parse_u64(text.substr(0, dash)), hi = parse_u64(text.substr(dash + 1));
    if (hi < lo) throw ConfigError("empty seed range '" + text + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  for (const auto& part : split(text, ',')) seeds.push_back(parse_u64(part));
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

bool ExperimentSummary::all_ok() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunOutcome& r) { return r.ok; });
}

std::vector<double> ExperimentSummary::final_bests(const std::string& method) const {
  std::vector<double> out;
  for (const auto& r : runs)
    if (r.method == method && r.ok) out.push_back(r.final_best);
  return out;
}

void write_run_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records, std::size_t dim) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "seed,eval_index,event,region_id,f,best_f";
  for (std::size_t d = 1; d <= dim; ++d) out << ",x_" << d;
  out << '\n';
  for (const auto& r : records) {
    out << r.seed << ',' << r.eval_index << ',' << to_string(r.event) << ',' << r.region_id << ','
        << fmt17(r.value) << ',' << fmt17(r.best_so_far);
    for (Eigen::Index d = 0; d < r.x.size(); ++d) out << ',' << fmt17(r.x[d]);
    out << '\n';
  }
}

std::vector<RunRecord> read_run_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open run CSV " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty run CSV " + path.string());
  const auto header = split(line, ',');
  const std::vector<std::string> fixed{"seed", "eval_index", "event", "region_id", "f", "best_f"};
  if (header.size() < fixed.size() || !std::equal(fixed.begin(), fixed.end(), header.begin()))
    throw ConfigError("unexpected run CSV header in " + path.string());
  const std::size_t dim = header.size() - fixed.size();
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != header.size()) throw ConfigError("ragged row in " + path.string());
    RunRecord r;
    r.seed = parse_u64(cols[0]);
    r.eval_index = static_cast<std::size_t>(parse_u64(cols[1]));
    r.event = parse_event_tag(cols[2]);
    r.region_id = static_cast<std::size_t>(parse_u64(cols[3]));
    r.value = parse_double(cols[4]);
    r.best_so_far = parse_double(cols[5]);
    r.x.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t d = 0; d < dim; ++d) r.x[static_cast<Eigen::Index>(d)] = parse_double(cols[6 + d]);
    records.push_back(std::move(r));
  }
  return records;
}

Aggregate aggregate_runs(const std::string& method, const std::vector<std::vector<RunRecord>>& runs) {
  Aggregate agg;
  agg.method = method;
  std::size_t longest = 0;
  for (const auto& r : runs) longest = std::max(longest, r.size());
  for (std::size_t t = 0; t < longest; ++t) {
    std::vector<double> v;
    for (const auto& r : runs)
      if (t < r.size()) v.push_back(r[t].best_so_far);
    AggregateRow row;
    row.eval_index = t + 1;
    row.n_runs = v.size();
    double sum = 0.0;
    for (double x : v) sum += x;
    row.mean = sum / static_cast<double>(v.size());
    row.median = quantile(v, 0.5);
    row.q25 = quantile(v, 0.25);
    row.q75 = quantile(v, 0.75);
    agg.rows.push_back(row);
  }
  return agg;
}

void write_aggregate_csv(const std::filesystem::path& path, const Aggregate& agg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "method,eval_index,n_runs,mean,median,q25,q75\n";
  for (const auto& r : agg.rows)
    out << agg.method << ',' << r.eval_index << ',' << r.n_runs << ',' << fmt17(r.mean) << ',' << fmt17(r.median)
        << ',' << fmt17(r.q25) << ',' << fmt17(r.q75) << '\n';
}

Aggregate read_aggregate_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open aggregate CSV " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "method,eval_index,n_runs,mean,median,q25,q75")
    throw ConfigError("unexpected aggregate CSV header in " + path.string());
  Aggregate agg;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line, ',');
    if (c.size() != 7) throw ConfigError("ragged row in " + path.string());
    agg.method = c[0];
    agg.rows.push_back({static_cast<std::size_t>(parse_u64(c[1])), static_cast<std::size_t>(parse_u64(c[2])),
                        parse_double(c[3]), parse_double(c[4]), parse_double(c[5]), parse_double(c[6])});
  }
  return agg;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ObjectiveFn objective = benchmark_suite(cfg.problem, cfg.dim);
  std::filesystem::create_directories(cfg.out_dir);

  ExperimentSummary summary;
  for (const auto& method : cfg.methods) {
    std::filesystem::create_directories(cfg.out_dir / method);
    for (auto seed : cfg.seeds) {
      RunOutcome r;
      r.method = method;
      r.seed = seed;
      summary.runs.push_back(r);
    }
  }
  std::vector<std::vector<RunRecord>> traces(summary.runs.size());

  parallel_for(summary.runs.size(), [&](std::size_t i) {
    RunOutcome& out = summary.runs[i];
    const MethodSpec spec = parse_method(out.method);
    const TurboConfig tc = apply_method(spec, cfg.turbo);
    try {
      traces[i] = spec.multi_region ? turbo_m_run(objective, tc, cfg.m, out.seed) : turbo1_run(objective, tc, out.seed);
    } catch (const RunAborted& e) {
      traces[i] = e.partial();
      out.ok = false;
      out.error = e.what();
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
    out.evaluations = traces[i].size();
    out.final_best = traces[i].empty() ? std::numeric_limits<double>::quiet_NaN() : traces[i].back().best_so_far;
    out.csv = cfg.out_dir / out.method / ("seed_" + std::to_string(out.seed) + ".csv");
    write_run_csv(out.csv, traces[i], objective.dim());
  });

  for (const auto& method : cfg.methods) {
    std::vector<std::vector<RunRecord>> runs;
    for (std::size_t i = 0; i < summary.runs.size(); ++i)
      if (summary.runs[i].method == method && !traces[i].empty()) runs.push_back(std::move(traces[i]));
    const auto path = cfg.out_dir / method / "aggregate.csv";
    write_aggregate_csv(path, aggregate_runs(method, runs));
    summary.aggregates[method] = path;
  }
  return summary;
}

void emit_convergence_plot(const std::vector<Aggregate>& aggregates, const std::filesystem::path& path, bool log_y) {
  if (aggregates.empty()) throw ConfigError("no aggregate data to plot");
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& a : aggregates) {
    if (a.rows.empty()) throw ConfigError("aggregate for '" + a.method + "' has no rows");
    for (const auto& r : a.rows) {
      if (log_y && !(r.mean > 0.0)) throw ConfigError("log-scale plot needs positive means");
      const double y = log_y ? std::log10(r.mean) : r.mean;
      x_min = std::min(x_min, static_cast<double>(r.eval_index));
      x_max = std::max(x_max, static_cast<double>(r.eval_index));
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double width = 800, height = 500, left = 80, right = 620, top = 30, bottom = 450;
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (right - left); };
  auto py = [&](double y) { return bottom - (y - y_min) / (y_max - y_min) * (bottom - top); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
      << "<g id=\"plot-area\" data-left=\"" << left << "\" data-right=\"" << right << "\" data-top=\"" << top
      << "\" data-bottom=\"" << bottom << "\" data-x-min=\"" << fmt17(x_min) << "\" data-x-max=\"" << fmt17(x_max)
      << "\" data-y-min=\"" << fmt17(y_min) << "\" data-y-max=\"" << fmt17(y_max) << "\" data-log-y=\""
      << (log_y ? 1 : 0) << "\">\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left << "\" height=\"" << bottom - top
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < aggregates.size(); ++i) {
    out << "<polyline class=\"curve\" data-method=\"" << aggregates[i].method << "\" fill=\"none\" stroke=\""
        << colors[i % std::size(colors)] << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& r : aggregates[i].rows) {
      const double y = log_y ? std::log10(r.mean) : r.mean;
      out << (first ? "" : " ") << fmt17(px(static_cast<double>(r.eval_index))) << ',' << fmt17(py(y));
      first = false;
    }
    out << "\"/>\n";
  }
  out << "</g>\n";
  auto text = [&](double x, double y, const std::string& s, const char* anchor) {
    out << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"12\" text-anchor=\"" << anchor << "\">" << s
        << "</text>\n";
  };
  text((left + right) / 2, bottom + 35, "evaluations", "middle");
  text(left - 8, bottom, fmt17(log_y ? std::pow(10.0, y_min) : y_min), "end");
  text(left - 8, top + 10, fmt17(log_y ? std::pow(10.0, y_max) : y_max), "end");
  text(left, bottom + 18, fmt17(x_min), "middle");
  text(right, bottom + 18, fmt17(x_max), "middle");
  out << "<g id=\"legend\">\n";
  for (std::size_t i = 0; i < aggregates.size(); ++i) {
    const double y = top + 20.0 * static_cast<double>(i + 1);
    out << "<line x1=\"" << right + 15 << "\" y1=\"" << y - 4 << "\" x2=\"" << right + 35 << "\" y2=\"" << y - 4
        << "\" stroke=\"" << colors[i % std::size(colors)] << "\" stroke-width=\"2\"/>\n";
    text(right + 40, y, aggregates[i].method, "start");
  }
  out << "</g>\n</svg>\n";
}

}  // namespace rei
