// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "priorgsa/io.hpp"
#include "priorgsa/lhs.hpp"
#include "priorgsa/linear_problem.hpp"
#include "priorgsa/pick_freeze.hpp"
#include "priorgsa/seir.hpp"
#include "priorgsa/stats.hpp"

namespace priorgsa {

namespace {

using nlohmann::json;

std::string hash_hex(const std::string& bytes) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(bytes)));
  return buf;
}

// Strict object walker: consumed keys are tracked, leftovers are violations.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path, std::vector<std::string>& violations)
      : node_(node), path_(std::move(path)), violations_(violations) {
    if (!node_.is_object()) {
      violations_.push_back(path_ + ": expected an object");
      ok_ = false;
    }
  }

  bool ok() const { return ok_; }

  const json* take(const std::string& key) {
    if (!ok_) return nullptr;
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  bool take_string(const std::string& key, std::string& out) {
    const json* v = take(key);
    if (!v) return false;
    if (!v->is_string()) {
      violations_.push_back(path_ + "." + key + ": expected a string");
      return false;
    }
    out = v->get<std::string>();
    return true;
  }

  bool take_bool(const std::string& key, bool& out) {
    const json* v = take(key);
    if (!v) return false;
    if (!v->is_boolean()) {
      violations_.push_back(path_ + "." + key + ": expected a boolean");
      return false;
    }
    out = v->get<bool>();
    return true;
  }

  bool take_number(const std::string& key, double& out) {
    const json* v = take(key);
    if (!v) return false;
    if (!v->is_number()) {
      violations_.push_back(path_ + "." + key + ": expected a number");
      return false;
    }
    out = v->get<double>();
    return true;
  }

  bool take_int(const std::string& key, long& out) {
    const json* v = take(key);
    if (!v) return false;
    if (!v->is_number_integer()) {
      violations_.push_back(path_ + "." + key + ": expected an integer");
      return false;
    }
    out = v->get<long>();
    return true;
  }

  bool take_uint(const std::string& key, std::uint64_t& out) {
    const json* v = take(key);
    if (!v) return false;
    if (v->is_number_unsigned()) {
      out = v->get<std::uint64_t>();
      return true;
    }
    if (v->is_number_integer() && v->get<long long>() >= 0) {
      out = static_cast<std::uint64_t>(v->get<long long>());
      return true;
    }
    violations_.push_back(path_ + "." + key + ": expected a non-negative integer");
    return false;
  }

  bool take_numbers(const std::string& key, std::vector<double>& out) {
    const json* v = take(key);
    if (!v) return false;
    if (!v->is_array()) {
      violations_.push_back(path_ + "." + key + ": expected an array of numbers");
      return false;
    }
    out.clear();
    for (const auto& e : *v) {
      if (!e.is_number()) {
        violations_.push_back(path_ + "." + key + ": expected an array of numbers");
        return false;
      }
      out.push_back(e.get<double>());
    }
    return true;
  }

  bool take_ints(const std::string& key, std::vector<long>& out) {
    const json* v = take(key);
    if (!v) return false;
    if (!v->is_array()) {
      violations_.push_back(path_ + "." + key + ": expected an array of integers");
      return false;
    }
    out.clear();
    for (const auto& e : *v) {
      if (!e.is_number_integer()) {
        violations_.push_back(path_ + "." + key + ": expected an array of integers");
        return false;
      }
      out.push_back(e.get<long>());
    }
    return true;
  }

  bool take_strings(const std::string& key, std::vector<std::string>& out) {
    const json* v = take(key);
    if (!v) return false;
    if (!v->is_array()) {
      violations_.push_back(path_ + "." + key + ": expected an array of strings");
      return false;
    }
    out.clear();
    for (const auto& e : *v) {
      if (!e.is_string()) {
        violations_.push_back(path_ + "." + key + ": expected an array of strings");
        return false;
      }
      out.push_back(e.get<std::string>());
    }
    return true;
  }

  void finish() {
    if (!ok_) return;
    for (const auto& item : node_.items())
      if (!seen_.count(item.key()))
        violations_.push_back(path_ + ": unknown key '" + item.key() + "'");
  }

 private:
  const json& node_;
  std::string path_;
  std::vector<std::string>& violations_;
  std::set<std::string> seen_;
  bool ok_ = true;
};

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<long>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i];
  return out;
}

void parse_box(const json& node, RunConfig& cfg, std::vector<std::string>& violations) {
  ObjectReader r(node, "box", violations);
  std::vector<std::string> names;
  std::vector<double> lower, upper;
  const bool have = r.take_strings("names", names) & r.take_numbers("lower", lower) &
                    r.take_numbers("upper", upper);
  r.finish();
  if (!have) {
    violations.push_back("box: requires 'names', 'lower', and 'upper'");
    return;
  }
  if (names.size() != lower.size() || names.size() != upper.size() || names.empty()) {
    violations.push_back("box: 'names', 'lower', and 'upper' must have equal nonzero length");
    return;
  }
  bool sane = true;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!(lower[i] < upper[i])) {
      violations.push_back("box: '" + names[i] + "' needs lower < upper");
      sane = false;
    }
  if (!sane) return;
  try {
    cfg.box.emplace(names, to_vector(lower), to_vector(upper));
  } catch (const std::exception& e) {
    violations.push_back(std::string("box: ") + e.what());
  }
}

void parse_is_prior(const json& node, RunConfig& cfg, std::vector<std::string>& violations) {
  ObjectReader r(node, "is_prior", violations);
  std::vector<double> mean, variance;
  const bool have = r.take_numbers("mean", mean) & r.take_numbers("variance", variance);
  r.finish();
  if (!have) {
    violations.push_back("is_prior: requires 'mean' and 'variance'");
    return;
  }
  if (mean.size() != variance.size() || mean.empty()) {
    violations.push_back("is_prior: 'mean' and 'variance' must have equal nonzero length");
    return;
  }
  for (double v : variance)
    if (!(v > 0.0)) {
      violations.push_back("is_prior: variances must be positive");
      return;
    }
  cfg.is_prior = GaussianSpec{to_vector(mean), to_vector(variance)};
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }

  std::vector<std::string> violations;
  RunConfig cfg;
  cfg.config_hash = hash_hex(json_text);

  ObjectReader root(doc, "config", violations);

  long version = 0;
  if (!root.take_int("version", version))
    violations.push_back("config: missing 'version'");
  else if (version != 1)
    violations.push_back("config: unsupported version " + std::to_string(version));

  if (const json* p = root.take("problem")) {
    ObjectReader r(*p, "problem", violations);
    if (!r.take_string("kind", cfg.problem_kind))
      violations.push_back("problem: missing 'kind'");
    else if (cfg.problem_kind != "linear" && cfg.problem_kind != "seir")
      violations.push_back("problem: unknown kind '" + cfg.problem_kind + "'");
    const bool has_file = r.take_string("data_file", cfg.data_file);
    std::uint64_t data_seed = 0;
    if (r.take_uint("data_seed", data_seed)) cfg.data_seed = data_seed;
    if (has_file == cfg.data_seed.has_value())
      violations.push_back("problem: exactly one of 'data_file' and 'data_seed' is required");
    r.finish();
  } else {
    violations.push_back("config: missing 'problem'");
  }

  std::vector<std::string> statistic_names;
  if (root.take_strings("statistics", statistic_names)) {
    if (statistic_names.empty())
      violations.push_back("statistics: at least one statistic is required");
    std::set<std::string> seen;
    for (const std::string& name : statistic_names) {
      if (!seen.insert(name).second) {
        violations.push_back("statistics: duplicate entry '" + name + "'");
        continue;
      }
      try {
        cfg.statistics.push_back(statistic_from_string(name));
      } catch (const ConfigError&) {
        violations.push_back("statistics: unknown statistic '" + name + "'");
      }
    }
  } else {
    violations.push_back("config: missing 'statistics'");
  }

  if (const json* b = root.take("box")) parse_box(*b, cfg, violations);
  if (const json* p = root.take("is_prior")) parse_is_prior(*p, cfg, violations);

  if (const json* m = root.take("mcmc")) {
    ObjectReader r(*m, "mcmc", violations);
    DRAMConfig& mc = cfg.algorithm.mcmc;
    r.take_int("chain_length", mc.chain_length);
    r.take_int("burn_in", mc.burn_in);
    r.take_uint("seed", mc.seed);
    long extra_stages = mc.extra_stages;
    if (r.take_int("extra_stages", extra_stages))
      mc.extra_stages = static_cast<int>(extra_stages);
    r.take_numbers("stage_scales", mc.stage_scales);
    r.take_int("adapt_start", mc.adapt_start);
    r.take_int("adapt_interval", mc.adapt_interval);
    r.take_number("adapt_regularization", mc.adapt_regularization);
    r.take_number("adapt_scale", mc.adapt_scale);
    std::vector<double> initial_state;
    if (r.take_numbers("initial_state", initial_state))
      mc.initial_state = to_vector(initial_state);
    r.take_number("acceptance_low", mc.acceptance_low);
    r.take_number("acceptance_high", mc.acceptance_high);
    r.finish();
  }

  if (const json* d = root.take("design")) {
    ObjectReader r(*d, "design", violations);
    r.take_int("size", cfg.algorithm.design_size);
    r.take_uint("seed", cfg.algorithm.design_seed);
    r.finish();
  }

  if (const json* s = root.take("surrogates")) {
    ObjectReader r(*s, "surrogates", violations);
    SurrogateSettings& sg = cfg.algorithm.surrogates;
    r.take_strings("kinds", sg.kinds);
    long degree = sg.pce_degree;
    if (r.take_int("pce_degree", degree)) sg.pce_degree = static_cast<int>(degree);
    long folds = sg.cv_folds;
    if (r.take_int("cv_folds", folds)) sg.cv_folds = static_cast<int>(folds);
    r.take_numbers("penalty_grid", sg.penalty_grid);
    r.take_number("validation_fraction", sg.validation_fraction);
    r.take_numbers("keep_grid", sg.keep_grid);
    r.take_uint("seed", sg.seed);
    r.finish();
  }

  if (const json* m = root.take("map_solver")) {
    ObjectReader r(*m, "map_solver", violations);
    MapSolverConfig& ms = cfg.map_solver;
    long iters = ms.max_iterations;
    if (r.take_int("max_iterations", iters)) ms.max_iterations = static_cast<int>(iters);
    r.take_number("gradient_tolerance", ms.gradient_tolerance);
    r.take_number("step_tolerance", ms.step_tolerance);
    long restarts = ms.restarts;
    if (r.take_int("restarts", restarts)) ms.restarts = static_cast<int>(restarts);
    r.take_number("restart_dispersion", ms.restart_dispersion);
    r.take_uint("seed", ms.seed);
    r.take_bool("use_analytic_map", ms.use_analytic_map);
    r.take_number("fd_relative_step", ms.fd_relative_step);
    r.take_number("fd_absolute_step", ms.fd_absolute_step);
    r.finish();
  }

  root.take_number("ess_floor_fraction", cfg.algorithm.ess_floor_fraction);
  root.take_bool("with_standard_errors", cfg.algorithm.with_standard_errors);
  long workers = cfg.algorithm.workers;
  if (root.take_int("workers", workers)) cfg.algorithm.workers = static_cast<int>(workers);
  root.take_string("output_dir", cfg.output_dir);
  root.take_ints("convergence_schedule", cfg.convergence_schedule);

  if (const json* f = root.take("fixed")) {
    cfg.has_fixed = true;
    if (!f->is_object()) {
      violations.push_back("fixed: expected an object of name -> value");
    } else {
      for (const auto& item : f->items()) {
        if (!item.value().is_number()) {
          violations.push_back("fixed: '" + item.key() + "' must map to a number");
          continue;
        }
        cfg.fixed.emplace_back(item.key(), item.value().get<double>());
      }
    }
  }

  if (const json* b = root.take("benchmark")) {
    ObjectReader r(*b, "benchmark", violations);
    if (!r.take_int("n_mc", cfg.benchmark_n_mc))
      violations.push_back("benchmark: missing 'n_mc'");
    else if (cfg.benchmark_n_mc < 1)
      violations.push_back("benchmark: n_mc must be >= 1");
    r.take_uint("seed", cfg.benchmark_seed);
    r.finish();
  }

  root.finish();

  // Cross-field checks that do not need the dataset.
  const int hyper_dim = cfg.problem_kind == "linear" ? 4 : 8;
  const int param_dim = cfg.problem_kind == "linear" ? 2 : 4;
  if (cfg.box && cfg.box->dim() != hyper_dim)
    violations.push_back("box: expected " + std::to_string(hyper_dim) +
                         " hyperparameters for problem '" + cfg.problem_kind + "'");
  if (cfg.is_prior && cfg.is_prior->dim() != param_dim)
    violations.push_back("is_prior: expected dimension " + std::to_string(param_dim) +
                         " for problem '" + cfg.problem_kind + "'");

  if (!violations.empty()) throw ConfigError(violations);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(read_text_file(path));
}

BayesianProblem build_problem(const RunConfig& config) {
  Vector data;
  if (config.problem_kind == "linear") {
    data = config.data_seed ? linear_benchmark::simulate_data(*config.data_seed)
                            : read_csv(config.data_file).values.col(1);
    if (data.size() != 4)
      throw ConfigError("problem: the line-fit dataset needs exactly 4 observations");
    BayesianProblem problem = config.box
                                  ? linear_benchmark::make_problem(data, *config.box)
                                  : linear_benchmark::make_problem(data);
    if (config.is_prior) {
      problem.is_prior = *config.is_prior;
      problem.validate();
    }
    return problem;
  }
  data = config.data_seed ? seir_benchmark::simulate_data(*config.data_seed)
                          : read_csv(config.data_file).values.col(1);
  if (data.size() != 15)
    throw ConfigError("problem: the epidemic dataset needs exactly 15 observations");
  BayesianProblem problem = config.box ? seir_benchmark::make_problem(data, *config.box)
                                       : seir_benchmark::make_problem(data);
  if (config.is_prior) {
    problem.is_prior = *config.is_prior;
    problem.validate();
  }
  return problem;
}

void apply_overrides(RunConfig& config, const std::optional<std::string>& out_dir,
                     const std::optional<std::uint64_t>& seed,
                     const std::optional<int>& workers) {
  if (out_dir) config.output_dir = *out_dir;
  if (workers) config.algorithm.workers = *workers;
  if (seed) {
    config.algorithm.mcmc.seed = derive_seed(*seed, 0);
    config.algorithm.design_seed = derive_seed(*seed, 1);
    config.algorithm.surrogates.seed = derive_seed(*seed, 2);
    config.map_solver.seed = derive_seed(*seed, 3);
    config.benchmark_seed = derive_seed(*seed, 4);
  }
}

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
  return dir.empty() ? name : dir + "/" + name;
}

void add_common_metadata(CsvTable& table, const RunConfig& config) {
  table.add_metadata("config_hash", config.config_hash);
  table.add_metadata("problem", config.problem_kind);
  if (config.data_seed)
    table.add_metadata("data_seed", std::to_string(*config.data_seed));
  else
    table.add_metadata("data_file", config.data_file);
}

void write_chain_csv(const std::string& path, const MCMCChain& chain,
                     const RunConfig& config) {
  std::vector<std::string> columns;
  for (long j = 0; j < chain.draws.cols(); ++j)
    columns.push_back("theta_" + std::to_string(j));
  columns.push_back("accepted_stage");
  CsvTable table(columns);
  add_common_metadata(table, config);
  table.add_metadata("chain_seed", std::to_string(chain.seed));
  table.add_metadata("burn_in", std::to_string(chain.burn_in));
  table.add_metadata("acceptance_rate", format_double(chain.acceptance_rate));
  table.add_metadata("distinct_draws", std::to_string(chain.distinct_draws));
  table.add_metadata("target_evaluations", std::to_string(chain.target_evaluations));
  for (long i = 0; i < chain.draws.rows(); ++i) {
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(chain.draws.cols()) + 1);
    for (long j = 0; j < chain.draws.cols(); ++j) row.push_back(chain.draws(i, j));
    row.push_back(static_cast<double>(chain.accepted_stage[static_cast<std::size_t>(i)]));
    table.add_row(row);
  }
  table.write(path);
}

void write_ess_profile_csv(const std::string& path, const EssProfile& profile,
                           const HyperparameterBox& box, const RunConfig& config) {
  std::vector<std::string> columns = box.names();
  columns.push_back("ess");
  columns.push_back("ok");
  CsvTable table(columns);
  add_common_metadata(table, config);
  table.add_metadata("chain_seed", std::to_string(config.algorithm.mcmc.seed));
  table.add_metadata("design_seed", std::to_string(config.algorithm.design_seed));
  table.add_metadata("chain_length", std::to_string(profile.total_draws));
  table.add_metadata("floor_fraction", format_double(profile.floor_fraction));
  table.add_metadata("below_floor", std::to_string(profile.below_floor));
  table.add_metadata("min_ess", format_double(profile.min_ess));
  table.add_metadata("median_ess", format_double(profile.median_ess));
  for (const EssProfileEntry& entry : profile.entries) {
    std::vector<double> row;
    for (long j = 0; j < entry.xi.size(); ++j) row.push_back(entry.xi[j]);
    row.push_back(entry.ess);
    row.push_back(entry.ok ? 1.0 : 0.0);
    table.add_row(row);
  }
  table.write(path);
}

void write_evaluations_csv(const std::string& path, const HSMapEvaluations& evals,
                           const HyperparameterBox& box, const RunConfig& config) {
  std::vector<std::string> columns = box.names();
  columns.push_back("value");
  const bool with_ess = evals.ess.size() == evals.values.size();
  const bool with_se = evals.standard_errors.size() == evals.values.size();
  if (with_ess) columns.push_back("ess");
  if (with_se) columns.push_back("standard_error");
  CsvTable table(columns);
  add_common_metadata(table, config);
  table.add_metadata("statistic", to_string(evals.statistic));
  table.add_metadata("chain_seed", std::to_string(config.algorithm.mcmc.seed));
  table.add_metadata("design_seed", std::to_string(config.algorithm.design_seed));
  for (const std::string& note : evals.notes) table.add_metadata("note", note);
  for (long i = 0; i < evals.design.rows(); ++i) {
    std::vector<double> row;
    for (long j = 0; j < evals.design.cols(); ++j) row.push_back(evals.design(i, j));
    row.push_back(evals.values[i]);
    if (with_ess) row.push_back(evals.ess[i]);
    if (with_se) row.push_back(evals.standard_errors[i]);
    table.add_row(row);
  }
  table.write(path);
}

void write_sobol_csv(const std::string& path, const SobolIndexReport& report,
                     const RunConfig& config, StatisticKind statistic) {
  CsvTable table({"input", "first_order", "total"});
  add_common_metadata(table, config);
  table.add_metadata("statistic", to_string(statistic));
  table.add_metadata("method", report.method);
  table.add_metadata("total_variance", format_double(report.total_variance));
  table.add_metadata("constant_output", report.constant_output ? "1" : "0");
  for (const auto& [key, value] : report.provenance) table.add_metadata(key, value);
  for (int k = 0; k < report.dim(); ++k)
    table.add_row({report.input_names[static_cast<std::size_t>(k)],
                   format_double(report.first_order[k]), format_double(report.total[k])});
  table.write(path);
}

json report_summary(const SobolIndexReport& report) {
  json first = json::object();
  json total = json::object();
  for (int k = 0; k < report.dim(); ++k) {
    const std::string& name = report.input_names[static_cast<std::size_t>(k)];
    first[name] = report.first_order[k];
    total[name] = report.total[k];
  }
  json ranked = json::array();
  for (int k : report.ranking())
    ranked.push_back(report.input_names[static_cast<std::size_t>(k)]);
  return {{"first_order", first},
          {"total", total},
          {"total_variance", report.total_variance},
          {"constant_output", report.constant_output},
          {"ranking", ranked}};
}

json seeds_json(const RunConfig& config) {
  json seeds{{"chain", config.algorithm.mcmc.seed},
             {"design", config.algorithm.design_seed},
             {"surrogate", config.algorithm.surrogates.seed}};
  if (config.data_seed) seeds["data"] = *config.data_seed;
  return seeds;
}

void write_manifest(const RunConfig& config, const std::string& command,
                    std::vector<std::string> artifacts, json extra) {
  std::sort(artifacts.begin(), artifacts.end());
  json manifest{{"version", 1},
                {"command", command},
                {"config_hash", config.config_hash},
                {"problem", config.problem_kind},
                {"seeds", seeds_json(config)},
                {"artifacts", artifacts}};
  manifest.update(extra);
  write_text_file(join_path(config.output_dir, "manifest.json"), manifest.dump(2) + "\n");
}

// Closed-form hyperparameter-to-statistic map; only the line-fit problem has
// one. Used by the benchmark tables.
std::function<double(const Vector&)> analytic_hs_map(const RunConfig& config,
                                                     const BayesianProblem& problem,
                                                     const Vector& data,
                                                     StatisticKind statistic) {
  if (config.problem_kind != "linear")
    throw ConfigError("benchmark: problem '" + config.problem_kind +
                      "' has no analytic hyperparameter maps");
  switch (statistic) {
    case StatisticKind::mean:
      return [&problem, data](const Vector& xi) {
        return linear_benchmark::analytic_f_mean(data, problem.prior_family, xi);
      };
    case StatisticKind::variance:
      return [&problem, data](const Vector& xi) {
        return linear_benchmark::analytic_f_var(data, problem.prior_family, xi);
      };
    case StatisticKind::map_point:
      return [&problem, data](const Vector& xi) {
        const auto moments =
            linear_benchmark::posterior_moments(data, problem.prior_family.at(xi));
        return problem.qoi(moments.mean);
      };
  }
  throw DomainError("unreachable statistic kind");
}

int fail_config(const ConfigError& e) {
  std::cerr << "[config] " << e.what() << "\n";
  return 2;
}

int fail_stage(const std::string& stage, const std::exception& e) {
  std::cerr << "[" << stage << "] error: " << e.what() << "\n";
  return 3;
}

}  // namespace

int cmd_run(const RunConfig& config) {
  std::string stage = "setup";
  try {
    ensure_directory(config.output_dir);
    stage = "problem";
    const BayesianProblem problem = build_problem(config);

    std::vector<std::string> artifacts;
    json summary = json::object();
    json chain_info;
    json notes = json::array();

    const bool needs_chain =
        std::any_of(config.statistics.begin(), config.statistics.end(),
                    [](StatisticKind s) { return s != StatisticKind::map_point; });

    std::optional<MCMCChain> chain;
    std::optional<PosteriorSampleSet> samples;
    if (needs_chain) {
      stage = "mcmc";
      chain = sample_posterior(problem, config.algorithm.mcmc);
      samples = PosteriorSampleSet::from_chain(*chain, problem.qoi, problem.is_prior);
      write_chain_csv(join_path(config.output_dir, "chain.csv"), *chain, config);
      artifacts.push_back("chain.csv");
      chain_info = {{"length", chain->draws.rows()},
                    {"burn_in", chain->burn_in},
                    {"acceptance_rate", chain->acceptance_rate},
                    {"distinct_draws", chain->distinct_draws},
                    {"target_evaluations", chain->target_evaluations}};
      for (const std::string& w : chain->warnings) notes.push_back("chain: " + w);
    }

    bool wrote_profile = false;
    for (StatisticKind statistic : config.statistics) {
      const std::string name = to_string(statistic);
      stage = "pipeline[" + name + "]";
      HSMapEvaluations evals;
      std::vector<SurrogateFit> fits;
      if (statistic == StatisticKind::map_point) {
        const Matrix design =
            lhs_sample(problem.box, static_cast<int>(config.algorithm.design_size),
                       config.algorithm.design_seed);
        MapGSAResult result =
            run_map_gsa(problem, design, config.map_solver, config.algorithm.surrogates);
        evals = std::move(result.evaluations);
        fits = std::move(result.fits);
        for (const std::string& f : result.failures) notes.push_back("map: " + f);
      } else {
        Algorithm1Config algorithm = config.algorithm;
        algorithm.statistic = statistic;
        Algorithm1Result result =
            run_algorithm1_from_samples(problem, *samples, algorithm);
        evals = std::move(result.evaluations);
        fits = std::move(result.fits);
        if (!wrote_profile) {
          write_ess_profile_csv(join_path(config.output_dir, "ess_profile.csv"),
                                result.reuse_profile, problem.box, config);
          artifacts.push_back("ess_profile.csv");
          wrote_profile = true;
        }
      }
      for (const std::string& note : evals.notes) notes.push_back(name + ": " + note);

      const std::string evals_name = "evaluations_" + name + ".csv";
      write_evaluations_csv(join_path(config.output_dir, evals_name), evals, problem.box,
                            config);
      artifacts.push_back(evals_name);

      summary[name] = json::object();
      for (const SurrogateFit& fit : fits) {
        const std::string sobol_name = "sobol_" + name + "_" + fit.kind + ".csv";
        write_sobol_csv(join_path(config.output_dir, sobol_name), fit.report, config,
                        statistic);
        artifacts.push_back(sobol_name);
        const std::string surrogate_name = "surrogate_" + name + "_" + fit.kind + ".json";
        write_text_file(join_path(config.output_dir, surrogate_name), fit.serialize());
        artifacts.push_back(surrogate_name);
        summary[name][fit.kind] = report_summary(fit.report);
      }
    }

    stage = "outputs";
    json extra{{"summary", summary}, {"notes", notes}};
    if (!chain_info.is_null()) extra["chain"] = chain_info;
    write_manifest(config, "run", std::move(artifacts), extra);
    return 0;
  } catch (const ConfigError& e) {
    return fail_config(e);
  } catch (const std::exception& e) {
    return fail_stage(stage, e);
  }
}

int cmd_benchmark(const RunConfig& config) {
  std::string stage = "setup";
  try {
    ensure_directory(config.output_dir);
    stage = "problem";
    const BayesianProblem problem = build_problem(config);
    const Vector data = problem.noise->data();

    std::vector<std::string> artifacts;
    json summary = json::object();
    for (StatisticKind statistic : config.statistics) {
      const std::string name = to_string(statistic);
      stage = "benchmark[" + name + "]";
      const auto f = analytic_hs_map(config, problem, data, statistic);
      SobolIndexReport report =
          pick_freeze_sobol(f, problem.box, config.benchmark_n_mc, config.benchmark_seed);
      const std::string file_name = "benchmark_" + name + ".csv";
      write_sobol_csv(join_path(config.output_dir, file_name), report, config, statistic);
      artifacts.push_back(file_name);
      summary[name] = report_summary(report);
    }

    stage = "outputs";
    write_manifest(config, "benchmark", std::move(artifacts),
                   json{{"summary", summary},
                        {"n_mc", config.benchmark_n_mc},
                        {"benchmark_seed", config.benchmark_seed}});
    return 0;
  } catch (const ConfigError& e) {
    return fail_config(e);
  } catch (const std::exception& e) {
    return fail_stage(stage, e);
  }
}

int cmd_convergence(const RunConfig& config) {
  std::string stage = "setup";
  try {
    if (config.convergence_schedule.empty())
      throw ConfigError("convergence: missing 'convergence_schedule'");
    ensure_directory(config.output_dir);
    stage = "problem";
    const BayesianProblem problem = build_problem(config);

    std::vector<std::string> artifacts;
    json summary = json::object();
    for (StatisticKind statistic : config.statistics) {
      const std::string name = to_string(statistic);
      if (statistic == StatisticKind::map_point)
        throw ConfigError("convergence: statistic 'map' does not depend on chain length");
      stage = "convergence[" + name + "]";
      Algorithm1Config algorithm = config.algorithm;
      algorithm.statistic = statistic;
      const ConvergenceStudy study =
          convergence_study(problem, algorithm, config.convergence_schedule);

      CsvTable table({"chain_length", "input", "index_kind", "value", "surrogate"});
      add_common_metadata(table, config);
      table.add_metadata("statistic", name);
      table.add_metadata("chain_seed", std::to_string(config.algorithm.mcmc.seed));
      table.add_metadata("design_seed", std::to_string(config.algorithm.design_seed));
      for (const ConvergenceRow& row : study.rows)
        table.add_row({std::to_string(row.chain_length), row.input, row.index_kind,
                       format_double(row.value), row.surrogate});
      const std::string file_name = "convergence_" + name + ".csv";
      table.write(join_path(config.output_dir, file_name));
      artifacts.push_back(file_name);

      summary[name] = json::object();
      for (const SurrogateFit& fit : study.final_result.fits)
        summary[name][fit.kind] = report_summary(fit.report);
    }

    stage = "outputs";
    json schedule = json::array();
    for (long m : config.convergence_schedule) schedule.push_back(m);
    write_manifest(config, "convergence", std::move(artifacts),
                   json{{"summary", summary}, {"schedule", schedule}});
    return 0;
  } catch (const ConfigError& e) {
    return fail_config(e);
  } catch (const std::exception& e) {
    return fail_stage(stage, e);
  }
}

int cmd_fix_compare(const RunConfig& config) {
  std::string stage = "setup";
  try {
    if (!config.has_fixed)
      throw ConfigError("fix-compare: missing 'fixed' assignments");
    ensure_directory(config.output_dir);
    stage = "problem";
    const BayesianProblem problem = build_problem(config);

    std::vector<std::string> artifacts;
    json summary = json::object();
    for (StatisticKind statistic : config.statistics) {
      const std::string name = to_string(statistic);
      if (statistic == StatisticKind::map_point)
        throw ConfigError("fix-compare: statistic 'map' is not supported");
      stage = "fix-compare[" + name + "]";
      Algorithm1Config algorithm = config.algorithm;
      algorithm.statistic = statistic;
      const FixCompareResult result = fix_and_compare(problem, algorithm, config.fixed);

      CsvTable table({"value_full", "value_fixed"});
      add_common_metadata(table, config);
      table.add_metadata("statistic", name);
      table.add_metadata("chain_seed", std::to_string(config.algorithm.mcmc.seed));
      table.add_metadata("design_seed", std::to_string(config.algorithm.design_seed));
      std::ostringstream assignments;
      for (std::size_t j = 0; j < result.fixed_names.size(); ++j) {
        if (j) assignments << "; ";
        assignments << result.fixed_names[j] << "="
                    << format_double(result.fixed_values[static_cast<long>(j)]);
      }
      table.add_metadata("fixed", assignments.str());
      table.add_metadata("ks_statistic", format_double(result.ks_statistic));
      for (long i = 0; i < result.full.values.size(); ++i)
        table.add_row({result.full.values[i], result.fixed.values[i]});
      const std::string file_name = "fix_compare_" + name + ".csv";
      table.write(join_path(config.output_dir, file_name));
      artifacts.push_back(file_name);
      summary[name] = {{"ks_statistic", result.ks_statistic}};
    }

    stage = "outputs";
    json fixed = json::object();
    for (const auto& [fix_name, value] : config.fixed) fixed[fix_name] = value;
    write_manifest(config, "fix-compare", std::move(artifacts),
                   json{{"summary", summary}, {"fixed", fixed}});
    return 0;
  } catch (const ConfigError& e) {
    return fail_config(e);
  } catch (const std::exception& e) {
    return fail_stage(stage, e);
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Global sensitivity of posterior statistics to prior hyperparameters"};
  app.require_subcommand(1);

  struct VerbOptions {
    std::string config_path;
    std::string out_dir;
    std::int64_t seed = -1;
    bool seed_set = false;
    int workers = -1;
  };
  std::map<std::string, VerbOptions> options;
  const std::vector<std::pair<std::string, std::string>> verbs{
      {"run", "Chain, reweighted statistic maps, surrogates, sensitivity indices"},
      {"benchmark", "Monte Carlo indices of the analytic statistic maps"},
      {"convergence", "Index estimates over increasing chain prefixes"},
      {"fix-compare", "Statistic distributions with and without pinned hyperparameters"}};
  for (const auto& [verb, description] : verbs) {
    CLI::App* sub = app.add_subcommand(verb, description);
    VerbOptions& opt = options[verb];
    sub->add_option("--config", opt.config_path, "JSON run configuration")->required();
    sub->add_option("--out", opt.out_dir, "Output directory (overrides config)");
    sub->add_option("--seed", opt.seed, "Master seed; re-derives stage seeds")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--workers", opt.workers, "Worker threads (overrides config)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  const VerbOptions& opt = options[verb];
  RunConfig config;
  try {
    config = load_run_config(opt.config_path);
    apply_overrides(config,
                    opt.out_dir.empty() ? std::nullopt
                                        : std::optional<std::string>(opt.out_dir),
                    opt.seed >= 0 ? std::optional<std::uint64_t>(
                                        static_cast<std::uint64_t>(opt.seed))
                                  : std::nullopt,
                    opt.workers > 0 ? std::optional<int>(opt.workers) : std::nullopt);
  } catch (const ConfigError& e) {
    return fail_config(e);
  } catch (const std::exception& e) {
    std::cerr << "[config] error: " << e.what() << "\n";
    return 2;
  }

  if (verb == "run") return cmd_run(config);
  if (verb == "benchmark") return cmd_benchmark(config);
  if (verb == "convergence") return cmd_convergence(config);
  return cmd_fix_compare(config);
}

}  // namespace priorgsa
