// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "priorgsa/driver.hpp"

namespace priorgsa {

// One validated run description, parsed from a single strict JSON document
// (unknown keys are errors; all violations are reported together).
struct RunConfig {
  std::string problem_kind;  // "linear" or "seir"
  std::string data_file;     // exactly one of data_file / data_seed is set
  std::optional<std::uint64_t> data_seed;
  std::vector<StatisticKind> statistics;
  std::optional<HyperparameterBox> box;      // problem default when absent
  std::optional<GaussianSpec> is_prior;      // problem default when absent
  Algorithm1Config algorithm;                // statistic overwritten per run
  MapSolverConfig map_solver;
  std::vector<long> convergence_schedule;
  std::vector<std::pair<std::string, double>> fixed;
  bool has_fixed = false;                    // "fixed" key present (may be empty)
  long benchmark_n_mc = 100000;
  std::uint64_t benchmark_seed = 0;
  std::string output_dir = "out";
  std::string config_hash;                   // hash of the raw document bytes
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Dataset resolution plus problem assembly with box / sampling-prior
// overrides applied.
BayesianProblem build_problem(const RunConfig& config);

// Command-line overrides. A master seed re-derives every stage seed except
// the dataset seed, which identifies the data.
void apply_overrides(RunConfig& config, const std::optional<std::string>& out_dir,
                     const std::optional<std::uint64_t>& seed,
                     const std::optional<int>& workers);

// Each command writes its artifacts under config.output_dir plus a manifest
// naming every file, and returns a process exit status (0 = success,
// 2 = configuration error, 3 = runtime failure).
int cmd_run(const RunConfig& config);
int cmd_benchmark(const RunConfig& config);
int cmd_convergence(const RunConfig& config);
int cmd_fix_compare(const RunConfig& config);

// Argument parsing and dispatch behind main().
int run_cli(int argc, const char* const* argv);

}  // namespace priorgsa
