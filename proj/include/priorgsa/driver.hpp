// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "priorgsa/dram.hpp"
#include "priorgsa/hs_maps.hpp"
#include "priorgsa/importance.hpp"
#include "priorgsa/pce.hpp"
#include "priorgsa/sobol.hpp"
#include "priorgsa/swelm.hpp"

namespace priorgsa {

// Which surrogates to fit on the hyperparameter-to-statistic evaluations and
// how. An empty penalty grid or keep grid selects the fit defaults.
struct SurrogateSettings {
  std::vector<std::string> kinds{"pce", "swelm"};
  int pce_degree = 5;
  int cv_folds = 10;
  std::vector<double> penalty_grid;
  double validation_fraction = 0.2;
  std::vector<double> keep_grid;
  std::uint64_t seed = 0;
  void validate(std::vector<std::string>& violations) const;
};

// One chain, one design, reweighted statistic evaluations, surrogate fits,
// analytic sensitivity indices.
struct Algorithm1Config {
  StatisticKind statistic = StatisticKind::mean;
  DRAMConfig mcmc;  // empty initial state/covariance are filled from the sampling prior
  long design_size = 1000;
  std::uint64_t design_seed = 1;
  SurrogateSettings surrogates;
  double ess_floor_fraction = 0.01;  // profile warning threshold, not an error
  bool with_standard_errors = false;
  int workers = 1;  // threads for design-point evaluation; 0 = hardware count
  void validate() const;
};

// Statistic values over a hyperparameter design, with reuse diagnostics.
struct HSMapEvaluations {
  StatisticKind statistic = StatisticKind::mean;
  Matrix design;            // design_size x n_hyper
  Vector values;            // statistic per design row
  Vector ess;               // per row; empty for optimizer-based statistics
  Vector standard_errors;   // per row when requested; empty otherwise
  std::vector<std::string> notes;
};

// One fitted surrogate plus its analytic sensitivity indices.
struct SurrogateFit {
  std::string kind;  // "pce" or "swelm"
  SobolIndexReport report;
  std::optional<PCESurrogate> pce;
  std::optional<SWELMSurrogate> swelm;
  std::string serialize() const;  // JSON for whichever kind is held
};

struct Algorithm1Result {
  MCMCChain chain;
  long distinct_draws = 0;
  HSMapEvaluations evaluations;
  EssProfile reuse_profile;
  std::vector<SurrogateFit> fits;
};

// DRAM configuration with an empty initial state or proposal covariance
// resolved from the sampling prior (mean, 0.1^2 x prior covariance).
DRAMConfig resolve_mcmc_defaults(const BayesianProblem& problem, DRAMConfig config);

// One chain targeting the posterior under the sampling prior.
MCMCChain sample_posterior(const BayesianProblem& problem, const DRAMConfig& config);

// Full pipeline: sample the posterior under the covering prior once, then
// reweight onto a Latin hypercube design and fit the requested surrogates.
Algorithm1Result run_algorithm1(const BayesianProblem& problem,
                                const Algorithm1Config& config);

// Same pipeline on an existing sample set (chain field left empty).
Algorithm1Result run_algorithm1_from_samples(const BayesianProblem& problem,
                                             const PosteriorSampleSet& samples,
                                             const Algorithm1Config& config);

struct MapGSAResult {
  HSMapEvaluations evaluations;
  std::vector<SurrogateFit> fits;
  std::vector<std::string> failures;  // per-point solver failures (tolerated up to 10%)
};

// Optimizer-based statistic over an explicit design; rows whose solve fails
// are dropped from the surrogate training set and recorded.
MapGSAResult run_map_gsa(const BayesianProblem& problem, const Matrix& design,
                         const MapSolverConfig& solver,
                         const SurrogateSettings& surrogates);

struct ConvergenceRow {
  long chain_length = 0;
  std::string input;
  std::string index_kind;  // "first" or "total"
  double value = 0.0;
  std::string surrogate;   // "pce" or "swelm"
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  Algorithm1Result final_result;  // run at the last schedule entry
};

// Index estimates at increasing chain-prefix lengths, one shared chain. The
// schedule must be strictly increasing and end at the configured length, so
// the last block reproduces run_algorithm1 exactly.
ConvergenceStudy convergence_study(const BayesianProblem& problem,
                                   const Algorithm1Config& config,
                                   const std::vector<long>& schedule);

struct FixCompareResult {
  HSMapEvaluations full;    // all hyperparameters varying
  HSMapEvaluations fixed;   // listed hyperparameters pinned, others identical
  double ks_statistic = 0.0;
  std::vector<std::string> fixed_names;
  Vector fixed_values;
};

// Pins a subset of hyperparameters to given values and re-evaluates the
// statistic on the otherwise identical design, quantifying how much the
// statistic's spread depends on the pinned inputs.
FixCompareResult fix_and_compare(const BayesianProblem& problem,
                                 const Algorithm1Config& config,
                                 const std::vector<std::pair<std::string, double>>& fixed);

}  // namespace priorgsa
