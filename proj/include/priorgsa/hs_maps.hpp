// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "priorgsa/importance.hpp"
#include "priorgsa/problem.hpp"

namespace priorgsa {

// Posterior statistic a hyperparameter point is mapped to.
enum class StatisticKind { mean, variance, map_point };
std::string to_string(StatisticKind kind);
StatisticKind statistic_from_string(const std::string& name);

// Posterior mean of the quantity of interest under the prior at xi,
// estimated by reweighting the shared chain. A positive ess_floor_fraction
// turns low effective sample size into a hard error; by default low ESS is
// surfaced through ess_profile instead.
double eval_F_mean(const BayesianProblem& problem, const PosteriorSampleSet& samples,
                   const Vector& xi, double ess_floor_fraction = 0.0);

// Posterior variance E[q^2] - E[q]^2; rounding-level negativity clamps to 0,
// larger negativity throws DegenerateWeightsError.
double eval_F_var(const BayesianProblem& problem, const PosteriorSampleSet& samples,
                  const Vector& xi, double ess_floor_fraction = 0.0);

// Same estimates with batch-means standard errors.
MomentEstimate eval_F_mean_with_se(const BayesianProblem& problem,
                                   const PosteriorSampleSet& samples, const Vector& xi,
                                   double ess_floor_fraction = 0.0);
MomentEstimate eval_F_var_with_se(const BayesianProblem& problem,
                                  const PosteriorSampleSet& samples, const Vector& xi,
                                  double ess_floor_fraction = 0.0);

struct MapSolverConfig {
  int max_iterations = 200;
  double gradient_tolerance = 1e-8;
  double step_tolerance = 1e-12;
  int restarts = 3;              // independent starts, first at the prior mean
  double restart_dispersion = 1.0;  // restart spread in prior standard deviations
  std::uint64_t seed = 0;
  bool use_analytic_map = true;  // take problem.analytic_map_point when present
  double fd_relative_step = 1e-6;
  double fd_absolute_step = 1e-8;
};

struct MapResult {
  Vector theta;          // regularized misfit minimizer
  double qoi = 0.0;      // quantity of interest at theta
  double objective = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  int restart_index = 0;
  bool used_analytic = false;
};

// Posterior mode under the prior at xi: minimizes the noise-weighted misfit
// minus twice the log prior. Throws OptimizationError when no start meets
// the gradient tolerance.
MapResult eval_F_map(const BayesianProblem& problem, const Vector& xi,
                     const MapSolverConfig& config = {});

struct MapDesignResult {
  std::vector<std::optional<MapResult>> results;  // one slot per design row
  std::vector<std::string> failures;              // messages for empty slots
};

// MAP solves over every design row. Individual failures are recorded; more
// than 10 percent of them raises OptimizationError.
MapDesignResult eval_map_over_design(const BayesianProblem& problem, const Matrix& design,
                                     const MapSolverConfig& config = {});

}  // namespace priorgsa
