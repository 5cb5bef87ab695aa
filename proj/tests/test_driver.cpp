// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "priorgsa/driver.hpp"
#include "priorgsa/lhs.hpp"
#include "priorgsa/linear_problem.hpp"

using namespace priorgsa;
using linear_benchmark::make_problem;
using linear_benchmark::simulate_data;

namespace {

Algorithm1Config small_config(StatisticKind statistic = StatisticKind::mean) {
  Algorithm1Config config;
  config.statistic = statistic;
  config.mcmc.chain_length = 2500;
  config.mcmc.burn_in = 500;
  config.mcmc.seed = 7;
  config.design_size = 60;
  config.design_seed = 3;
  config.surrogates.pce_degree = 3;
  config.surrogates.cv_folds = 5;
  config.surrogates.seed = 11;
  return config;
}

}  // namespace

TEST_CASE("mcmc defaults are resolved from the sampling prior") {
  const BayesianProblem problem = make_problem(simulate_data(3));
  DRAMConfig config;
  config.chain_length = 100;
  const DRAMConfig resolved = resolve_mcmc_defaults(problem, config);
  CHECK(resolved.initial_state == problem.is_prior.mean);
  REQUIRE(resolved.initial_proposal_covariance.rows() == 2);
  CHECK(resolved.initial_proposal_covariance(0, 0) ==
        doctest::Approx(0.01 * problem.is_prior.variance[0]).epsilon(1e-14));
  CHECK(resolved.initial_proposal_covariance(0, 1) == 0.0);

  // Explicit settings are left alone.
  DRAMConfig custom;
  custom.chain_length = 100;
  custom.initial_state = Vector::Constant(2, 9.0);
  custom.initial_proposal_covariance = 5.0 * Matrix::Identity(2, 2);
  const DRAMConfig kept = resolve_mcmc_defaults(problem, custom);
  CHECK(kept.initial_state == custom.initial_state);
  CHECK(kept.initial_proposal_covariance == custom.initial_proposal_covariance);
}

TEST_CASE("config validation flags bad settings together") {
  Algorithm1Config config = small_config();
  config.design_size = 0;
  config.surrogates.kinds = {"pce", "spline"};
  config.surrogates.pce_degree = -1;
  config.ess_floor_fraction = 1.5;
  config.workers = -2;
  try {
    config.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations.size() >= 4);
  }
  CHECK_NOTHROW(small_config().validate());
}

TEST_CASE("the full pipeline produces coherent evaluations and fits") {
  const BayesianProblem problem = make_problem(simulate_data(3));
  const Algorithm1Config config = small_config();
  const Algorithm1Result result = run_algorithm1(problem, config);

  CHECK(result.chain.draws.rows() == 2500);
  CHECK(result.distinct_draws == result.chain.distinct_draws);
  REQUIRE(result.evaluations.design.rows() == 60);
  REQUIRE(result.evaluations.values.size() == 60);
  REQUIRE(result.evaluations.ess.size() == 60);
  CHECK(result.evaluations.standard_errors.size() == 0);

  for (long i = 0; i < 60; ++i) {
    CHECK(problem.box.contains(result.evaluations.design.row(i).transpose()));
    CHECK(std::isfinite(result.evaluations.values[i]));
    CHECK(result.evaluations.values[i] > 0.0);  // squared-norm statistic
    CHECK(result.evaluations.ess[i] > 0.0);
  }

  REQUIRE(result.fits.size() == 2);
  CHECK(result.fits[0].kind == "pce");
  CHECK(result.fits[1].kind == "swelm");
  for (const auto& fit : result.fits) {
    CHECK_NOTHROW(fit.report.validate(1e-6));
    CHECK(fit.report.input_names == problem.box.names());
    CHECK_FALSE(fit.serialize().empty());
    // Provenance records the run geometry.
    CHECK(fit.report.provenance.count("chain_length") == 1);
    CHECK(fit.report.provenance.count("design_size") == 1);
  }
  REQUIRE(result.fits[0].pce.has_value());
  REQUIRE(result.fits[1].swelm.has_value());

  // Reuse diagnostics cover the whole design.
  CHECK(result.reuse_profile.entries.size() == 60);
  CHECK(result.reuse_profile.total_draws == 2500);
}

TEST_CASE("pipeline runs are bit-reproducible") {
  const BayesianProblem problem = make_problem(simulate_data(3));
  const Algorithm1Config config = small_config(StatisticKind::variance);
  const Algorithm1Result a = run_algorithm1(problem, config);
  const Algorithm1Result b = run_algorithm1(problem, config);
  CHECK(a.evaluations.values == b.evaluations.values);
  CHECK(a.evaluations.design == b.evaluations.design);
  REQUIRE(a.fits.size() == b.fits.size());
  CHECK(a.fits[0].pce->coefficients() == b.fits[0].pce->coefficients());
  CHECK(a.fits[1].swelm->output_weights() == b.fits[1].swelm->output_weights());
  CHECK(a.fits[0].report.total == b.fits[0].report.total);
}

TEST_CASE("threaded evaluation matches the sequential path bit for bit") {
  const BayesianProblem problem = make_problem(simulate_data(3));
  Algorithm1Config sequential = small_config();
  sequential.with_standard_errors = true;
  Algorithm1Config threaded = sequential;
  threaded.workers = 3;
  const Algorithm1Result a = run_algorithm1(problem, sequential);
  const Algorithm1Result b = run_algorithm1(problem, threaded);
  CHECK(a.evaluations.values == b.evaluations.values);
  CHECK(a.evaluations.standard_errors == b.evaluations.standard_errors);
  CHECK(a.evaluations.ess == b.evaluations.ess);
}

TEST_CASE("standard errors arrive only when requested") {
  const BayesianProblem problem = make_problem(simulate_data(3));
  Algorithm1Config config = small_config();
  config.with_standard_errors = true;
  config.design_size = 25;
  const Algorithm1Result result = run_algorithm1(problem, config);
  REQUIRE(result.evaluations.standard_errors.size() == 25);
  for (long i = 0; i < 25; ++i) CHECK(result.evaluations.standard_errors[i] > 0.0);
}

TEST_CASE("a precomputed sample set reproduces the full pipeline") {
  const BayesianProblem problem = make_problem(simulate_data(3));
  const Algorithm1Config config = small_config();
  const Algorithm1Result direct = run_algorithm1(problem, config);

  const MCMCChain chain = sample_posterior(problem, resolve_mcmc_defaults(problem, config.mcmc));
  const auto samples = PosteriorSampleSet::from_chain(chain, problem.qoi, problem.is_prior);
  const Algorithm1Result replay = run_algorithm1_from_samples(problem, samples, config);

  CHECK(replay.chain.draws.size() == 0);  // no chain of its own
  CHECK(replay.evaluations.values == direct.evaluations.values);
  CHECK(replay.fits[0].report.first_order == direct.fits[0].report.first_order);
}

TEST_CASE("optimizer-based statistics run over an explicit design") {
  const BayesianProblem problem = make_problem(simulate_data(3));
  const Matrix design = lhs_sample(problem.box, 40, 13);
  MapSolverConfig solver;
  solver.seed = 5;
  SurrogateSettings surrogates;
  surrogates.pce_degree = 3;
  surrogates.cv_folds = 5;
  surrogates.seed = 11;

  const MapGSAResult result = run_map_gsa(problem, design, solver, surrogates);
  CHECK(result.failures.empty());
  REQUIRE(result.evaluations.values.size() == 40);
  CHECK(result.evaluations.statistic == StatisticKind::map_point);
  CHECK(result.evaluations.ess.size() == 0);  // no reweighting involved
  REQUIRE(result.fits.size() == 2);
  for (const auto& fit : result.fits) CHECK_NOTHROW(fit.report.validate(1e-6));
}

TEST_CASE("convergence schedules are validated and the final block is exact") {
  const BayesianProblem problem = make_problem(simulate_data(3));
  Algorithm1Config config = small_config();
  config.surrogates.kinds = {"pce"};

  CHECK_THROWS_AS(convergence_study(problem, config, {}), ConfigError);
  CHECK_THROWS_AS(convergence_study(problem, config, {500, 500, 2500}), ConfigError);
  CHECK_THROWS_AS(convergence_study(problem, config, {500, 1000}), ConfigError);

  const ConvergenceStudy study = convergence_study(problem, config, {500, 1200, 2500});
  // One row per schedule entry, surrogate, input, and index kind.
  CHECK(study.rows.size() == 3 * 1 * 4 * 2);
  for (const auto& row : study.rows) {
    CHECK((row.index_kind == "first" || row.index_kind == "total"));
    CHECK(row.surrogate == "pce");
    CHECK(std::isfinite(row.value));
  }

  // The last block must equal a direct full-length run, bit for bit.
  const Algorithm1Result direct = run_algorithm1(problem, config);
  const auto& final_report = study.final_result.fits[0].report;
  CHECK(final_report.total == direct.fits[0].report.total);
  CHECK(study.final_result.evaluations.values == direct.evaluations.values);
  for (const auto& row : study.rows) {
    if (row.chain_length != 2500) continue;
    const int input = problem.box.index_of(row.input);
    const double expected = row.index_kind == "first" ? final_report.first_order[input]
                                                      : final_report.total[input];
    CHECK(row.value == expected);
  }
}

TEST_CASE("pinning inputs reuses the design and quantifies the gap") {
  const BayesianProblem problem = make_problem(simulate_data(3));
  Algorithm1Config config = small_config();
  config.surrogates.kinds = {"pce"};

  const FixCompareResult result =
      fix_and_compare(problem, config, {{"var_slope", 1.0}, {"mean_slope", 0.9}});
  REQUIRE(result.full.values.size() == 60);
  REQUIRE(result.fixed.values.size() == 60);
  CHECK(result.ks_statistic >= 0.0);
  CHECK(result.ks_statistic <= 1.0);
  CHECK(result.fixed_names == std::vector<std::string>{"var_slope", "mean_slope"});

  // Pinned columns are constant in the fixed design, untouched elsewhere.
  const int slope_var = problem.box.index_of("var_slope");
  const int slope_mean = problem.box.index_of("mean_slope");
  for (long i = 0; i < 60; ++i) {
    CHECK(result.fixed.design(i, slope_var) == 1.0);
    CHECK(result.fixed.design(i, slope_mean) == 0.9);
    for (int j = 0; j < 4; ++j) {
      if (j == slope_var || j == slope_mean) continue;
      CHECK(result.fixed.design(i, j) == result.full.design(i, j));
    }
  }

  // An empty fixed set changes nothing at all.
  const FixCompareResult idle = fix_and_compare(problem, config, {});
  CHECK(idle.ks_statistic == 0.0);
  CHECK(idle.full.values == idle.fixed.values);

  // Pinning every input collapses the fixed evaluations to one value.
  const Vector center = problem.box.center();
  std::vector<std::pair<std::string, double>> all;
  for (int j = 0; j < 4; ++j) all.emplace_back(problem.box.names()[j], center[j]);
  const FixCompareResult collapsed = fix_and_compare(problem, config, all);
  for (long i = 1; i < 60; ++i)
    CHECK(collapsed.fixed.values[i] == collapsed.fixed.values[0]);

  // Violations: unknown names, duplicates, out-of-box values.
  CHECK_THROWS_AS(fix_and_compare(problem, config, {{"nope", 1.0}}), ConfigError);
  CHECK_THROWS_AS(
      fix_and_compare(problem, config, {{"var_slope", 1.0}, {"var_slope", 1.1}}),
      ConfigError);
  CHECK_THROWS_AS(fix_and_compare(problem, config, {{"var_slope", 9.0}}), ConfigError);
}

TEST_CASE("chain warnings propagate into the evaluation notes") {
  const BayesianProblem problem = make_problem(simulate_data(3));
  Algorithm1Config config = small_config();
  // A tiny frozen proposal forces a sky-high acceptance rate warning.
  config.mcmc.initial_proposal_covariance = 1e-10 * Matrix::Identity(2, 2);
  config.mcmc.adapt_start = 1000000;
  config.mcmc.chain_length = 1500;
  const Algorithm1Result result = run_algorithm1(problem, config);
  bool found = false;
  for (const auto& note : result.evaluations.notes)
    if (note.rfind("chain:", 0) == 0) found = true;
  CHECK(found);
}
