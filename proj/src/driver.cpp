// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/driver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <set>
#include <thread>
#include <utility>

#include "priorgsa/io.hpp"
#include "priorgsa/lhs.hpp"
#include "priorgsa/stats.hpp"

namespace priorgsa {

namespace {

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Runs body(i) for i in [0, n) on static contiguous shards. Each index is
// touched exactly once, so results are identical for any worker count.
void parallel_rows(long n, int workers, const std::function<void(long)>& body) {
  if (workers == 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  const long shards = std::min<long>(workers, n);
  if (shards <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(shards));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(shards));
  for (long s = 0; s < shards; ++s) {
    const long begin = n * s / shards;
    const long end = n * (s + 1) / shards;
    pool.emplace_back([&, s, begin, end] {
      try {
        for (long i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(s)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

const std::vector<std::string> kSurrogateKinds{"pce", "swelm"};

HSMapEvaluations evaluate_moments(const BayesianProblem& problem,
                                  const PosteriorSampleSet& samples, Matrix design,
                                  StatisticKind statistic, bool with_se, int workers) {
  HSMapEvaluations out;
  out.statistic = statistic;
  out.design = std::move(design);
  const long n = out.design.rows();
  out.values.resize(n);
  out.ess.resize(n);
  if (with_se) out.standard_errors.resize(n);
  parallel_rows(n, workers, [&](long i) {
    const Vector xi = out.design.row(i).transpose();
    if (with_se) {
      const MomentEstimate est =
          statistic == StatisticKind::mean
              ? eval_F_mean_with_se(problem, samples, xi)
              : eval_F_var_with_se(problem, samples, xi);
      out.values[i] = est.value;
      out.standard_errors[i] = est.standard_error;
      out.ess[i] = est.ess;
    } else {
      out.values[i] = statistic == StatisticKind::mean
                          ? eval_F_mean(problem, samples, xi)
                          : eval_F_var(problem, samples, xi);
      out.ess[i] = effective_sample_size(samples, problem.prior_family, problem.box, xi);
    }
  });
  return out;
}

std::vector<SurrogateFit> fit_surrogates(
    const Matrix& design, const Vector& values, const HyperparameterBox& box,
    const SurrogateSettings& settings,
    const std::map<std::string, std::string>& provenance) {
  std::vector<SurrogateFit> fits;
  fits.reserve(settings.kinds.size());
  for (const std::string& kind : settings.kinds) {
    SurrogateFit fit;
    fit.kind = kind;
    if (kind == "pce") {
      fit.pce = fit_pce(design, values, box, settings.pce_degree, settings.cv_folds,
                        settings.penalty_grid);
      fit.report = pce_sobol(*fit.pce);
    } else {
      std::vector<double> keep = settings.keep_grid;
      if (keep.empty()) keep = {0.25, 0.5, 0.75, 1.0};
      fit.swelm = fit_swelm(design, values, box, settings.seed,
                            settings.validation_fraction, keep);
      fit.report = swelm_sobol(*fit.swelm);
    }
    fit.report.provenance.insert(provenance.begin(), provenance.end());
    fit.report.validate();
    fits.push_back(std::move(fit));
  }
  return fits;
}

std::map<std::string, std::string> base_provenance(const Algorithm1Config& config,
                                                   long total_draws) {
  return {{"chain_length", std::to_string(total_draws)},
          {"design_size", std::to_string(config.design_size)},
          {"design_seed", std::to_string(config.design_seed)},
          {"chain_seed", std::to_string(config.mcmc.seed)},
          {"surrogate_seed", std::to_string(config.surrogates.seed)},
          {"statistic", to_string(config.statistic)}};
}

}  // namespace

void SurrogateSettings::validate(std::vector<std::string>& violations) const {
  if (kinds.empty()) violations.push_back("surrogates: at least one kind required");
  std::set<std::string> seen;
  for (const std::string& kind : kinds) {
    if (std::find(kSurrogateKinds.begin(), kSurrogateKinds.end(), kind) ==
        kSurrogateKinds.end())
      violations.push_back("surrogates: unknown kind '" + kind + "'");
    if (!seen.insert(kind).second)
      violations.push_back("surrogates: duplicate kind '" + kind + "'");
  }
  if (pce_degree < 1) violations.push_back("surrogates: pce_degree must be >= 1");
  if (cv_folds < 2) violations.push_back("surrogates: cv_folds must be >= 2");
  for (double p : penalty_grid)
    if (!(p > 0.0)) violations.push_back("surrogates: penalty_grid entries must be > 0");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
    violations.push_back("surrogates: validation_fraction must be in (0, 1)");
  for (double k : keep_grid)
    if (!(k > 0.0 && k <= 1.0))
      violations.push_back("surrogates: keep_grid entries must be in (0, 1]");
}

void Algorithm1Config::validate() const {
  std::vector<std::string> violations;
  if (statistic == StatisticKind::map_point)
    violations.push_back("config: optimizer-based statistic requires the map pipeline");
  if (design_size < 1) violations.push_back("config: design_size must be >= 1");
  if (ess_floor_fraction < 0.0 || ess_floor_fraction > 1.0)
    violations.push_back("config: ess_floor_fraction must be in [0, 1]");
  if (workers < 0) violations.push_back("config: workers must be >= 0");
  surrogates.validate(violations);
  if (!violations.empty()) throw ConfigError(violations);
}

std::string SurrogateFit::serialize() const {
  if (pce) return pce->to_json();
  if (swelm) return swelm->to_json();
  throw DomainError("surrogate fit holds no surrogate");
}

DRAMConfig resolve_mcmc_defaults(const BayesianProblem& problem, DRAMConfig config) {
  if (config.initial_state.size() == 0) config.initial_state = problem.is_prior.mean;
  if (config.initial_proposal_covariance.size() == 0)
    config.initial_proposal_covariance =
        Matrix((0.01 * problem.is_prior.variance).asDiagonal());
  return config;
}

MCMCChain sample_posterior(const BayesianProblem& problem, const DRAMConfig& config) {
  const DRAMConfig resolved = resolve_mcmc_defaults(problem, config);
  const auto target = [&problem](const Vector& theta) {
    return log_likelihood(problem, theta) + problem.is_prior.log_density(theta);
  };
  return dram_sample(target, resolved);
}

Algorithm1Result run_algorithm1(const BayesianProblem& problem,
                                const Algorithm1Config& config) {
  config.validate();
  problem.validate();
  MCMCChain chain = sample_posterior(problem, config.mcmc);
  const PosteriorSampleSet samples =
      PosteriorSampleSet::from_chain(chain, problem.qoi, problem.is_prior);
  Algorithm1Result result = run_algorithm1_from_samples(problem, samples, config);
  for (const std::string& warning : chain.warnings)
    result.evaluations.notes.push_back("chain: " + warning);
  result.chain = std::move(chain);
  return result;
}

Algorithm1Result run_algorithm1_from_samples(const BayesianProblem& problem,
                                             const PosteriorSampleSet& samples,
                                             const Algorithm1Config& config) {
  config.validate();
  problem.validate();

  Algorithm1Result result;
  result.distinct_draws = samples.distinct_count();
  Matrix design = lhs_sample(problem.box, static_cast<int>(config.design_size), config.design_seed);
  result.evaluations =
      evaluate_moments(problem, samples, std::move(design), config.statistic,
                       config.with_standard_errors, config.workers);
  result.reuse_profile =
      ess_profile(samples, problem.prior_family, problem.box, result.evaluations.design,
                  config.ess_floor_fraction);
  if (result.reuse_profile.below_floor > 0)
    result.evaluations.notes.push_back(
        "effective sample size below " + format_double(config.ess_floor_fraction) +
        " x chain length at " + std::to_string(result.reuse_profile.below_floor) + " of " +
        std::to_string(result.evaluations.design.rows()) + " design points");

  result.fits =
      fit_surrogates(result.evaluations.design, result.evaluations.values, problem.box,
                     config.surrogates, base_provenance(config, samples.total_draws()));
  return result;
}

MapGSAResult run_map_gsa(const BayesianProblem& problem, const Matrix& design,
                         const MapSolverConfig& solver,
                         const SurrogateSettings& surrogates) {
  std::vector<std::string> violations;
  surrogates.validate(violations);
  if (design.rows() < 1) violations.push_back("map pipeline: empty design");
  if (!violations.empty()) throw ConfigError(violations);
  problem.validate();
  if (design.cols() != problem.box.dim())
    throw ConfigError("map pipeline: design dimension mismatch");

  const MapDesignResult solved = eval_map_over_design(problem, design, solver);
  MapGSAResult result;
  result.failures = solved.failures;

  long kept = 0;
  for (const auto& slot : solved.results)
    if (slot) ++kept;
  result.evaluations.statistic = StatisticKind::map_point;
  result.evaluations.design.resize(kept, design.cols());
  result.evaluations.values.resize(kept);
  long row = 0;
  for (long i = 0; i < design.rows(); ++i) {
    const auto& slot = solved.results[static_cast<std::size_t>(i)];
    if (!slot) continue;
    result.evaluations.design.row(row) = design.row(i);
    result.evaluations.values[row] = slot->qoi;
    ++row;
  }
  if (kept < design.rows())
    result.evaluations.notes.push_back(
        std::to_string(design.rows() - kept) + " of " + std::to_string(design.rows()) +
        " optimizer solves failed; rows dropped from the training set");

  const std::map<std::string, std::string> provenance{
      {"design_size", std::to_string(design.rows())},
      {"solver_seed", std::to_string(solver.seed)},
      {"surrogate_seed", std::to_string(surrogates.seed)},
      {"statistic", to_string(StatisticKind::map_point)}};
  result.fits = fit_surrogates(result.evaluations.design, result.evaluations.values,
                               problem.box, surrogates, provenance);
  return result;
}

ConvergenceStudy convergence_study(const BayesianProblem& problem,
                                   const Algorithm1Config& config,
                                   const std::vector<long>& schedule) {
  config.validate();
  problem.validate();
  std::vector<std::string> violations;
  if (schedule.empty()) violations.push_back("convergence: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1)
      violations.push_back("convergence: schedule entries must be >= 1");
    if (i > 0 && schedule[i] <= schedule[i - 1])
      violations.push_back("convergence: schedule must be strictly increasing");
  }
  if (!schedule.empty() && schedule.back() != config.mcmc.chain_length)
    violations.push_back("convergence: schedule must end at the configured chain length");
  if (!violations.empty()) throw ConfigError(violations);

  MCMCChain chain = sample_posterior(problem, config.mcmc);
  const PosteriorSampleSet samples =
      PosteriorSampleSet::from_chain(chain, problem.qoi, problem.is_prior);

  ConvergenceStudy study;
  for (long m : schedule) {
    Algorithm1Result block =
        run_algorithm1_from_samples(problem, samples.prefix(m), config);
    for (const SurrogateFit& fit : block.fits) {
      for (int k = 0; k < fit.report.dim(); ++k) {
        const std::string& input = fit.report.input_names[static_cast<std::size_t>(k)];
        study.rows.push_back({m, input, "first", fit.report.first_order[k], fit.kind});
        study.rows.push_back({m, input, "total", fit.report.total[k], fit.kind});
      }
    }
    if (m == schedule.back()) study.final_result = std::move(block);
  }
  study.final_result.chain = std::move(chain);
  return study;
}

FixCompareResult fix_and_compare(const BayesianProblem& problem,
                                 const Algorithm1Config& config,
                                 const std::vector<std::pair<std::string, double>>& fixed) {
  config.validate();
  problem.validate();
  std::vector<std::string> violations;
  std::vector<int> columns;
  std::set<int> seen;
  for (const auto& [name, value] : fixed) {
    int column = -1;
    try {
      column = problem.box.index_of(name);
    } catch (const DomainError&) {
      violations.push_back("fix-compare: unknown hyperparameter '" + name + "'");
      continue;
    }
    if (!seen.insert(column).second)
      violations.push_back("fix-compare: hyperparameter '" + name + "' pinned twice");
    if (value < problem.box.lower()[column] || value > problem.box.upper()[column])
      violations.push_back("fix-compare: value " + format_double(value) + " for '" +
                           name + "' is outside the box");
    columns.push_back(column);
  }
  if (!violations.empty()) throw ConfigError(violations);

  const MCMCChain chain = sample_posterior(problem, config.mcmc);
  const PosteriorSampleSet samples =
      PosteriorSampleSet::from_chain(chain, problem.qoi, problem.is_prior);
  const Matrix design = lhs_sample(problem.box, static_cast<int>(config.design_size), config.design_seed);

  FixCompareResult result;
  result.full = evaluate_moments(problem, samples, design, config.statistic,
                                 config.with_standard_errors, config.workers);
  Matrix pinned = design;
  result.fixed_values.resize(static_cast<long>(fixed.size()));
  for (std::size_t j = 0; j < fixed.size(); ++j) {
    result.fixed_names.push_back(fixed[j].first);
    result.fixed_values[static_cast<long>(j)] = fixed[j].second;
    pinned.col(columns[j]).setConstant(fixed[j].second);
  }
  result.fixed = evaluate_moments(problem, samples, std::move(pinned), config.statistic,
                                  config.with_standard_errors, config.workers);
  result.ks_statistic = ks_statistic(to_std(result.full.values), to_std(result.fixed.values));
  return result;
}

}  // namespace priorgsa
