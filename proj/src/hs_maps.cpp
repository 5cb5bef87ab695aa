// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/hs_maps.hpp"

#include <cmath>
#include <limits>

#include "priorgsa/stats.hpp"

namespace priorgsa {

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::mean: return "mean";
    case StatisticKind::variance: return "var";
    case StatisticKind::map_point: return "map";
  }
  throw DomainError("unknown statistic kind");
}

StatisticKind statistic_from_string(const std::string& name) {
  if (name == "mean") return StatisticKind::mean;
  if (name == "var" || name == "variance") return StatisticKind::variance;
  if (name == "map") return StatisticKind::map_point;
  throw ConfigError("unknown statistic: " + name + " (expected mean, var, or map)");
}

double eval_F_mean(const BayesianProblem& problem, const PosteriorSampleSet& samples,
                   const Vector& xi, double ess_floor_fraction) {
  return is_moment(samples, problem.prior_family, problem.box, xi, 1,
                   ess_floor_fraction);
}

double eval_F_var(const BayesianProblem& problem, const PosteriorSampleSet& samples,
                  const Vector& xi, double ess_floor_fraction) {
  const double m1 =
      is_moment(samples, problem.prior_family, problem.box, xi, 1, ess_floor_fraction);
  const double m2 = is_moment(samples, problem.prior_family, problem.box, xi, 2, 0.0);
  return guarded_variance(m1, m2, xi);
}

MomentEstimate eval_F_mean_with_se(const BayesianProblem& problem,
                                   const PosteriorSampleSet& samples, const Vector& xi,
                                   double ess_floor_fraction) {
  return is_mean_estimate(samples, problem.prior_family, problem.box, xi,
                          ess_floor_fraction);
}

MomentEstimate eval_F_var_with_se(const BayesianProblem& problem,
                                  const PosteriorSampleSet& samples, const Vector& xi,
                                  double ess_floor_fraction) {
  return is_variance_estimate(samples, problem.prior_family, problem.box, xi,
                              ess_floor_fraction);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Regularized misfit: data misfit minus twice the log prior at xi.
class MapObjective {
 public:
  MapObjective(const BayesianProblem& problem, GaussianSpec prior)
      : problem_(problem), prior_(std::move(prior)) {}

  double operator()(const Vector& theta) const {
    try {
      const Vector g = problem_.forward->evaluate(theta);
      if (!g.allFinite()) return kInf;
      return problem_.noise->misfit(g) - 2.0 * prior_.log_density(theta);
    } catch (const EvaluationError&) {
      return kInf;
    }
  }

  Vector gradient(const Vector& theta, double rel, double abs_floor) const {
    Vector g(theta.size());
    Vector probe = theta;
    for (int i = 0; i < theta.size(); ++i) {
      const double h = std::max(rel * std::abs(theta[i]), abs_floor);
      probe[i] = theta[i] + h;
      const double fp = (*this)(probe);
      probe[i] = theta[i] - h;
      const double fm = (*this)(probe);
      probe[i] = theta[i];
      g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
  }

 private:
  const BayesianProblem& problem_;
  GaussianSpec prior_;
};

struct BfgsOutcome {
  Vector x;
  double value = kInf;
  double gradient_norm = kInf;
  int iterations = 0;
  bool converged = false;
};

BfgsOutcome bfgs_minimize(const MapObjective& objective, Vector x,
                          const MapSolverConfig& cfg) {
  const int d = static_cast<int>(x.size());
  BfgsOutcome out;
  double f = objective(x);
  if (!std::isfinite(f)) {
    out.x = x;
    return out;
  }
  Vector g = objective.gradient(x, cfg.fd_relative_step, cfg.fd_absolute_step);
  Matrix h_inv = Matrix::Identity(d, d);

  for (int it = 0; it < cfg.max_iterations; ++it) {
    out.iterations = it + 1;
    if (g.lpNorm<Eigen::Infinity>() <= cfg.gradient_tolerance) {
      out.converged = true;
      break;
    }
    Vector p = -(h_inv * g);
    if (p.dot(g) >= 0.0) {  // curvature estimate lost descent; restart
      h_inv = Matrix::Identity(d, d);
      p = -g;
    }

    double step = 1.0;
    const double slope = g.dot(p);
    double f_new = kInf;
    Vector x_new;
    bool found = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * p;
      f_new = objective(x_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        found = true;
        break;
      }
      step *= 0.5;
    }
    if (!found) break;

    const Vector s = x_new - x;
    Vector g_new = objective.gradient(x_new, cfg.fd_relative_step, cfg.fd_absolute_step);
    const Vector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Matrix eye = Matrix::Identity(d, d);
      h_inv = (eye - rho * s * y.transpose()) * h_inv *
                  (eye - rho * y * s.transpose()) +
              rho * s * s.transpose();
    }
    const bool tiny_step = s.norm() <= cfg.step_tolerance * (1.0 + x.norm());
    x = std::move(x_new);
    f = f_new;
    g = std::move(g_new);
    if (tiny_step) break;
  }

  out.x = std::move(x);
  out.value = f;
  out.gradient_norm = g.lpNorm<Eigen::Infinity>();
  out.converged = out.converged || out.gradient_norm <= cfg.gradient_tolerance;
  return out;
}

}  // namespace

MapResult eval_F_map(const BayesianProblem& problem, const Vector& xi,
                     const MapSolverConfig& config) {
  problem.box.require_inside(xi);
  const GaussianSpec prior = problem.prior_family.at(xi);

  if (config.use_analytic_map && problem.analytic_map_point) {
    MapResult result;
    result.theta = problem.analytic_map_point(xi);
    result.qoi = problem.qoi(result.theta);
    MapObjective objective(problem, prior);
    result.objective = objective(result.theta);
    result.gradient_norm =
        objective.gradient(result.theta, config.fd_relative_step, config.fd_absolute_step)
            .lpNorm<Eigen::Infinity>();
    result.used_analytic = true;
    return result;
  }

  if (config.restarts < 1) throw ConfigError("map solver: needs at least one start");
  MapObjective objective(problem, prior);
  const Vector sd = prior.variance.cwiseSqrt();

  BfgsOutcome best;
  int best_start = -1;
  for (int r = 0; r < config.restarts; ++r) {
    Vector start = prior.mean;
    if (r > 0) {
      Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(r)));
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < start.size(); ++i)
        start[i] += config.restart_dispersion * sd[i] * normal(rng);
    }
    BfgsOutcome outcome = bfgs_minimize(objective, std::move(start), config);
    const bool better =
        best_start < 0 ||
        (outcome.converged && !best.converged) ||
        (outcome.converged == best.converged && outcome.value < best.value);
    if (better) {
      best = std::move(outcome);
      best_start = r;
    }
  }
  if (!best.converged)
    throw OptimizationError("map solve did not meet the gradient tolerance", best.x,
                            best.value);

  MapResult result;
  result.theta = best.x;
  result.qoi = problem.qoi(best.x);
  result.objective = best.value;
  result.gradient_norm = best.gradient_norm;
  result.iterations = best.iterations;
  result.restart_index = best_start;
  return result;
}

MapDesignResult eval_map_over_design(const BayesianProblem& problem, const Matrix& design,
                                     const MapSolverConfig& config) {
  if (design.rows() == 0) throw ConfigError("map design: empty design");
  MapDesignResult out;
  out.results.resize(static_cast<std::size_t>(design.rows()));
  long failed = 0;
  for (long i = 0; i < design.rows(); ++i) {
    try {
      out.results[static_cast<std::size_t>(i)] =
          eval_F_map(problem, design.row(i).transpose(), config);
    } catch (const std::exception& e) {
      ++failed;
      out.failures.push_back("design row " + std::to_string(i) + ": " + e.what());
    }
  }
  if (10 * failed > design.rows())
    throw OptimizationError("map solves failed on more than 10 percent of the design",
                            Vector(), static_cast<double>(failed));
  return out;
}

}  // namespace priorgsa
