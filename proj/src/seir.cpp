// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/seir.hpp"

#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "priorgsa/stats.hpp"

namespace priorgsa::seir_benchmark {

namespace {

using State = std::array<double, 4>;

class SEIRForwardModel : public ForwardModel {
 public:
  explicit SEIRForwardModel(IntegratorConfig config)
      : times_(observation_times()), config_(config) {}
  int param_dim() const override { return 4; }
  int obs_dim() const override { return static_cast<int>(times_.size()); }
  Vector evaluate(const Vector& theta) const override {
    return integrate_seir(theta, times_, config_).observed;
  }

 private:
  Vector times_;
  IntegratorConfig config_;
};

}  // namespace

Vector nominal_log_rates() {
  Vector theta(4);
  theta << std::log(5.48e-5), std::log(1.0 / 2.5), std::log(1.0 / 3.0),
      std::log(1.0 / 7.0);
  return theta;
}

Vector initial_compartments() {
  Vector y0(4);
  y0 << 999.0, 0.0, 1.0, 0.0;
  return y0;
}

double population() { return 1000.0; }

Vector observation_times() {
  Vector t(15);
  for (int k = 0; k < 15; ++k) t[k] = 3.0 * (k + 1) + 30.0;
  return t;
}

double noise_std() { return 30.0; }

HyperparameterBox default_box() {
  Vector lower(8), upper(8);
  lower << -15.0, -2.25, -2.25, -2.25, 0.5, 0.5, 0.5, 0.5;
  upper << -5.0, -0.75, -0.75, -0.75, 1.5, 1.5, 1.5, 1.5;
  return HyperparameterBox(
      {"mean_log_mu", "mean_log_beta", "mean_log_sigma", "mean_log_gamma",
       "var_log_mu", "var_log_beta", "var_log_sigma", "var_log_gamma"},
      lower, upper);
}

GaussianSpec default_is_prior() {
  GaussianSpec spec;
  spec.mean.resize(4);
  spec.mean << -10.0, -1.5, -1.5, -1.5;
  spec.variance.resize(4);
  spec.variance << 9.0, 4.0, 4.0, 4.0;
  return spec;
}

SEIRSolution integrate_seir(const Vector& theta, const Vector& times,
                            const IntegratorConfig& config) {
  if (theta.size() != 4) throw DomainError("seir: theta must have 4 entries");
  if (times.size() == 0) throw DomainError("seir: no observation times");
  for (int i = 0; i < times.size(); ++i)
    if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1])))
      throw DomainError("seir: observation times must be positive and increasing");
  for (int i = 0; i < 4; ++i)
    if (!std::isfinite(theta[i]) || theta[i] > 50.0)
      throw EvaluationError("seir: rate out of range", theta);

  const double mu = std::exp(theta[0]);
  const double beta = std::exp(theta[1]);
  const double sigma = std::exp(theta[2]);
  const double gamma = std::exp(theta[3]);
  const double n_pop = population();

  auto rhs = [&](const State& y, State& dydt, double) {
    const double infection = beta * y[0] * y[2] / n_pop;
    dydt[0] = mu * n_pop - infection - mu * y[0];
    dydt[1] = infection - (sigma + mu) * y[1];
    dydt[2] = sigma * y[1] - (gamma + mu) * y[2];
    dydt[3] = gamma * y[2] - mu * y[3];
  };

  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_dense_output(config.abs_tol, config.rel_tol,
                                        ode::runge_kutta_dopri5<State>());
  State y0;
  const Vector init = initial_compartments();
  for (int i = 0; i < 4; ++i) y0[static_cast<std::size_t>(i)] = init[i];
  stepper.initialize(y0, 0.0, config.initial_step);

  SEIRSolution solution;
  solution.observed.resize(times.size());
  const double t_end = times[times.size() - 1];
  long next_obs = 0;
  while (next_obs < times.size()) {
    if (solution.steps >= config.max_steps)
      throw EvaluationError("seir: integrator exceeded its step budget", theta);
    stepper.do_step(rhs);
    ++solution.steps;
    const State& y = stepper.current_state();
    double total = 0.0;
    for (double c : y) {
      if (!std::isfinite(c)) throw EvaluationError("seir: state blew up", theta);
      total += c;
    }
    solution.conservation_defect =
        std::max(solution.conservation_defect, std::abs(total - n_pop));
    while (next_obs < times.size() && times[next_obs] <= stepper.current_time()) {
      State at_time;
      stepper.calc_state(times[next_obs], at_time);
      solution.observed[next_obs] = at_time[2];
      ++next_obs;
    }
    if (stepper.current_time() > t_end && next_obs < times.size())
      throw EvaluationError("seir: integration passed the horizon", theta);
  }
  return solution;
}

double r0(const Vector& theta) {
  if (theta.size() != 4) throw DomainError("seir: theta must have 4 entries");
  const double mu = std::exp(theta[0]);
  const double beta = std::exp(theta[1]);
  const double sigma = std::exp(theta[2]);
  const double gamma = std::exp(theta[3]);
  return beta / (gamma + mu) * (sigma / (sigma + mu));
}

Vector simulate_data(std::uint64_t seed, const IntegratorConfig& config) {
  const Vector clean =
      integrate_seir(nominal_log_rates(), observation_times(), config).observed;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, noise_std());
  Vector data = clean;
  for (int i = 0; i < data.size(); ++i) data[i] += normal(rng);
  return data;
}

BayesianProblem make_problem(const Vector& data, const IntegratorConfig& config) {
  return make_problem(data, default_box(), config);
}

BayesianProblem make_problem(const Vector& data, HyperparameterBox box,
                             const IntegratorConfig& config) {
  const Vector times = observation_times();
  if (data.size() != times.size())
    throw ConfigError("seir benchmark: data length must match the observation grid");
  const double sd = noise_std();
  BayesianProblem problem{
      std::make_shared<SEIRForwardModel>(config),
      std::make_shared<GaussianNoiseModel>(
          data, sd * sd * Matrix::Identity(times.size(), times.size())),
      GaussianPriorFamily::standard(4),
      std::move(box),
      [](const Vector& theta) { return r0(theta); },
      default_is_prior(),
      {}};
  problem.validate();
  return problem;
}

}  // namespace priorgsa::seir_benchmark
