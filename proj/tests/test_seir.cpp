// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <doctest.h>

#include "priorgsa/seir.hpp"
#include "priorgsa/stats.hpp"

using namespace priorgsa;
using namespace priorgsa::seir_benchmark;

TEST_CASE("nominal rates, initial state, and observation grid") {
  const Vector nominal = nominal_log_rates();
  REQUIRE(nominal.size() == 4);
  CHECK(nominal[0] == doctest::Approx(std::log(5.48e-5)).epsilon(1e-14));
  CHECK(nominal[1] == doctest::Approx(std::log(1.0 / 2.5)).epsilon(1e-14));
  CHECK(nominal[2] == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-14));
  CHECK(nominal[3] == doctest::Approx(std::log(1.0 / 7.0)).epsilon(1e-14));

  Vector y0(4);
  y0 << 999.0, 0.0, 1.0, 0.0;
  CHECK(initial_compartments() == y0);
  CHECK(population() == 1000.0);
  CHECK(noise_std() == 30.0);

  const Vector times = observation_times();
  REQUIRE(times.size() == 15);
  CHECK(times[0] == 33.0);
  CHECK(times[14] == 75.0);
  for (int k = 1; k < 15; ++k) CHECK(times[k] - times[k - 1] == 3.0);
}

TEST_CASE("reproduction number matches the rate algebra") {
  // (beta / (gamma + mu)) (sigma / (sigma + mu)) at the nominal rates.
  const double mu = 5.48e-5, beta = 1.0 / 2.5, sigma = 1.0 / 3.0, gamma = 1.0 / 7.0;
  const double expected = (beta / (gamma + mu)) * (sigma / (sigma + mu));
  CHECK(r0(nominal_log_rates()) == doctest::Approx(expected).epsilon(1e-14));
  // Frozen reference value, rounded to 2.7985 in four decimal places.
  CHECK(r0(nominal_log_rates()) == doctest::Approx(2.7984662640052966).epsilon(1e-12));
}

TEST_CASE("reproduction number is monotone in the transmission and recovery rates") {
  Rng rng(61);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    Vector theta = nominal_log_rates();
    for (int k = 0; k < 4; ++k) theta[k] += unif(rng);
    const double base = r0(theta);
    Vector up = theta;
    up[1] += 0.05;  // faster transmission spreads harder
    CHECK(r0(up) > base);
    Vector recover = theta;
    recover[3] += 0.05;  // faster recovery spreads less
    CHECK(r0(recover) < base);
  }
}

TEST_CASE("integration reproduces an epidemic with a peak inside the window") {
  Vector dense_times(150);
  for (int k = 1; k <= 150; ++k) dense_times[k - 1] = static_cast<double>(k);
  const SEIRSolution solution = integrate_seir(nominal_log_rates(), dense_times);
  REQUIRE(solution.observed.size() == 150);

  // The outbreak grows from a single infected and dies back out.
  long peak_at = 0;
  double peak = -1.0;
  for (long k = 0; k < 150; ++k) {
    CHECK(solution.observed[k] >= -1e-9);
    if (solution.observed[k] > peak) {
      peak = solution.observed[k];
      peak_at = k + 1;  // observation k is day k + 1
    }
  }
  CHECK(peak > 100.0);
  CHECK(peak < 1000.0);
  CHECK(peak_at >= 40);
  CHECK(peak_at <= 80);
  CHECK(solution.observed[149] < peak / 2.0);
  CHECK(solution.steps > 0);
  CHECK(solution.conservation_defect < 1e-6);
}

TEST_CASE("integration agrees with itself across tolerance levels") {
  IntegratorConfig loose;
  loose.rel_tol = 1e-6;
  loose.abs_tol = 1e-8;
  IntegratorConfig tight;
  tight.rel_tol = 1e-11;
  tight.abs_tol = 1e-13;
  const Vector times = observation_times();
  const Vector a = integrate_seir(nominal_log_rates(), times, loose).observed;
  const Vector b = integrate_seir(nominal_log_rates(), times, tight).observed;
  CHECK((a - b).lpNorm<Eigen::Infinity>() < 1e-3);

  const Vector c = integrate_seir(nominal_log_rates(), times).observed;
  CHECK((c - b).lpNorm<Eigen::Infinity>() < 1e-4);
}

TEST_CASE("without transmission the infected pool decays exponentially") {
  Vector theta = nominal_log_rates();
  theta[1] = -40.0;  // transmission switched off
  Vector times(3);
  times << 10.0, 20.0, 33.0;
  const SEIRSolution solution = integrate_seir(theta, times);
  const double mu = std::exp(theta[0]);
  const double gamma = std::exp(theta[3]);
  for (int k = 0; k < 3; ++k) {
    // I(t) = exp(-(gamma + mu) t) from I(0) = 1 with an empty exposed pool.
    const double expected = std::exp(-(gamma + mu) * times[k]);
    CHECK(solution.observed[k] == doctest::Approx(expected).scale(1.0).epsilon(1e-6));
  }
}

TEST_CASE("compartment totals are conserved across the parameter box") {
  // Property suite: mass conservation S + E + I + R = N is an invariant of
  // the dynamics; the integrator must respect it for any plausible rates.
  Rng rng(1234);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Vector times = observation_times();
  for (int rep = 0; rep < 210; ++rep) {
    Vector theta(4);
    theta[0] = -15.0 + 10.0 * unif(rng);   // log mu
    theta[1] = -2.5 + 2.0 * unif(rng);     // log beta
    theta[2] = -2.5 + 2.0 * unif(rng);     // log sigma
    theta[3] = -2.5 + 2.0 * unif(rng);     // log gamma
    const SEIRSolution solution = integrate_seir(theta, times);
    CHECK(solution.conservation_defect < 1e-6);
    for (int k = 0; k < solution.observed.size(); ++k) {
      CHECK(solution.observed[k] >= -1e-9);
      CHECK(solution.observed[k] <= 1000.0 + 1e-6);
    }
  }
}

TEST_CASE("hard failures carry the offending parameters") {
  IntegratorConfig tiny;
  tiny.max_steps = 3;  // cannot reach the horizon
  try {
    integrate_seir(nominal_log_rates(), observation_times(), tiny);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.point == nominal_log_rates());
  }
}

TEST_CASE("default box and sampling prior cover the nominal rates") {
  const HyperparameterBox box = default_box();
  REQUIRE(box.dim() == 8);
  CHECK(box.names()[0] == "mean_log_mu");
  CHECK(box.names()[7] == "var_log_gamma");
  CHECK(box.lower()[0] == -15.0);
  CHECK(box.upper()[0] == -5.0);
  for (int k = 1; k < 4; ++k) {
    CHECK(box.lower()[k] == -2.25);
    CHECK(box.upper()[k] == -0.75);
  }
  for (int k = 4; k < 8; ++k) {
    CHECK(box.lower()[k] == 0.5);
    CHECK(box.upper()[k] == 1.5);
  }
  // Box centers sit near the nominal log rates for the three kinetic rates.
  const Vector nominal = nominal_log_rates();
  for (int k = 1; k < 4; ++k) {
    CHECK(nominal[k] > box.lower()[k] - 0.5);
    CHECK(nominal[k] < box.upper()[k] + 0.5);
  }

  const GaussianSpec is_prior = default_is_prior();
  REQUIRE(is_prior.dim() == 4);
  CHECK_NOTHROW(is_prior.validate());
  // Sampling prior must dominate every box prior: widest box variance is
  // 1.5, and the box means stay within two sampling standard deviations.
  for (int k = 0; k < 4; ++k) CHECK(is_prior.variance[k] >= 1.5);
}

TEST_CASE("simulated data is deterministic noise around the nominal trajectory") {
  const Vector d1 = simulate_data(5);
  const Vector d2 = simulate_data(5);
  CHECK(d1 == d2);
  CHECK(simulate_data(6) != d1);
  const Vector clean = integrate_seir(nominal_log_rates(), observation_times()).observed;
  REQUIRE(d1.size() == clean.size());
  // Noise standard deviation 30: residuals a few sigma at most.
  CHECK((d1 - clean).lpNorm<Eigen::Infinity>() < 150.0);
  CHECK((d1 - clean).norm() > 1.0);  // data is actually noisy
}

TEST_CASE("assembled problem exposes the epidemic quantity of interest") {
  const Vector data = simulate_data(5);
  const BayesianProblem problem = make_problem(data);
  CHECK_NOTHROW(problem.validate());
  CHECK(problem.box.dim() == 8);
  CHECK(problem.qoi(nominal_log_rates()) == doctest::Approx(r0(nominal_log_rates())));
  CHECK_FALSE(problem.analytic_map_point);  // no closed-form posterior mode here

  // Forward model returns the infected counts at the observation grid.
  const Vector g = problem.forward->evaluate(nominal_log_rates());
  const Vector reference = integrate_seir(nominal_log_rates(), observation_times()).observed;
  CHECK((g - reference).lpNorm<Eigen::Infinity>() < 1e-9);

  // Observation noise is independent with variance 900.
  CHECK(problem.noise->covariance()(0, 0) == doctest::Approx(900.0));
  CHECK(problem.noise->covariance()(0, 1) == 0.0);
}
