// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "priorgsa/problem.hpp"

namespace priorgsa::seir_benchmark {

// Epidemic compartment model with demography on a population of 1000:
//   S' = mu N - beta S I / N - mu S
//   E' = beta S I / N - (sigma + mu) E
//   I' = sigma E - (gamma + mu) I
//   R' = gamma I - mu R
// Parameters enter as logarithms, theta = (log mu, log beta, log sigma,
// log gamma). Infected counts are observed every 3 days from day 33 to 75
// under independent Gaussian noise with standard deviation 30.

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_step = 0.1;
  long max_steps = 1000000;
};

Vector nominal_log_rates();     // log(5.48e-5, 1/2.5, 1/3, 1/7)
Vector initial_compartments(); // (999, 0, 1, 0)
double population();           // 1000
Vector observation_times();    // 33, 36, ..., 75
double noise_std();            // 30

HyperparameterBox default_box();
GaussianSpec default_is_prior();

struct SEIRSolution {
  Vector observed;                    // infected counts at the requested times
  double conservation_defect = 0.0;   // max |S+E+I+R - N| at accepted steps
  long steps = 0;                     // accepted integrator steps
};

// Adaptive Runge-Kutta integration with dense-output interpolation at the
// observation times. Blowups, non-finite states, and step-budget exhaustion
// raise EvaluationError carrying theta.
SEIRSolution integrate_seir(const Vector& theta, const Vector& times,
                            const IntegratorConfig& config = {});

// Basic reproduction number (beta / (gamma + mu)) (sigma / (sigma + mu)).
double r0(const Vector& theta);

Vector simulate_data(std::uint64_t seed, const IntegratorConfig& config = {});

BayesianProblem make_problem(const Vector& data, const IntegratorConfig& config = {});
BayesianProblem make_problem(const Vector& data, HyperparameterBox box,
                             const IntegratorConfig& config = {});

}  // namespace priorgsa::seir_benchmark
