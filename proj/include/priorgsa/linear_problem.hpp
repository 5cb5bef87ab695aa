// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "priorgsa/problem.hpp"

namespace priorgsa::linear_benchmark {

// Four observations of a line b + m t at t = 0, 0.5, 1.5, 2.5 with unit
// noise; parameters theta = (b, m), quantity of interest |theta|^2.
// Posterior moments and both moment maps have closed forms, so this problem
// anchors the estimator tests.

Matrix design_matrix();      // 4 x 2, rows (1, t_i)
Vector true_parameters();    // (1, -2)
Vector noiseless_data();     // design * true parameters
Vector simulate_data(std::uint64_t seed);

HyperparameterBox default_box();  // means and variances in [0.5, 1.5]
GaussianSpec default_is_prior();  // mean (1, 1), variance (2.25, 2.25)

BayesianProblem make_problem(const Vector& data);
BayesianProblem make_problem(const Vector& data, HyperparameterBox box);

struct PosteriorMoments {
  Vector mean;
  Matrix covariance;
};
PosteriorMoments posterior_moments(const Vector& data, const GaussianSpec& prior);

// E[q] = |mean|^2 + tr(cov) for q = |theta|^2 under the Gaussian posterior.
double analytic_f_mean(const Vector& data, const GaussianSpec& prior);
// Var[q] = 2 tr(cov^2) + 4 mean' cov mean.
double analytic_f_var(const Vector& data, const GaussianSpec& prior);

// Closed-form maps as functions of the hyperparameter point.
double analytic_f_mean(const Vector& data, const GaussianPriorFamily& family,
                       const Vector& xi);
double analytic_f_var(const Vector& data, const GaussianPriorFamily& family,
                      const Vector& xi);

}  // namespace priorgsa::linear_benchmark
