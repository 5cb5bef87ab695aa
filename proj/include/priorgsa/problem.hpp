// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>

#include "priorgsa/common.hpp"

namespace priorgsa {

// Parameter-to-observable map G: R^d -> R^m.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;
  virtual int param_dim() const = 0;
  virtual int obs_dim() const = 0;
  // Must either return a finite vector of length obs_dim() or throw
  // EvaluationError carrying the offending parameter point.
  virtual Vector evaluate(const Vector& theta) const = 0;
};

// Additive centered Gaussian observation noise with fixed covariance,
// bound to one observed data vector.
class GaussianNoiseModel {
 public:
  GaussianNoiseModel(Vector data, Matrix covariance);

  int obs_dim() const { return static_cast<int>(data_.size()); }
  const Vector& data() const { return data_; }
  const Matrix& covariance() const { return covariance_; }
  // -1/2 (d - g)' C^{-1} (d - g) - 1/2 log det(2 pi C)
  double log_density(const Vector& model_output) const;
  // Quadratic misfit (d - g)' C^{-1} (d - g) without the constant.
  double misfit(const Vector& model_output) const;
  Vector solve_covariance(const Vector& r) const { return llt_.solve(r); }

 private:
  Vector data_;
  Matrix covariance_;
  Eigen::LLT<Matrix> llt_;
  double log_norm_constant_;
};

// Family of independent Gaussian priors on theta indexed by a hyperparameter
// vector xi. Each theta coordinate references one mean slot and one variance
// slot of xi; slots may be shared between coordinates.
class GaussianPriorFamily {
 public:
  GaussianPriorFamily(int param_dim, std::vector<int> mean_slots,
                      std::vector<int> variance_slots, int hyper_dim);

  // Convenience wiring: xi = (mu_1..mu_d, sigma2_1..sigma2_d).
  static GaussianPriorFamily standard(int param_dim);

  int param_dim() const { return param_dim_; }
  int hyper_dim() const { return hyper_dim_; }
  const std::vector<int>& mean_slots() const { return mean_slots_; }
  const std::vector<int>& variance_slots() const { return variance_slots_; }
  // Concrete prior at xi; throws DomainError on a non-positive variance slot.
  GaussianSpec at(const Vector& xi) const;

 private:
  int param_dim_;
  std::vector<int> mean_slots_;
  std::vector<int> variance_slots_;
  int hyper_dim_;
};

// Scalar quantity of interest q(theta).
using QoIFunction = std::function<double(const Vector&)>;

// Everything a hyperparameter-to-statistic evaluation needs.
struct BayesianProblem {
  std::shared_ptr<const ForwardModel> forward;
  std::shared_ptr<const GaussianNoiseModel> noise;
  GaussianPriorFamily prior_family;
  HyperparameterBox box;
  QoIFunction qoi;
  // Sampling prior used by the shared-chain estimator; wide enough to cover
  // every prior the box can produce.
  GaussianSpec is_prior;
  // Set when the posterior mode has a closed form; keyed on xi.
  std::function<Vector(const Vector&)> analytic_map_point;

  void validate() const;  // throws ConfigError listing every violation
};

// Log likelihood of the data under theta, normalization constant included.
double log_likelihood(const BayesianProblem& problem, const Vector& theta);

// Log prior density at theta for the prior selected by xi.
// xi must lie in the box; violations raise DomainError.
double log_prior(const BayesianProblem& problem, const Vector& xi, const Vector& theta);

// log likelihood + log prior (posterior up to the xi-dependent evidence).
double log_posterior_unnormalized(const BayesianProblem& problem, const Vector& xi,
                                  const Vector& theta);

}  // namespace priorgsa
