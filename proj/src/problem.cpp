// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/problem.hpp"

#include <algorithm>
#include <cmath>

#include "priorgsa/stats.hpp"

namespace priorgsa {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // log(2 pi)
}

void GaussianSpec::validate() const {
  if (mean.size() != variance.size())
    throw ConfigError("Gaussian spec: mean and variance dimensions differ");
  if (mean.size() == 0) throw ConfigError("Gaussian spec: empty");
  for (int i = 0; i < variance.size(); ++i)
    if (!(variance[i] > 0.0) || !std::isfinite(variance[i]) || !std::isfinite(mean[i]))
      throw ConfigError("Gaussian spec: coordinate " + std::to_string(i) +
                        " needs a finite mean and a positive finite variance");
}

double GaussianSpec::log_density(const Vector& theta) const {
  if (theta.size() != mean.size())
    throw DomainError("Gaussian log density: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < mean.size(); ++i) {
    const double z = theta[i] - mean[i];
    s += -0.5 * (kLog2Pi + std::log(variance[i])) - 0.5 * z * z / variance[i];
  }
  return s;
}

Vector GaussianSpec::sample(std::uint64_t seed) const {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(mean.size());
  for (int i = 0; i < mean.size(); ++i)
    x[i] = mean[i] + std::sqrt(variance[i]) * normal(rng);
  return x;
}

HyperparameterBox::HyperparameterBox(std::vector<std::string> names, Vector lower,
                                     Vector upper)
    : names_(std::move(names)), lower_(std::move(lower)), upper_(std::move(upper)) {
  std::vector<std::string> bad;
  if (lower_.size() == 0) bad.push_back("box: empty");
  if (lower_.size() != upper_.size()) bad.push_back("box: bound dimensions differ");
  if (static_cast<int>(names_.size()) != lower_.size())
    bad.push_back("box: name count does not match the dimension");
  if (bad.empty())
    for (int i = 0; i < lower_.size(); ++i) {
      if (!(lower_[i] < upper_[i]))
        bad.push_back("box: empty interval for " + names_[i]);
      for (int j = i + 1; j < lower_.size(); ++j)
        if (names_[i] == names_[j]) bad.push_back("box: duplicate name " + names_[i]);
    }
  if (!bad.empty()) throw ConfigError(bad);
}

bool HyperparameterBox::contains(const Vector& xi) const {
  if (xi.size() != lower_.size()) return false;
  for (int i = 0; i < xi.size(); ++i)
    if (!(xi[i] >= lower_[i] && xi[i] <= upper_[i])) return false;
  return true;
}

void HyperparameterBox::require_inside(const Vector& xi) const {
  if (!contains(xi))
    throw DomainError("hyperparameter point lies outside the admissible box");
}

int HyperparameterBox::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  throw DomainError("unknown hyperparameter name: " + name);
}

GaussianNoiseModel::GaussianNoiseModel(Vector data, Matrix covariance)
    : data_(std::move(data)), covariance_(std::move(covariance)) {
  std::vector<std::string> bad;
  if (data_.size() == 0) bad.push_back("noise model: empty data vector");
  if (covariance_.rows() != covariance_.cols())
    bad.push_back("noise model: covariance is not square");
  if (covariance_.rows() != data_.size())
    bad.push_back("noise model: covariance does not match the data dimension");
  if (!bad.empty()) throw ConfigError(bad);
  llt_.compute(covariance_);
  if (llt_.info() != Eigen::Success)
    throw ConfigError("noise model: covariance is not positive definite");
  const double log_det =
      2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
  log_norm_constant_ = -0.5 * (data_.size() * kLog2Pi + log_det);
}

double GaussianNoiseModel::misfit(const Vector& model_output) const {
  if (model_output.size() != data_.size())
    throw DomainError("noise model: output dimension mismatch");
  const Vector r = data_ - model_output;
  return r.dot(llt_.solve(r));
}

double GaussianNoiseModel::log_density(const Vector& model_output) const {
  return log_norm_constant_ - 0.5 * misfit(model_output);
}

GaussianPriorFamily::GaussianPriorFamily(int param_dim, std::vector<int> mean_slots,
                                         std::vector<int> variance_slots, int hyper_dim)
    : param_dim_(param_dim),
      mean_slots_(std::move(mean_slots)),
      variance_slots_(std::move(variance_slots)),
      hyper_dim_(hyper_dim) {
  std::vector<std::string> bad;
  if (param_dim_ <= 0) bad.push_back("prior family: non-positive parameter dimension");
  if (static_cast<int>(mean_slots_.size()) != param_dim_ ||
      static_cast<int>(variance_slots_.size()) != param_dim_)
    bad.push_back("prior family: slot lists must have one entry per parameter");
  std::vector<bool> used(static_cast<std::size_t>(std::max(hyper_dim_, 0)), false);
  auto check = [&](const std::vector<int>& slots, const char* what) {
    for (int s : slots) {
      if (s < 0 || s >= hyper_dim_)
        bad.push_back(std::string("prior family: ") + what + " slot out of range");
      else
        used[static_cast<std::size_t>(s)] = true;
    }
  };
  check(mean_slots_, "mean");
  check(variance_slots_, "variance");
  if (bad.empty())
    for (int s = 0; s < hyper_dim_; ++s)
      if (!used[static_cast<std::size_t>(s)])
        bad.push_back("prior family: hyperparameter slot " + std::to_string(s) +
                      " is never referenced");
  if (!bad.empty()) throw ConfigError(bad);
}

GaussianPriorFamily GaussianPriorFamily::standard(int param_dim) {
  std::vector<int> mean(param_dim), var(param_dim);
  for (int i = 0; i < param_dim; ++i) {
    mean[i] = i;
    var[i] = param_dim + i;
  }
  return GaussianPriorFamily(param_dim, std::move(mean), std::move(var), 2 * param_dim);
}

GaussianSpec GaussianPriorFamily::at(const Vector& xi) const {
  if (xi.size() != hyper_dim_)
    throw DomainError("prior family: hyperparameter dimension mismatch");
  GaussianSpec spec;
  spec.mean.resize(param_dim_);
  spec.variance.resize(param_dim_);
  for (int i = 0; i < param_dim_; ++i) {
    spec.mean[i] = xi[mean_slots_[static_cast<std::size_t>(i)]];
    const double v = xi[variance_slots_[static_cast<std::size_t>(i)]];
    if (!(v > 0.0))
      throw DomainError("prior family: non-positive variance for parameter " +
                        std::to_string(i));
    spec.variance[i] = v;
  }
  return spec;
}

void BayesianProblem::validate() const {
  std::vector<std::string> bad;
  if (!forward) bad.push_back("problem: missing forward model");
  if (!noise) bad.push_back("problem: missing noise model");
  if (!qoi) bad.push_back("problem: missing quantity of interest");
  if (forward && noise && forward->obs_dim() != noise->obs_dim())
    bad.push_back("problem: forward output and data dimensions differ");
  if (forward && forward->param_dim() != prior_family.param_dim())
    bad.push_back("problem: forward parameter and prior dimensions differ");
  if (box.dim() != prior_family.hyper_dim())
    bad.push_back("problem: box dimension does not match the prior family");
  try {
    is_prior.validate();
    if (is_prior.dim() != prior_family.param_dim())
      bad.push_back("problem: sampling prior dimension mismatch");
  } catch (const ConfigError& e) {
    for (const auto& v : e.violations) bad.push_back("problem: sampling prior: " + v);
  }
  if (!bad.empty()) throw ConfigError(bad);
}

double log_likelihood(const BayesianProblem& problem, const Vector& theta) {
  if (theta.size() != problem.forward->param_dim())
    throw DomainError("log_likelihood: parameter dimension mismatch");
  const Vector g = problem.forward->evaluate(theta);
  if (g.size() != problem.noise->obs_dim() || !g.allFinite())
    throw EvaluationError("forward model returned an invalid output", theta);
  return problem.noise->log_density(g);
}

double log_prior(const BayesianProblem& problem, const Vector& xi, const Vector& theta) {
  problem.box.require_inside(xi);
  return problem.prior_family.at(xi).log_density(theta);
}

double log_posterior_unnormalized(const BayesianProblem& problem, const Vector& xi,
                                  const Vector& theta) {
  return log_likelihood(problem, theta) + log_prior(problem, xi, theta);
}

}  // namespace priorgsa
