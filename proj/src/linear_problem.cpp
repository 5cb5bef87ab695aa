// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/linear_problem.hpp"

#include "priorgsa/stats.hpp"

namespace priorgsa::linear_benchmark {

namespace {

class LinearForwardModel : public ForwardModel {
 public:
  LinearForwardModel() : a_(design_matrix()) {}
  int param_dim() const override { return 2; }
  int obs_dim() const override { return 4; }
  Vector evaluate(const Vector& theta) const override { return a_ * theta; }

 private:
  Matrix a_;
};

}  // namespace

Matrix design_matrix() {
  Matrix a(4, 2);
  a << 1.0, 0.0, 1.0, 0.5, 1.0, 1.5, 1.0, 2.5;
  return a;
}

Vector true_parameters() {
  Vector theta(2);
  theta << 1.0, -2.0;
  return theta;
}

Vector noiseless_data() { return design_matrix() * true_parameters(); }

Vector simulate_data(std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector y = noiseless_data();
  for (int i = 0; i < y.size(); ++i) y[i] += normal(rng);
  return y;
}

HyperparameterBox default_box() {
  Vector lower(4), upper(4);
  lower.setConstant(0.5);
  upper.setConstant(1.5);
  return HyperparameterBox({"mean_intercept", "mean_slope", "var_intercept", "var_slope"},
                           lower, upper);
}

GaussianSpec default_is_prior() {
  GaussianSpec spec;
  spec.mean = Vector::Constant(2, 1.0);
  spec.variance = Vector::Constant(2, 2.25);
  return spec;
}

BayesianProblem make_problem(const Vector& data) {
  return make_problem(data, default_box());
}

BayesianProblem make_problem(const Vector& data, HyperparameterBox box) {
  if (data.size() != 4) throw ConfigError("linear benchmark: data must have 4 entries");
  BayesianProblem problem{
      std::make_shared<LinearForwardModel>(),
      std::make_shared<GaussianNoiseModel>(data, Matrix::Identity(4, 4)),
      GaussianPriorFamily::standard(2),
      std::move(box),
      [](const Vector& theta) { return theta.squaredNorm(); },
      default_is_prior(),
      {}};
  const Vector y = data;
  const GaussianPriorFamily family = problem.prior_family;
  problem.analytic_map_point = [y, family](const Vector& xi) {
    return posterior_moments(y, family.at(xi)).mean;
  };
  problem.validate();
  return problem;
}

PosteriorMoments posterior_moments(const Vector& data, const GaussianSpec& prior) {
  if (data.size() != 4 || prior.dim() != 2)
    throw DomainError("linear benchmark: bad data or prior shape");
  const Matrix a = design_matrix();
  Matrix precision = a.transpose() * a;
  precision.diagonal() += prior.variance.cwiseInverse();
  const Matrix cov = precision.inverse();
  const Vector rhs =
      a.transpose() * data + prior.mean.cwiseQuotient(prior.variance);
  return {cov * rhs, cov};
}

double analytic_f_mean(const Vector& data, const GaussianSpec& prior) {
  const PosteriorMoments post = posterior_moments(data, prior);
  return post.mean.squaredNorm() + post.covariance.trace();
}

double analytic_f_var(const Vector& data, const GaussianSpec& prior) {
  const PosteriorMoments post = posterior_moments(data, prior);
  return 2.0 * (post.covariance * post.covariance).trace() +
         4.0 * post.mean.dot(post.covariance * post.mean);
}

double analytic_f_mean(const Vector& data, const GaussianPriorFamily& family,
                       const Vector& xi) {
  return analytic_f_mean(data, family.at(xi));
}

double analytic_f_var(const Vector& data, const GaussianPriorFamily& family,
                      const Vector& xi) {
  return analytic_f_var(data, family.at(xi));
}

}  // namespace priorgsa::linear_benchmark
