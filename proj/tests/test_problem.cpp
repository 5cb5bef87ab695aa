// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "priorgsa/linear_problem.hpp"
#include "priorgsa/problem.hpp"
#include "priorgsa/stats.hpp"

using namespace priorgsa;

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

TEST_CASE("GaussianSpec log density matches the closed form") {
  GaussianSpec spec;
  spec.mean = Vector::Zero(2);
  spec.variance = Vector::Ones(2);
  // Standard bivariate normal at the origin: -log(2 pi).
  CHECK(spec.log_density(Vector::Zero(2)) == doctest::Approx(-kLog2Pi).epsilon(1e-15));

  // Shifted anisotropic case, assembled by hand:
  // -1/2 [ (x-m)^2/v + log(2 pi v) ] per coordinate.
  spec.mean << 1.0, -2.0;
  spec.variance << 4.0, 0.25;
  Vector x(2);
  x << 3.0, -1.0;
  const double expected = -0.5 * (4.0 / 4.0 + std::log(2.0 * M_PI * 4.0)) -
                          0.5 * (1.0 / 0.25 + std::log(2.0 * M_PI * 0.25));
  CHECK(spec.log_density(x) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("GaussianSpec validation and sampling") {
  GaussianSpec spec;
  spec.mean = Vector::Zero(2);
  spec.variance = Vector::Ones(3);
  CHECK_THROWS_AS(spec.validate(), ConfigError);

  spec.variance = Vector::Ones(2);
  spec.variance[1] = -1.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);

  spec.mean << 5.0, -5.0;
  spec.variance << 0.01, 0.01;
  const Vector draw = spec.sample(123);
  CHECK(draw.size() == 2);
  CHECK(draw[0] == doctest::Approx(5.0).epsilon(0.2));
  CHECK(draw[1] == doctest::Approx(-5.0).epsilon(0.2));
  CHECK(spec.sample(123) == draw);       // deterministic
  CHECK(spec.sample(124) != draw);
}

TEST_CASE("GaussianNoiseModel misfit and density with a full covariance") {
  Vector data(2);
  data << 1.0, 1.0;
  Matrix cov(2, 2);
  cov << 2.0, 1.0, 1.0, 2.0;
  GaussianNoiseModel noise(data, cov);

  // At output 0 the residual is (1,1); C^{-1} (1,1)' = (1/3, 1/3)',
  // so the misfit is 2/3 and log det(2 pi C) = 2 log(2 pi) + log 3.
  const Vector zero = Vector::Zero(2);
  CHECK(noise.misfit(zero) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  const double expected = -0.5 * (2.0 / 3.0) - 0.5 * (2.0 * kLog2Pi + std::log(3.0));
  CHECK(noise.log_density(zero) == doctest::Approx(expected).epsilon(1e-14));

  // Zero residual: misfit vanishes, density is the normalization alone.
  CHECK(noise.misfit(data) == doctest::Approx(0.0));
  const Vector solved = noise.solve_covariance(data);
  CHECK((cov * solved - data).norm() < 1e-12);
}

TEST_CASE("GaussianPriorFamily standard wiring") {
  const GaussianPriorFamily family = GaussianPriorFamily::standard(2);
  CHECK(family.param_dim() == 2);
  CHECK(family.hyper_dim() == 4);
  Vector xi(4);
  xi << 1.0, -2.0, 0.5, 4.0;
  const GaussianSpec spec = family.at(xi);
  CHECK(spec.mean[0] == 1.0);
  CHECK(spec.mean[1] == -2.0);
  CHECK(spec.variance[0] == 0.5);
  CHECK(spec.variance[1] == 4.0);

  xi[2] = 0.0;
  CHECK_THROWS_AS(family.at(xi), DomainError);
  xi[2] = -1.0;
  CHECK_THROWS_AS(family.at(xi), DomainError);
}

TEST_CASE("GaussianPriorFamily supports shared hyperparameter slots") {
  // Both coordinates read mean slot 0 and variance slot 1.
  const GaussianPriorFamily family(2, {0, 0}, {1, 1}, 2);
  Vector xi(2);
  xi << 3.0, 2.0;
  const GaussianSpec spec = family.at(xi);
  CHECK(spec.mean[0] == 3.0);
  CHECK(spec.mean[1] == 3.0);
  CHECK(spec.variance[0] == 2.0);
  CHECK(spec.variance[1] == 2.0);
}

TEST_CASE("GaussianPriorFamily rejects malformed wiring") {
  CHECK_THROWS_AS(GaussianPriorFamily(2, {0, 5}, {2, 3}, 4), ConfigError);
  CHECK_THROWS_AS(GaussianPriorFamily(2, {0}, {2, 3}, 4), ConfigError);
}

TEST_CASE("HyperparameterBox membership and lookups") {
  HyperparameterBox box({"a", "b"}, Vector::Zero(2), Vector::Ones(2));
  CHECK(box.contains(box.center()));
  CHECK(box.contains(box.lower()));
  CHECK(box.contains(box.upper()));
  Vector outside(2);
  outside << 0.5, 1.5;
  CHECK_FALSE(box.contains(outside));
  CHECK_THROWS_AS(box.require_inside(outside), DomainError);
  CHECK(box.index_of("b") == 1);
  CHECK_THROWS_AS(box.index_of("missing"), DomainError);
  CHECK(box.width()[0] == 1.0);
}

TEST_CASE("linear problem log densities match frozen hand values") {
  const Vector data = linear_benchmark::noiseless_data();
  const BayesianProblem problem = linear_benchmark::make_problem(data);

  // Unit noise, data (1, 0, -2, -4): at theta = 0 the misfit is
  // 1 + 0 + 4 + 16 = 21 and the normalization is -(4/2) log(2 pi).
  const double ll0 = log_likelihood(problem, Vector::Zero(2));
  CHECK(ll0 == doctest::Approx(-0.5 * 21.0 - 2.0 * kLog2Pi).epsilon(1e-14));

  // Prior at xi = (1,1,1,1) evaluated at its own mean: -log(2 pi).
  Vector xi = Vector::Ones(4);
  Vector theta = Vector::Ones(2);
  CHECK(log_prior(problem, xi, theta) == doctest::Approx(-kLog2Pi).epsilon(1e-14));

  CHECK(log_posterior_unnormalized(problem, xi, theta) ==
        doctest::Approx(log_likelihood(problem, theta) + log_prior(problem, xi, theta))
            .epsilon(1e-15));

  // xi outside the box must be refused, not silently evaluated.
  Vector bad_xi = xi;
  bad_xi[0] = 100.0;
  CHECK_THROWS_AS(log_prior(problem, bad_xi, theta), DomainError);
}

TEST_CASE("BayesianProblem validation collects every violation") {
  const Vector data = linear_benchmark::noiseless_data();
  BayesianProblem problem = linear_benchmark::make_problem(data);
  CHECK_NOTHROW(problem.validate());

  problem.qoi = nullptr;
  problem.is_prior.variance[0] = -1.0;
  try {
    problem.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations.size() >= 2);
  }
}
