// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <set>

#include <doctest.h>

#include "priorgsa/lhs.hpp"
#include "priorgsa/pce.hpp"

using namespace priorgsa;

namespace {

HyperparameterBox unit_box(int dim) {
  std::vector<std::string> names;
  for (int k = 0; k < dim; ++k) names.push_back("x" + std::to_string(k));
  return HyperparameterBox(names, Vector::Zero(dim), Vector::Ones(dim));
}

// Basis evaluation done independently of the surrogate: product of
// orthonormal Legendre factors in normalized coordinates.
double basis_value(const std::vector<int>& alpha, const HyperparameterBox& box,
                   const Vector& xi) {
  double value = 1.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    const long j = static_cast<long>(k);
    const double z =
        2.0 * (xi[j] - box.lower()[j]) / (box.upper()[j] - box.lower()[j]) - 1.0;
    value *= legendre_orthonormal(alpha[k], z);
  }
  return value;
}

}  // namespace

TEST_CASE("orthonormal Legendre values match the closed forms") {
  for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    CHECK(legendre_orthonormal(0, x) == doctest::Approx(1.0));
    CHECK(legendre_orthonormal(1, x) == doctest::Approx(std::sqrt(3.0) * x).epsilon(1e-14));
    CHECK(legendre_orthonormal(2, x) ==
          doctest::Approx(std::sqrt(5.0) * (1.5 * x * x - 0.5)).epsilon(1e-13));
    CHECK(legendre_orthonormal(3, x) ==
          doctest::Approx(std::sqrt(7.0) * (2.5 * x * x * x - 1.5 * x)).epsilon(1e-13));
  }
}

TEST_CASE("orthonormal Legendre family integrates to the identity gram matrix") {
  // Uniform measure on [-1, 1]: int (1/2) phi_i phi_j = delta_ij.
  // Simpson quadrature shares nothing with the recurrence under test.
  const int n = 20001;
  const double h = 2.0 / (n - 1);
  for (int i = 0; i <= 6; ++i) {
    for (int j = i; j <= 6; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        const double x = -1.0 + k * h;
        const double w = (k == 0 || k == n - 1) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        acc += w * legendre_orthonormal(i, x) * legendre_orthonormal(j, x);
      }
      acc *= h / 3.0 * 0.5;
      CHECK(acc == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("total-degree multi-index sets have the right size and order") {
  const auto indices = PCESurrogate::total_degree_multi_indices(2, 2);
  // C(2 + 2, 2) = 6 terms; graded order starting at the constant.
  REQUIRE(indices.size() == 6);
  CHECK(indices[0] == std::vector<int>{0, 0});
  std::set<std::vector<int>> unique(indices.begin(), indices.end());
  CHECK(unique.size() == indices.size());
  int last_degree = 0;
  for (const auto& alpha : indices) {
    int degree = 0;
    for (int a : alpha) degree += a;
    CHECK(degree >= last_degree);  // graded
    CHECK(degree <= 2);
    last_degree = degree;
  }

  CHECK(PCESurrogate::total_degree_multi_indices(3, 4).size() == 35);  // C(7,3)
  CHECK(PCESurrogate::total_degree_multi_indices(1, 5).size() == 6);
}

TEST_CASE("surrogate prediction is the coefficient-weighted basis sum") {
  const HyperparameterBox box = unit_box(2);
  const auto indices = PCESurrogate::total_degree_multi_indices(2, 2);
  Vector coefficients = Vector::Zero(6);
  coefficients[0] = 1.5;
  coefficients[1] = -0.5;
  coefficients[5] = 0.25;
  const PCESurrogate surrogate(box, 2, indices, coefficients);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    Vector xi(2);
    xi << unif(rng), unif(rng);
    double expected = 0.0;
    for (std::size_t t = 0; t < indices.size(); ++t)
      expected += coefficients[static_cast<long>(t)] * basis_value(indices[t], box, xi);
    CHECK(surrogate.predict(xi) == doctest::Approx(expected).epsilon(1e-13));
  }

  Matrix design(3, 2);
  design << 0.1, 0.2, 0.5, 0.5, 0.9, 0.1;
  const Vector many = surrogate.predict_many(design);
  for (int i = 0; i < 3; ++i)
    CHECK(many[i] == surrogate.predict(design.row(i).transpose()));
}

TEST_CASE("fitting reproduces polynomials from their own samples") {
  // Property suite: random sparse polynomials in the tensor Legendre basis
  // must be recovered from noise-free evaluations, coefficients and
  // held-out predictions alike.
  std::mt19937_64 rng(1717);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> dim_dist(1, 3);
  std::uniform_int_distribution<int> degree_dist(1, 4);
  std::normal_distribution<double> normal;

  for (int rep = 0; rep < 210; ++rep) {
    const int dim = dim_dist(rng);
    const int degree = degree_dist(rng);
    const HyperparameterBox box = unit_box(dim);
    const auto indices = PCESurrogate::total_degree_multi_indices(dim, degree);
    const long terms = static_cast<long>(indices.size());

    // Sparse truth: roughly half the terms active, constant always allowed.
    Vector truth = Vector::Zero(terms);
    for (long t = 0; t < terms; ++t) {
      if (unif(rng) < 0.5) truth[t] = 2.0 * normal(rng);
    }

    const int n = static_cast<int>(3 * terms + 8);
    const Matrix design = lhs_sample(box, n, 1000 + static_cast<std::uint64_t>(rep));
    Vector values(n);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t t = 0; t < indices.size(); ++t)
        acc += truth[static_cast<long>(t)] *
               basis_value(indices[t], box, design.row(i).transpose());
      values[i] = acc;
    }

    const PCESurrogate fit = fit_pce(design, values, box, degree, 5);
    REQUIRE(fit.coefficients().size() == terms);

    const double scale = std::max(1.0, truth.lpNorm<Eigen::Infinity>());
    CHECK((fit.coefficients() - truth).lpNorm<Eigen::Infinity>() < 1e-4 * scale);

    // Held-out points: the polynomial is reproduced, not just interpolated.
    const Matrix fresh = lhs_sample(box, 16, 900000 + static_cast<std::uint64_t>(rep));
    for (int i = 0; i < 16; ++i) {
      double acc = 0.0;
      for (std::size_t t = 0; t < indices.size(); ++t)
        acc += truth[static_cast<long>(t)] *
               basis_value(indices[t], box, fresh.row(i).transpose());
      CHECK(fit.predict(fresh.row(i).transpose()) ==
            doctest::Approx(acc).epsilon(1e-4).scale(scale));
    }
  }
}

TEST_CASE("lasso path prunes inactive terms on sparse targets") {
  const HyperparameterBox box = unit_box(3);
  const int n = 220;
  const Matrix design = lhs_sample(box, n, 77);
  // Function touching only inputs 0 and 1, quadratic at most.
  Vector values(n);
  for (int i = 0; i < n; ++i) {
    const double a = design(i, 0), b = design(i, 1);
    values[i] = 1.0 + 2.0 * a - 3.0 * b * b + a * b;
  }
  const PCESurrogate fit = fit_pce(design, values, box, 4, 5);
  CHECK(fit.active_terms() < static_cast<long>(fit.multi_indices().size()) / 2);
  CHECK(fit.cv_score < 1e-6);
  CHECK(fit.penalty >= 0.0);

  // Terms touching input 2 must be dead.
  const auto& indices = fit.multi_indices();
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t][2] > 0) CHECK(std::abs(fit.coefficients()[static_cast<long>(t)]) < 1e-6);
  }
}

TEST_CASE("sobol indices of a hand-built surrogate match the coefficient algebra") {
  const HyperparameterBox box = unit_box(2);
  const auto indices = PCESurrogate::total_degree_multi_indices(2, 2);
  // Layout: (0,0), then degree 1: (0,1), (1,0), then degree 2 terms.
  Vector c = Vector::Zero(6);
  std::size_t slot_10 = 0, slot_01 = 0, slot_11 = 0;
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] == std::vector<int>{1, 0}) slot_10 = t;
    if (indices[t] == std::vector<int>{0, 1}) slot_01 = t;
    if (indices[t] == std::vector<int>{1, 1}) slot_11 = t;
  }
  c[0] = 7.0;  // constant does not contribute to variance
  c[static_cast<long>(slot_10)] = 2.0;
  c[static_cast<long>(slot_01)] = 1.0;
  c[static_cast<long>(slot_11)] = 2.0;
  const PCESurrogate surrogate(box, 2, indices, c);

  const SobolIndexReport report = pce_sobol(surrogate);
  // Orthonormal basis: variance is the sum of squared non-constant
  // coefficients: 4 + 1 + 4 = 9.
  CHECK(report.total_variance == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(report.first_order[0] == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  CHECK(report.first_order[1] == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(report.total[0] == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  CHECK(report.total[1] == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  CHECK(report.method == "pce");
  CHECK_NOTHROW(report.validate());
  CHECK(report.ranking() == std::vector<int>{0, 1});

  // A constant surrogate reports zero variance and flags itself.
  const PCESurrogate constant(box, 2, indices, Vector::Unit(6, 0) * 3.0);
  const SobolIndexReport flat = pce_sobol(constant);
  CHECK(flat.constant_output);
  CHECK(flat.total_variance == 0.0);
  CHECK(flat.first_order.norm() == 0.0);
}

TEST_CASE("serialization round-trips predictions exactly") {
  const HyperparameterBox box = unit_box(2);
  const int n = 60;
  const Matrix design = lhs_sample(box, n, 5);
  Vector values(n);
  for (int i = 0; i < n; ++i)
    values[i] = std::sin(3.0 * design(i, 0)) + design(i, 1);
  const PCESurrogate fit = fit_pce(design, values, box, 3, 5);

  const PCESurrogate back = PCESurrogate::from_json(fit.to_json());
  CHECK(back.degree() == fit.degree());
  CHECK(back.coefficients() == fit.coefficients());
  CHECK(back.multi_indices() == fit.multi_indices());
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    Vector xi(2);
    xi << unif(rng), unif(rng);
    CHECK(back.predict(xi) == fit.predict(xi));
  }
}

TEST_CASE("fit_pce validates its inputs") {
  const HyperparameterBox box = unit_box(2);
  const Matrix design = lhs_sample(box, 30, 5);
  const Vector values = Vector::Ones(30);
  CHECK_THROWS_AS(fit_pce(design, Vector::Ones(29), box, 2), ConfigError);
  CHECK_THROWS_AS(fit_pce(design, values, box, -1), ConfigError);
  CHECK_THROWS_AS(fit_pce(design, values, box, 2, 1), ConfigError);
  CHECK_THROWS_AS(fit_pce(design, values, box, 2, 5, {0.5, -0.1}), ConfigError);
}

TEST_CASE("constant data produces the exact constant surrogate") {
  const HyperparameterBox box = unit_box(2);
  const Matrix design = lhs_sample(box, 40, 9);
  const PCESurrogate fit = fit_pce(design, Vector::Constant(40, 2.5), box, 3, 5);
  CHECK(fit.predict(box.center()) == doctest::Approx(2.5).epsilon(1e-12));
  const SobolIndexReport report = pce_sobol(fit);
  CHECK(report.constant_output);
}
