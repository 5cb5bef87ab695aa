// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <doctest.h>

#include "priorgsa/sobol.hpp"

using namespace priorgsa;

namespace {

SobolIndexReport make_report(std::initializer_list<double> first,
                             std::initializer_list<double> total) {
  SobolIndexReport report;
  report.first_order = Vector(static_cast<long>(first.size()));
  report.total = Vector(static_cast<long>(total.size()));
  long i = 0;
  for (double v : first) report.first_order[i++] = v;
  i = 0;
  for (double v : total) report.total[i++] = v;
  for (long k = 0; k < report.first_order.size(); ++k)
    report.input_names.push_back("x" + std::to_string(k));
  report.total_variance = 1.0;
  report.method = "fixture";
  return report;
}

}  // namespace

TEST_CASE("ranking sorts by clamped total index with stable ties") {
  const auto report = make_report({0.1, 0.2, 0.05, 0.2}, {0.3, 0.5, -0.01, 0.5});
  // Totals: 0.3, 0.5, -0.01 (clamps to 0), 0.5. Ties keep declaration order.
  CHECK(report.ranking() == std::vector<int>{1, 3, 0, 2});

  // All-negative totals clamp to zero and fall back to declaration order.
  const auto flat = make_report({0.0, 0.0}, {-0.002, -0.001});
  CHECK(flat.ranking() == std::vector<int>{0, 1});
}

TEST_CASE("validate accepts structurally sound reports") {
  CHECK_NOTHROW(make_report({0.2, 0.3}, {0.4, 0.6}).validate());
  // Estimator noise slightly past the bounds passes within the slack.
  CHECK_NOTHROW(make_report({-1e-10, 0.5}, {0.2, 1.0 + 1e-10}).validate());
  // Constant outputs carry all-zero indices.
  auto constant = make_report({0.0, 0.0}, {0.0, 0.0});
  constant.constant_output = true;
  constant.total_variance = 0.0;
  CHECK_NOTHROW(constant.validate());
}

TEST_CASE("validate rejects structural violations") {
  // First order above total.
  CHECK_THROWS_AS(make_report({0.5, 0.2}, {0.4, 0.6}).validate(), DomainError);
  // Index above one.
  CHECK_THROWS_AS(make_report({0.2, 1.2}, {0.4, 1.3}).validate(), DomainError);
  // Noticeably negative index.
  CHECK_THROWS_AS(make_report({-0.2, 0.2}, {0.4, 0.6}).validate(), DomainError);
  // First-order sum above one.
  CHECK_THROWS_AS(make_report({0.7, 0.7}, {0.8, 0.8}).validate(), DomainError);
  // Mismatched lengths.
  auto ragged = make_report({0.2, 0.3}, {0.4, 0.6});
  ragged.total = Vector::Ones(3);
  CHECK_THROWS_AS(ragged.validate(), DomainError);
  // A wider slack forgives what the default rejects.
  CHECK_NOTHROW(make_report({-0.2, 0.2}, {0.4, 0.6}).validate(0.25));
}

TEST_CASE("index reports respect the variance-decomposition bounds") {
  // Property suite: reports assembled from genuine variance decompositions
  // always validate; randomly corrupted ones never slip through.
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> dim_dist(1, 8);

  for (int rep = 0; rep < 240; ++rep) {
    const int d = dim_dist(rng);

    // Draw a random ANOVA split: per-input main effects plus one shared
    // interaction pot that feeds every total index.
    Vector main(d);
    double main_sum = 0.0;
    for (int k = 0; k < d; ++k) {
      main[k] = unif(rng);
      main_sum += main[k];
    }
    const double interaction = unif(rng);
    const double variance = main_sum + interaction;

    SobolIndexReport report;
    report.first_order = main / variance;
    report.total = report.first_order;
    for (int k = 0; k < d; ++k) {
      // Each input owns a nonnegative share of the interaction pot.
      report.total[k] += unif(rng) * interaction / variance;
    }
    report.total_variance = variance;
    report.method = "fixture";
    for (int k = 0; k < d; ++k) report.input_names.push_back("x" + std::to_string(k));

    CHECK_NOTHROW(report.validate());
    const auto order = report.ranking();
    REQUIRE(static_cast<int>(order.size()) == d);
    for (std::size_t i = 1; i < order.size(); ++i) {
      const double prev = std::max(report.total[order[i - 1]], 0.0);
      const double next = std::max(report.total[order[i]], 0.0);
      CHECK(prev >= next);
    }

    // Corrupt one structural property and expect rejection.
    SobolIndexReport broken = report;
    switch (rep % 3) {
      case 0:
        broken.first_order[rep % d] = broken.total[rep % d] + 0.01;
        break;
      case 1:
        broken.total[rep % d] = 1.02;
        break;
      default:
        broken.first_order[rep % d] = -0.02;
        break;
    }
    CHECK_THROWS_AS(broken.validate(), DomainError);
  }
}
