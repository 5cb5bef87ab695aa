// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/pick_freeze.hpp"

#include <cmath>

#include "priorgsa/stats.hpp"

namespace priorgsa {

SobolIndexReport pick_freeze_sobol(const std::function<double(const Vector&)>& f,
                                   const HyperparameterBox& box, long n_mc,
                                   std::uint64_t seed) {
  if (n_mc < 2) throw ConfigError("pick_freeze: needs at least two samples");
  const int d = box.dim();

  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto fill = [&](Matrix& m) {
    m.resize(n_mc, d);
    for (long i = 0; i < n_mc; ++i)
      for (int k = 0; k < d; ++k)
        m(i, k) = box.lower()[k] + (box.upper()[k] - box.lower()[k]) * unif(rng);
  };
  Matrix a, b;
  fill(a);
  fill(b);

  auto evaluate_rows = [&](const Matrix& m) {
    Vector out(n_mc);
    for (long i = 0; i < n_mc; ++i) {
      out[i] = f(m.row(i).transpose());
      if (!std::isfinite(out[i]))
        throw EvaluationError("pick_freeze: non-finite model output",
                              m.row(i).transpose());
    }
    return out;
  };
  const Vector f_a = evaluate_rows(a);
  const Vector f_b = evaluate_rows(b);

  // Variance from both base matrices pooled.
  const double mean = (f_a.sum() + f_b.sum()) / static_cast<double>(2 * n_mc);
  const double variance =
      ((f_a.array() - mean).square().sum() + (f_b.array() - mean).square().sum()) /
      static_cast<double>(2 * n_mc - 1);

  SobolIndexReport report;
  report.input_names = box.names();
  report.method = "pick-freeze";
  report.total_variance = variance;
  report.provenance["n_mc"] = std::to_string(n_mc);
  report.provenance["seed"] = std::to_string(seed);
  report.first_order = Vector::Zero(d);
  report.total = Vector::Zero(d);
  if (!(variance > 0.0)) {
    report.constant_output = true;
    return report;
  }

  Matrix mixed = a;
  for (int k = 0; k < d; ++k) {
    mixed.col(k) = b.col(k);
    const Vector f_mixed = evaluate_rows(mixed);
    mixed.col(k) = a.col(k);

    double first = 0.0, total = 0.0;
    for (long i = 0; i < n_mc; ++i) {
      first += f_b[i] * (f_mixed[i] - f_a[i]);
      const double diff = f_a[i] - f_mixed[i];
      total += diff * diff;
    }
    report.first_order[k] = first / static_cast<double>(n_mc) / variance;
    report.total[k] = total / static_cast<double>(2 * n_mc) / variance;
  }
  return report;
}

}  // namespace priorgsa
