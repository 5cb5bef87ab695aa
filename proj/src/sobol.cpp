// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/sobol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace priorgsa {

std::vector<int> SobolIndexReport::ranking() const {
  std::vector<int> order(static_cast<std::size_t>(dim()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::max(total[a], 0.0) > std::max(total[b], 0.0);
  });
  return order;
}

void SobolIndexReport::validate(double slack) const {
  const int d = dim();
  if (d == 0 || total.size() != d ||
      static_cast<int>(input_names.size()) != d)
    throw DomainError("sobol report: inconsistent dimensions");
  if (!(total_variance >= 0.0) || !std::isfinite(total_variance))
    throw DomainError("sobol report: invalid total variance");
  if (constant_output) {
    if (first_order.cwiseAbs().maxCoeff() > slack || total.cwiseAbs().maxCoeff() > slack)
      throw DomainError("sobol report: constant output with nonzero indices");
    return;
  }
  double first_sum = 0.0;
  for (int k = 0; k < d; ++k) {
    const double s = first_order[k];
    const double t = total[k];
    if (!std::isfinite(s) || !std::isfinite(t))
      throw DomainError("sobol report: non-finite index for " + input_names[k]);
    if (s < -slack || s > 1.0 + slack || t < -slack || t > 1.0 + slack)
      throw DomainError("sobol report: index outside [0, 1] for " + input_names[k]);
    if (s > t + slack)
      throw DomainError("sobol report: first-order exceeds total for " + input_names[k]);
    first_sum += s;
  }
  if (first_sum > 1.0 + slack)
    throw DomainError("sobol report: first-order indices sum above 1");
}

}  // namespace priorgsa
