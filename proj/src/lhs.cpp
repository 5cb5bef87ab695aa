// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/lhs.hpp"

#include <algorithm>
#include <numeric>

#include "priorgsa/stats.hpp"

namespace priorgsa {

Matrix lhs_sample(const HyperparameterBox& box, int n, std::uint64_t seed) {
  if (n <= 0) throw ConfigError("lhs_sample: sample count must be positive");
  const int d = box.dim();
  Matrix design(n, d);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> strata(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j) {
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    const double lo = box.lower()[j];
    const double w = (box.upper()[j] - lo) / n;
    for (int i = 0; i < n; ++i)
      design(i, j) = lo + (strata[static_cast<std::size_t>(i)] + unif(rng)) * w;
  }
  return design;
}

}  // namespace priorgsa
