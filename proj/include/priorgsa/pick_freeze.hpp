// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>

#include "priorgsa/sobol.hpp"

namespace priorgsa {

// Monte Carlo Sobol estimator from paired sample matrices: first-order by
// the correlation form, totals by the squared-difference form. Costs
// (dim + 2) * n_mc evaluations. Estimates are reported as computed; small
// negatives are expected noise and only the ranking clamps them.
SobolIndexReport pick_freeze_sobol(const std::function<double(const Vector&)>& f,
                                   const HyperparameterBox& box, long n_mc,
                                   std::uint64_t seed);

}  // namespace priorgsa
