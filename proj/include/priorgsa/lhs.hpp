// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "priorgsa/common.hpp"

namespace priorgsa {

// Latin hypercube design over the box: every 1-D projection hits each of the
// n equal strata exactly once, with uniform jitter inside a stratum.
// Deterministic in (box, n, seed); rows are design points.
Matrix lhs_sample(const HyperparameterBox& box, int n, std::uint64_t seed);

}  // namespace priorgsa
