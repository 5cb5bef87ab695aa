// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "priorgsa/common.hpp"

namespace priorgsa {

using Rng = std::mt19937_64;

// Deterministic stream splitting: child seed from a parent seed and an index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// log(1 - exp(x)) for x <= 0, stable near both ends; returns -inf at x == 0.
double log1m_exp(double x);

double sample_mean(const Vector& v);
// Unbiased sample variance; requires at least two entries.
double sample_variance(const Vector& v);

// Two-sample Kolmogorov-Smirnov statistic (sup distance of empirical CDFs).
double ks_statistic(std::vector<double> a, std::vector<double> b);

// FNV-1a over a byte string; used for config fingerprints.
std::uint64_t fnv1a_hash(const std::string& bytes);

}  // namespace priorgsa
