// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "priorgsa/common.hpp"

namespace priorgsa {

// First-order and total Sobol indices for one scalar output.
struct SobolIndexReport {
  std::vector<std::string> input_names;
  Vector first_order;
  Vector total;
  double total_variance = 0.0;
  // Set when the output carried (numerically) no variance; indices are zero.
  bool constant_output = false;
  std::string method;  // "pce", "swelm", "pick-freeze", ...
  std::map<std::string, std::string> provenance;

  int dim() const { return static_cast<int>(first_order.size()); }

  // Inputs ordered by decreasing clamped total index; ties keep declaration
  // order. Estimator noise may produce small negatives; ranking clamps at 0.
  std::vector<int> ranking() const;

  // Structural bounds: indices within [-slack, 1 + slack], first order not
  // above total plus slack, first-order sum at most 1 plus slack.
  // Violations throw DomainError.
  void validate(double slack = 1e-9) const;
};

}  // namespace priorgsa
