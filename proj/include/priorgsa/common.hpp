// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace priorgsa {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Raised when a point lies outside the domain an operation requires.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a forward evaluation fails (non-finite output, solver breakdown).
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, Vector point)
      : std::runtime_error(what), point(std::move(point)) {}
  Vector point;
};

// Raised when importance weights carry no information at the requested xi.
class DegenerateWeightsError : public std::runtime_error {
 public:
  DegenerateWeightsError(const std::string& what, Vector xi)
      : std::runtime_error(what), xi(std::move(xi)) {}
  Vector xi;
};

// Raised on invalid configuration; collects every violation found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations(std::move(violations)) {}
  explicit ConfigError(const std::string& violation)
      : ConfigError(std::vector<std::string>{violation}) {}
  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration:";
    for (const auto& e : v) s += "\n  - " + e;
    return s;
  }
};

// Raised when an iterative solve exhausts its budget without meeting tolerance.
class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, Vector best_point, double best_value)
      : std::runtime_error(what),
        best_point(std::move(best_point)),
        best_value(best_value) {}
  Vector best_point;
  double best_value;
};

// Independent Gaussian with per-coordinate mean and variance.
struct GaussianSpec {
  Vector mean;
  Vector variance;

  int dim() const { return static_cast<int>(mean.size()); }
  void validate() const;
  // Full log density, normalization constant included.
  double log_density(const Vector& theta) const;
  Vector sample(std::uint64_t seed) const;
};

// Axis-aligned box of admissible hyperparameter values with coordinate names.
class HyperparameterBox {
 public:
  HyperparameterBox(std::vector<std::string> names, Vector lower, Vector upper);

  int dim() const { return static_cast<int>(lower_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  Vector center() const { return 0.5 * (lower_ + upper_); }
  Vector width() const { return upper_ - lower_; }
  bool contains(const Vector& xi) const;
  void require_inside(const Vector& xi) const;  // throws DomainError
  int index_of(const std::string& name) const;  // throws DomainError if unknown

 private:
  std::vector<std::string> names_;
  Vector lower_;
  Vector upper_;
};

}  // namespace priorgsa
