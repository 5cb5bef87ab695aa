// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "priorgsa/sobol.hpp"

namespace priorgsa {

// Total-degree polynomial chaos surrogate over a box with uniform weight,
// built on tensorized orthonormal Legendre polynomials and fit by
// cross-validated lasso.
class PCESurrogate {
 public:
  PCESurrogate(HyperparameterBox box, int degree,
               std::vector<std::vector<int>> multi_indices, Vector coefficients);

  // Degree-graded, lexicographic within a grade; index 0 is the constant.
  static std::vector<std::vector<int>> total_degree_multi_indices(int dim, int degree);

  double predict(const Vector& xi) const;
  Vector predict_many(const Matrix& design) const;

  const HyperparameterBox& box() const { return box_; }
  int degree() const { return degree_; }
  const std::vector<std::vector<int>>& multi_indices() const { return multi_indices_; }
  const Vector& coefficients() const { return coefficients_; }

  double penalty = 0.0;           // selected lasso penalty (absolute)
  double cv_score = 0.0;          // mean squared CV residual at that penalty
  long active_terms() const;      // nonzero coefficients

  std::string to_json() const;
  static PCESurrogate from_json(const std::string& text);

 private:
  HyperparameterBox box_;
  int degree_;
  std::vector<std::vector<int>> multi_indices_;
  Vector coefficients_;
};

// Orthonormal Legendre value: sqrt(2m+1) P_m(x) on [-1, 1].
double legendre_orthonormal(int m, double x);

// Fit by lasso over a penalty path with k-fold cross validation, then refit
// at the winning penalty on all data. penalty_grid entries are relative to
// the data-derived maximum penalty; an empty grid selects the default path.
PCESurrogate fit_pce(const Matrix& design, const Vector& values,
                     const HyperparameterBox& box, int degree, int cv_folds = 10,
                     std::vector<double> penalty_grid = {});

// Exact Sobol indices of the surrogate from its coefficients.
SobolIndexReport pce_sobol(const PCESurrogate& surrogate);

}  // namespace priorgsa
