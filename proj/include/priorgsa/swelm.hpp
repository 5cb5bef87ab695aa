// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "priorgsa/sobol.hpp"

namespace priorgsa {

// Single-hidden-layer tanh network with sparsified random input weights and
// a ridge-solved output layer, over box inputs normalized to [-1, 1].
class SWELMSurrogate {
 public:
  SWELMSurrogate(HyperparameterBox box, Matrix input_weights, Vector input_biases,
                 Vector output_weights, double output_bias);

  double predict(const Vector& xi) const;
  Vector predict_many(const Matrix& design) const;
  // Batch forward pass in normalized coordinates; rows of z are points.
  void predict_normalized(const Eigen::Ref<const Matrix>& z, Vector& out) const;

  const HyperparameterBox& box() const { return box_; }
  int width() const { return static_cast<int>(input_biases_.size()); }
  const Matrix& input_weights() const { return input_weights_; }
  const Vector& input_biases() const { return input_biases_; }
  const Vector& output_weights() const { return output_weights_; }
  double output_bias() const { return output_bias_; }

  double keep_fraction = 1.0;    // selected sparsification level
  double validation_rmse = 0.0;  // held-out error of the selected fit

  std::string to_json() const;
  static SWELMSurrogate from_json(const std::string& text);

 private:
  HyperparameterBox box_;
  Matrix input_weights_;  // width x dim, sparsified
  Vector input_biases_;
  Vector output_weights_;
  double output_bias_;
};

// Random features, per-node magnitude sparsification over a keep-fraction
// grid scored on a held-out tail split, ridge output solve on the train
// split. Constant targets short-circuit to the exact constant fit.
SWELMSurrogate fit_swelm(const Matrix& design, const Vector& values,
                         const HyperparameterBox& box, std::uint64_t seed,
                         double validation_fraction = 0.2,
                         std::vector<double> keep_grid = {0.25, 0.5, 0.75, 1.0});

namespace detail {

// Variance decomposition of a smooth function on [-1, 1]^dim under the
// uniform measure, by full-tensor Gauss-Legendre quadrature. The evaluator
// fills one output per row of the (points x dim) batch.
struct GridAnovaResult {
  double mean = 0.0;
  double variance = 0.0;
  Vector first_order_variance;  // per axis
  Vector total_variance;        // per axis (variance not explained without it)
  int nodes_per_axis = 0;
};
using BatchEvaluator = std::function<void(const Eigen::Ref<const Matrix>&, Vector&)>;
GridAnovaResult grid_anova(const BatchEvaluator& batch_evaluate, int dim,
                           int nodes_per_axis = 0);

// Gauss-Legendre rule on [-1, 1]; weights sum to 2.
void gauss_legendre(int n, Vector& nodes, Vector& weights);

}  // namespace detail

// Sobol indices of the network by tensor quadrature; exact for the network
// up to quadrature error, which the node counts push below 1e-6.
SobolIndexReport swelm_sobol(const SWELMSurrogate& surrogate, int nodes_per_axis = 0);

}  // namespace priorgsa
