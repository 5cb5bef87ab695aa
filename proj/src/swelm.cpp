// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/swelm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "priorgsa/io.hpp"
#include "priorgsa/stats.hpp"

namespace priorgsa {

SWELMSurrogate::SWELMSurrogate(HyperparameterBox box, Matrix input_weights,
                               Vector input_biases, Vector output_weights,
                               double output_bias)
    : box_(std::move(box)),
      input_weights_(std::move(input_weights)),
      input_biases_(std::move(input_biases)),
      output_weights_(std::move(output_weights)),
      output_bias_(output_bias) {
  if (input_weights_.cols() != box_.dim() ||
      input_weights_.rows() != input_biases_.size() ||
      output_weights_.size() != input_biases_.size())
    throw ConfigError("swelm: inconsistent layer shapes");
}

namespace {

Vector normalize_point(const HyperparameterBox& box, const Vector& xi) {
  Vector z(xi.size());
  for (int k = 0; k < xi.size(); ++k)
    z[k] = 2.0 * (xi[k] - box.lower()[k]) / (box.upper()[k] - box.lower()[k]) - 1.0;
  return z;
}

Matrix normalize_rows(const HyperparameterBox& box, const Matrix& design) {
  Matrix z(design.rows(), design.cols());
  for (int k = 0; k < design.cols(); ++k)
    z.col(k) = (2.0 / (box.upper()[k] - box.lower()[k])) *
               (design.col(k).array() - box.lower()[k]) -
               1.0;
  return z;
}

}  // namespace

void SWELMSurrogate::predict_normalized(const Eigen::Ref<const Matrix>& z,
                                        Vector& out) const {
  Matrix act = z * input_weights_.transpose();
  act.rowwise() += input_biases_.transpose();
  out.noalias() = act.array().tanh().matrix() * output_weights_;
  out.array() += output_bias_;
}

double SWELMSurrogate::predict(const Vector& xi) const {
  if (xi.size() != box_.dim()) throw DomainError("swelm predict: dimension mismatch");
  const Vector z = normalize_point(box_, xi);
  return output_weights_.dot(
             ((input_weights_ * z + input_biases_).array().tanh()).matrix()) +
         output_bias_;
}

Vector SWELMSurrogate::predict_many(const Matrix& design) const {
  if (design.cols() != box_.dim())
    throw DomainError("swelm predict: dimension mismatch");
  Vector out;
  predict_normalized(normalize_rows(box_, design), out);
  return out;
}

SWELMSurrogate fit_swelm(const Matrix& design, const Vector& values,
                         const HyperparameterBox& box, std::uint64_t seed,
                         double validation_fraction, std::vector<double> keep_grid) {
  std::vector<std::string> bad;
  if (design.rows() != values.size())
    bad.push_back("swelm fit: design and value counts differ");
  if (design.cols() != box.dim()) bad.push_back("swelm fit: design dimension mismatch");
  if (design.rows() < 8) bad.push_back("swelm fit: needs at least 8 points");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
    bad.push_back("swelm fit: validation fraction must lie in (0, 1)");
  if (keep_grid.empty()) bad.push_back("swelm fit: empty keep-fraction grid");
  for (double pk : keep_grid)
    if (!(pk > 0.0 && pk <= 1.0)) bad.push_back("swelm fit: keep fractions must lie in (0, 1]");
  if (!bad.empty()) throw ConfigError(bad);

  const long n = design.rows();
  const int dim = static_cast<int>(design.cols());

  // A constant target has the constant network as its exact fit.
  if ((values.array() == values[0]).all()) {
    Matrix w0 = Matrix::Zero(1, dim);
    SWELMSurrogate flat(box, std::move(w0), Vector::Zero(1), Vector::Zero(1), values[0]);
    flat.keep_fraction = keep_grid.front();
    flat.validation_rmse = 0.0;
    return flat;
  }

  long n_val = std::lround(validation_fraction * static_cast<double>(n));
  n_val = std::clamp(n_val, 1L, n - 4);
  const long n_train = n - n_val;
  const int width = static_cast<int>(n_train / 2);
  if (width < 1) throw ConfigError("swelm fit: too few training points");

  const Matrix z = normalize_rows(box, design);
  const Matrix z_train = z.topRows(n_train);
  const Matrix z_val = z.bottomRows(n_val);
  const Vector y_train = values.head(n_train);
  const Vector y_val = values.tail(n_val);

  // Random feature layer: weights scaled by the input count, biases uniform.
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix w_full(width, dim);
  for (int j = 0; j < width; ++j)
    for (int k = 0; k < dim; ++k) w_full(j, k) = normal(rng) / std::sqrt(dim);
  Vector b(width);
  for (int j = 0; j < width; ++j) b[j] = unif(rng);

  struct Candidate {
    Matrix w;
    Vector beta;  // width + 1, last entry is the output bias
    double rmse = std::numeric_limits<double>::infinity();
    double keep = 1.0;
  };
  Candidate best;

  std::vector<int> order(static_cast<std::size_t>(dim));
  for (double keep : keep_grid) {
    const int kept = std::max(1, static_cast<int>(std::lround(keep * dim)));
    Matrix w = w_full;
    if (kept < dim)
      for (int j = 0; j < width; ++j) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
          return std::abs(w_full(j, a)) > std::abs(w_full(j, c));
        });
        for (int r = kept; r < dim; ++r) w(j, order[static_cast<std::size_t>(r)]) = 0.0;
      }

    Matrix h(n_train, width + 1);
    h.leftCols(width) =
        ((z_train * w.transpose()).rowwise() + b.transpose()).array().tanh();
    h.col(width).setOnes();
    Matrix gram = h.transpose() * h;
    const double ridge = 1e-10 * gram.trace() / static_cast<double>(width + 1);
    gram.diagonal().array() += ridge;
    const Vector beta = Eigen::LDLT<Matrix>(gram).solve(h.transpose() * y_train);

    Matrix h_val(n_val, width + 1);
    h_val.leftCols(width) =
        ((z_val * w.transpose()).rowwise() + b.transpose()).array().tanh();
    h_val.col(width).setOnes();
    const double rmse =
        std::sqrt((h_val * beta - y_val).squaredNorm() / static_cast<double>(n_val));
    if (rmse < best.rmse) {
      best.w = std::move(w);
      best.beta = beta;
      best.rmse = rmse;
      best.keep = keep;
    }
  }

  SWELMSurrogate surrogate(box, std::move(best.w), b, best.beta.head(width),
                           best.beta[width]);
  surrogate.keep_fraction = best.keep;
  surrogate.validation_rmse = best.rmse;
  return surrogate;
}

namespace detail {

void gauss_legendre(int n, Vector& nodes, Vector& weights) {
  if (n < 2) throw ConfigError("gauss_legendre: needs at least two nodes");
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

namespace {

int default_nodes(int dim) {
  switch (dim) {
    case 1:
    case 2: return 64;
    case 3: return 32;
    case 4: return 20;
    case 5: return 14;
    case 6: return 11;
    case 7: return 9;
    case 8: return 8;
    default:
      throw ConfigError("grid quadrature supports up to 8 inputs");
  }
}

// Tensor product of the normalized 1-D weights over `axes` axes.
std::vector<double> weight_tensor(const Vector& w, int axes) {
  std::vector<double> out{1.0};
  for (int a = 0; a < axes; ++a) {
    std::vector<double> next(out.size() * static_cast<std::size_t>(w.size()));
    std::size_t idx = 0;
    for (double base : out)
      for (int j = 0; j < w.size(); ++j) next[idx++] = base * w[j];
    out = std::move(next);
  }
  return out;
}

}  // namespace

GridAnovaResult grid_anova(const BatchEvaluator& batch_evaluate, int dim,
                           int nodes_per_axis) {
  if (dim < 1) throw ConfigError("grid_anova: non-positive dimension");
  const int nu = nodes_per_axis > 0 ? nodes_per_axis : default_nodes(dim);
  double total_points_d = 1.0;
  for (int k = 0; k < dim; ++k) total_points_d *= nu;
  if (total_points_d > 2.1e7)
    throw ConfigError("grid_anova: tensor grid too large");
  const long total = static_cast<long>(total_points_d);

  Vector nodes, gl_weights;
  gauss_legendre(nu, nodes, gl_weights);
  const Vector w = gl_weights / 2.0;  // uniform probability weights

  // Evaluate the function over the full grid, batched, row-major with the
  // last axis fastest.
  std::vector<double> values(static_cast<std::size_t>(total));
  {
    const long batch_cap = 8192;
    Matrix pts(batch_cap, dim);
    Vector out;
    std::vector<int> odo(static_cast<std::size_t>(dim), 0);
    long filled = 0;
    while (filled < total) {
      const long count = std::min(batch_cap, total - filled);
      for (long r = 0; r < count; ++r) {
        for (int k = 0; k < dim; ++k)
          pts(r, k) = nodes[odo[static_cast<std::size_t>(k)]];
        for (int k = dim - 1; k >= 0; --k) {
          if (++odo[static_cast<std::size_t>(k)] < nu) break;
          odo[static_cast<std::size_t>(k)] = 0;
        }
      }
      batch_evaluate(pts.topRows(count), out);
      if (out.size() != count)
        throw EvaluationError("grid_anova: evaluator returned a wrong-sized batch",
                              Vector());
      std::copy(out.begin(), out.end(), values.begin() + filled);
      filled += count;
    }
  }

  // Mean first, then center in place: the decomposition then works on small
  // numbers and the cancellation in the total terms stays mild.
  double mean = 0.0;
  {
    const long stride = 1;
    const long groups = total / nu;
    const std::vector<double> w_out = weight_tensor(w, dim - 1);
    for (long g = 0; g < groups; ++g) {
      double inner = 0.0;
      const double* base = values.data() + g * nu;
      for (int j = 0; j < nu; ++j) inner += w[j] * base[j * stride];
      mean += w_out[static_cast<std::size_t>(g)] * inner;
    }
  }
  for (double& v : values) v -= mean;

  GridAnovaResult result;
  result.mean = mean;
  result.nodes_per_axis = nu;
  result.first_order_variance = Vector::Zero(dim);
  result.total_variance = Vector::Zero(dim);

  double second_moment = 0.0;
  for (int k = 0; k < dim; ++k) {
    long stride = 1;
    for (int a = k + 1; a < dim; ++a) stride *= nu;
    const long block = stride * nu;
    const long outers = total / block;
    const std::vector<double> w_outer = weight_tensor(w, k);
    const std::vector<double> w_inner = weight_tensor(w, dim - 1 - k);

    Vector cond_mean = Vector::Zero(nu);
    double explained_without = 0.0;
    for (long o = 0; o < outers; ++o) {
      const double wo = w_outer[static_cast<std::size_t>(o)];
      const double* base0 = values.data() + o * block;
      for (long in = 0; in < stride; ++in) {
        const double wrest = wo * w_inner[static_cast<std::size_t>(in)];
        const double* base = base0 + in;
        double m1 = 0.0;
        for (int j = 0; j < nu; ++j) {
          const double v = base[j * stride];
          cond_mean[j] += wrest * v;
          m1 += w[j] * v;
          if (k == 0) second_moment += wrest * w[j] * v * v;
        }
        explained_without += wrest * m1 * m1;
      }
    }
    if (k == 0) {
      result.variance = second_moment;
    }
    double v_first = 0.0;
    for (int j = 0; j < nu; ++j) v_first += w[j] * cond_mean[j] * cond_mean[j];
    result.first_order_variance[k] = v_first;
    result.total_variance[k] = second_moment - explained_without;
  }
  return result;
}

}  // namespace detail

SobolIndexReport swelm_sobol(const SWELMSurrogate& surrogate, int nodes_per_axis) {
  const int dim = surrogate.box().dim();
  auto evaluate = [&surrogate](const Eigen::Ref<const Matrix>& pts, Vector& out) {
    surrogate.predict_normalized(pts, out);
  };
  const detail::GridAnovaResult anova =
      detail::grid_anova(evaluate, dim, nodes_per_axis);

  SobolIndexReport report;
  report.input_names = surrogate.box().names();
  report.method = "swelm";
  report.total_variance = anova.variance;
  report.provenance["width"] = std::to_string(surrogate.width());
  report.provenance["keep_fraction"] = format_double(surrogate.keep_fraction);
  report.provenance["nodes_per_axis"] = std::to_string(anova.nodes_per_axis);
  const double scale = std::max(1.0, anova.mean * anova.mean);
  if (!(anova.variance > 1e-14 * scale)) {
    report.constant_output = true;
    report.first_order = Vector::Zero(dim);
    report.total = Vector::Zero(dim);
    report.total_variance = 0.0;  // quadrature dust, not real variance
    return report;
  }
  report.first_order = anova.first_order_variance / anova.variance;
  report.total = anova.total_variance / anova.variance;
  return report;
}

std::string SWELMSurrogate::to_json() const {
  nlohmann::json j;
  j["kind"] = "swelm";
  j["box"] = {{"names", box_.names()},
              {"lower", std::vector<double>(box_.lower().begin(), box_.lower().end())},
              {"upper", std::vector<double>(box_.upper().begin(), box_.upper().end())}};
  std::vector<std::vector<double>> w(static_cast<std::size_t>(input_weights_.rows()));
  for (long r = 0; r < input_weights_.rows(); ++r)
    w[static_cast<std::size_t>(r)] = std::vector<double>(
        input_weights_.row(r).begin(), input_weights_.row(r).end());
  j["input_weights"] = w;
  j["input_biases"] = std::vector<double>(input_biases_.begin(), input_biases_.end());
  j["output_weights"] =
      std::vector<double>(output_weights_.begin(), output_weights_.end());
  j["output_bias"] = output_bias_;
  j["keep_fraction"] = keep_fraction;
  j["validation_rmse"] = validation_rmse;
  return j.dump(2);
}

SWELMSurrogate SWELMSurrogate::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("kind").get<std::string>() != "swelm")
    throw ConfigError("swelm: serialized surrogate has the wrong kind");
  const auto& jb = j.at("box");
  const auto lower = jb.at("lower").get<std::vector<double>>();
  const auto upper = jb.at("upper").get<std::vector<double>>();
  HyperparameterBox box(jb.at("names").get<std::vector<std::string>>(),
                        Eigen::Map<const Vector>(lower.data(), static_cast<long>(lower.size())),
                        Eigen::Map<const Vector>(upper.data(), static_cast<long>(upper.size())));
  const auto w = j.at("input_weights").get<std::vector<std::vector<double>>>();
  Matrix weights(static_cast<long>(w.size()), box.dim());
  for (std::size_t r = 0; r < w.size(); ++r)
    weights.row(static_cast<long>(r)) =
        Eigen::Map<const Vector>(w[r].data(), static_cast<long>(w[r].size())).transpose();
  const auto biases = j.at("input_biases").get<std::vector<double>>();
  const auto beta = j.at("output_weights").get<std::vector<double>>();
  SWELMSurrogate out(box, std::move(weights),
                     Eigen::Map<const Vector>(biases.data(), static_cast<long>(biases.size())),
                     Eigen::Map<const Vector>(beta.data(), static_cast<long>(beta.size())),
                     j.at("output_bias").get<double>());
  out.keep_fraction = j.at("keep_fraction").get<double>();
  out.validation_rmse = j.at("validation_rmse").get<double>();
  return out;
}

}  // namespace priorgsa
