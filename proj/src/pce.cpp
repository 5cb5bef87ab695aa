// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/pce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "priorgsa/io.hpp"

namespace priorgsa {

double legendre_orthonormal(int m, double x) {
  if (m < 0) throw DomainError("legendre: negative degree");
  double prev = 1.0, curr = x;
  if (m == 0) return 1.0;
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0) * x * curr - k * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return std::sqrt(2.0 * m + 1.0) * curr;
}

std::vector<std::vector<int>> PCESurrogate::total_degree_multi_indices(int dim,
                                                                       int degree) {
  if (dim < 1 || degree < 0) throw ConfigError("multi-index set: invalid shape");
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(static_cast<std::size_t>(dim), 0);
  // Grade by total degree, lexicographic inside a grade (first axis most
  // significant, descending), so index 0 is always the constant term.
  auto emit = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == dim - 1) {
      alpha[static_cast<std::size_t>(pos)] = remaining;
      out.push_back(alpha);
      return;
    }
    for (int a = remaining; a >= 0; --a) {
      alpha[static_cast<std::size_t>(pos)] = a;
      self(self, pos + 1, remaining - a);
    }
  };
  for (int grade = 0; grade <= degree; ++grade) emit(emit, 0, grade);
  return out;
}

PCESurrogate::PCESurrogate(HyperparameterBox box, int degree,
                           std::vector<std::vector<int>> multi_indices,
                           Vector coefficients)
    : box_(std::move(box)),
      degree_(degree),
      multi_indices_(std::move(multi_indices)),
      coefficients_(std::move(coefficients)) {
  if (static_cast<long>(multi_indices_.size()) != coefficients_.size())
    throw ConfigError("pce: coefficient count does not match the basis");
  for (const auto& alpha : multi_indices_)
    if (static_cast<int>(alpha.size()) != box_.dim())
      throw ConfigError("pce: multi-index dimension mismatch");
}

namespace {

// Per-dimension orthonormal Legendre values 0..degree at one mapped point.
void basis_table(const HyperparameterBox& box, int degree, const Vector& xi,
                 Matrix& table) {
  const int d = box.dim();
  table.resize(d, degree + 1);
  for (int k = 0; k < d; ++k) {
    const double z =
        2.0 * (xi[k] - box.lower()[k]) / (box.upper()[k] - box.lower()[k]) - 1.0;
    double prev = 1.0, curr = z;
    table(k, 0) = 1.0;
    if (degree >= 1) table(k, 1) = std::sqrt(3.0) * z;
    for (int m = 2; m <= degree; ++m) {
      const double next = ((2.0 * m - 1.0) * z * curr - (m - 1.0) * prev) / m;
      prev = curr;
      curr = next;
      table(k, m) = std::sqrt(2.0 * m + 1.0) * curr;
    }
  }
}

Matrix design_matrix(const HyperparameterBox& box, int degree,
                     const std::vector<std::vector<int>>& alphas, const Matrix& design) {
  Matrix psi(design.rows(), static_cast<long>(alphas.size()));
  Matrix table;
  for (long i = 0; i < design.rows(); ++i) {
    basis_table(box, degree, design.row(i).transpose(), table);
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      double v = 1.0;
      for (int k = 0; k < box.dim(); ++k) v *= table(k, alphas[j][static_cast<std::size_t>(k)]);
      psi(i, static_cast<long>(j)) = v;
    }
  }
  return psi;
}

struct LassoFit {
  double intercept = 0.0;
  Vector coef;  // over non-constant columns
};

// Coordinate-descent lasso of (1/2N)|y - b0 - Psi c|^2 + lambda |c|_1 with an
// unpenalized intercept. Warm starts come in through `fit`. The KKT residual
// of the returned solution is at most `kkt_tol`.
void lasso_cd(const Matrix& psi, const Vector& y, double lambda, double kkt_tol,
              LassoFit& fit) {
  const long n = psi.rows();
  const long p = psi.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  Vector col_sq(p);
  for (long j = 0; j < p; ++j) col_sq[j] = inv_n * psi.col(j).squaredNorm();

  if (fit.coef.size() != p) {
    fit.coef = Vector::Zero(p);
    fit.intercept = y.mean();
  }
  Vector r = y - psi * fit.coef;
  r.array() -= fit.intercept;

  const long max_sweeps = 100000;
  for (long sweep = 0; sweep < max_sweeps; ++sweep) {
    for (long j = 0; j < p; ++j) {
      if (col_sq[j] == 0.0) continue;
      const double old = fit.coef[j];
      const double z = inv_n * psi.col(j).dot(r) + col_sq[j] * old;
      const double mag = std::abs(z) - lambda;
      const double next = mag > 0.0 ? std::copysign(mag, z) / col_sq[j] : 0.0;
      if (next != old) {
        r += (old - next) * psi.col(j);
        fit.coef[j] = next;
      }
    }
    const double r_mean = r.mean();
    if (r_mean != 0.0) {
      fit.intercept += r_mean;
      r.array() -= r_mean;
    }

    double kkt = std::abs(r.mean());
    for (long j = 0; j < p; ++j) {
      const double corr = inv_n * psi.col(j).dot(r);
      const double viol = fit.coef[j] != 0.0
                              ? std::abs(corr - std::copysign(lambda, fit.coef[j]))
                              : std::max(0.0, std::abs(corr) - lambda);
      kkt = std::max(kkt, viol);
    }
    if (kkt <= kkt_tol) return;
  }
  throw OptimizationError("lasso did not reach the KKT tolerance", fit.coef, lambda);
}

}  // namespace

PCESurrogate fit_pce(const Matrix& design, const Vector& values,
                     const HyperparameterBox& box, int degree, int cv_folds,
                     std::vector<double> penalty_grid) {
  std::vector<std::string> bad;
  if (design.rows() != values.size())
    bad.push_back("pce fit: design and value counts differ");
  if (design.cols() != box.dim()) bad.push_back("pce fit: design dimension mismatch");
  if (degree < 0) bad.push_back("pce fit: negative degree");
  if (cv_folds < 2) bad.push_back("pce fit: needs at least two folds");
  if (design.rows() < cv_folds) bad.push_back("pce fit: fewer points than folds");
  for (double g : penalty_grid)
    if (!(g > 0.0)) bad.push_back("pce fit: penalties must be positive");
  if (!bad.empty()) throw ConfigError(bad);

  if (penalty_grid.empty()) {
    // 20 points, log-spaced over six decades below the zeroing penalty.
    for (int i = 0; i < 20; ++i)
      penalty_grid.push_back(std::pow(10.0, -6.0 + 6.0 * i / 19.0));
  }
  std::sort(penalty_grid.begin(), penalty_grid.end(), std::greater<double>());

  auto alphas = PCESurrogate::total_degree_multi_indices(box.dim(), degree);
  const Matrix psi_full = design_matrix(box, degree, alphas, design);
  const long n = design.rows();
  const long p = psi_full.cols() - 1;  // non-constant columns
  const Matrix psi = psi_full.rightCols(p);

  const double y_mean = values.mean();
  double lambda_max = 0.0;
  const Vector centered = values.array() - y_mean;
  for (long j = 0; j < p; ++j)
    lambda_max =
        std::max(lambda_max, std::abs(psi.col(j).dot(centered)) / static_cast<double>(n));
  const double kkt_tol = 1e-8 * std::max(1.0, lambda_max);

  // Fold membership by row index modulo fold count.
  std::vector<Matrix> train_psi(static_cast<std::size_t>(cv_folds));
  std::vector<Vector> train_y(static_cast<std::size_t>(cv_folds));
  std::vector<Matrix> test_psi(static_cast<std::size_t>(cv_folds));
  std::vector<Vector> test_y(static_cast<std::size_t>(cv_folds));
  for (int f = 0; f < cv_folds; ++f) {
    std::vector<long> in, out;
    for (long i = 0; i < n; ++i) (i % cv_folds == f ? out : in).push_back(i);
    train_psi[static_cast<std::size_t>(f)].resize(static_cast<long>(in.size()), p);
    train_y[static_cast<std::size_t>(f)].resize(static_cast<long>(in.size()));
    for (std::size_t k = 0; k < in.size(); ++k) {
      train_psi[static_cast<std::size_t>(f)].row(static_cast<long>(k)) = psi.row(in[k]);
      train_y[static_cast<std::size_t>(f)][static_cast<long>(k)] = values[in[k]];
    }
    test_psi[static_cast<std::size_t>(f)].resize(static_cast<long>(out.size()), p);
    test_y[static_cast<std::size_t>(f)].resize(static_cast<long>(out.size()));
    for (std::size_t k = 0; k < out.size(); ++k) {
      test_psi[static_cast<std::size_t>(f)].row(static_cast<long>(k)) = psi.row(out[k]);
      test_y[static_cast<std::size_t>(f)][static_cast<long>(k)] = values[out[k]];
    }
  }

  std::vector<LassoFit> fold_fit(static_cast<std::size_t>(cv_folds));
  double best_score = std::numeric_limits<double>::infinity();
  double best_lambda = penalty_grid.front() * lambda_max;
  for (double rel : penalty_grid) {
    const double lambda = rel * lambda_max;
    double score = 0.0;
    for (int f = 0; f < cv_folds; ++f) {
      auto& fit = fold_fit[static_cast<std::size_t>(f)];
      lasso_cd(train_psi[static_cast<std::size_t>(f)], train_y[static_cast<std::size_t>(f)],
               lambda, kkt_tol, fit);
      const Vector pred =
          (test_psi[static_cast<std::size_t>(f)] * fit.coef).array() + fit.intercept;
      score += (pred - test_y[static_cast<std::size_t>(f)]).squaredNorm() /
               static_cast<double>(test_y[static_cast<std::size_t>(f)].size());
    }
    score /= cv_folds;
    // Strict improvement keeps the sparser fit on ties.
    if (score < best_score) {
      best_score = score;
      best_lambda = lambda;
    }
  }

  LassoFit final_fit;
  for (double rel : penalty_grid) {  // warm-started path down to the winner
    const double lambda = rel * lambda_max;
    lasso_cd(psi, values, lambda, kkt_tol, final_fit);
    if (lambda <= best_lambda) break;
  }

  Vector coef(p + 1);
  coef[0] = final_fit.intercept;
  coef.tail(p) = final_fit.coef;
  PCESurrogate surrogate(box, degree, std::move(alphas), std::move(coef));
  surrogate.penalty = best_lambda;
  surrogate.cv_score = best_score;
  return surrogate;
}

double PCESurrogate::predict(const Vector& xi) const {
  if (xi.size() != box_.dim()) throw DomainError("pce predict: dimension mismatch");
  Matrix table;
  basis_table(box_, degree_, xi, table);
  double acc = 0.0;
  for (std::size_t j = 0; j < multi_indices_.size(); ++j) {
    double v = 1.0;
    for (int k = 0; k < box_.dim(); ++k)
      v *= table(k, multi_indices_[j][static_cast<std::size_t>(k)]);
    acc += coefficients_[static_cast<long>(j)] * v;
  }
  return acc;
}

Vector PCESurrogate::predict_many(const Matrix& design) const {
  Vector out(design.rows());
  for (long i = 0; i < design.rows(); ++i) out[i] = predict(design.row(i).transpose());
  return out;
}

long PCESurrogate::active_terms() const {
  long active = 0;
  for (long j = 0; j < coefficients_.size(); ++j)
    if (coefficients_[j] != 0.0) ++active;
  return active;
}

SobolIndexReport pce_sobol(const PCESurrogate& surrogate) {
  const int d = surrogate.box().dim();
  const auto& alphas = surrogate.multi_indices();
  const Vector& c = surrogate.coefficients();

  double variance = 0.0;
  Vector first = Vector::Zero(d), total = Vector::Zero(d);
  for (std::size_t j = 1; j < alphas.size(); ++j) {
    const double c2 = c[static_cast<long>(j)] * c[static_cast<long>(j)];
    const auto& alpha = alphas[j];
    int support = -1;
    bool single = true;
    for (int k = 0; k < d; ++k)
      if (alpha[static_cast<std::size_t>(k)] > 0) {
        if (support >= 0) single = false;
        support = k;
        total[k] += c2;
      }
    if (single && support >= 0) first[support] += c2;
    variance += c2;
  }

  SobolIndexReport report;
  report.input_names = surrogate.box().names();
  report.method = "pce";
  report.total_variance = variance;
  report.provenance["degree"] = std::to_string(surrogate.degree());
  report.provenance["penalty"] = format_double(surrogate.penalty);
  report.provenance["active_terms"] = std::to_string(surrogate.active_terms());
  if (!(variance > 0.0)) {
    report.constant_output = true;
    report.first_order = Vector::Zero(d);
    report.total = Vector::Zero(d);
    return report;
  }
  report.first_order = first / variance;
  report.total = total / variance;
  return report;
}

std::string PCESurrogate::to_json() const {
  nlohmann::json j;
  j["kind"] = "pce";
  j["box"] = {{"names", box_.names()},
              {"lower", std::vector<double>(box_.lower().begin(), box_.lower().end())},
              {"upper", std::vector<double>(box_.upper().begin(), box_.upper().end())}};
  j["degree"] = degree_;
  j["multi_indices"] = multi_indices_;
  j["coefficients"] =
      std::vector<double>(coefficients_.begin(), coefficients_.end());
  j["penalty"] = penalty;
  j["cv_score"] = cv_score;
  return j.dump(2);
}

PCESurrogate PCESurrogate::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("kind").get<std::string>() != "pce")
    throw ConfigError("pce: serialized surrogate has the wrong kind");
  const auto& jb = j.at("box");
  const auto lower = jb.at("lower").get<std::vector<double>>();
  const auto upper = jb.at("upper").get<std::vector<double>>();
  HyperparameterBox box(jb.at("names").get<std::vector<std::string>>(),
                        Eigen::Map<const Vector>(lower.data(), static_cast<long>(lower.size())),
                        Eigen::Map<const Vector>(upper.data(), static_cast<long>(upper.size())));
  const auto coefs = j.at("coefficients").get<std::vector<double>>();
  PCESurrogate out(box, j.at("degree").get<int>(),
                   j.at("multi_indices").get<std::vector<std::vector<int>>>(),
                   Eigen::Map<const Vector>(coefs.data(), static_cast<long>(coefs.size())));
  out.penalty = j.at("penalty").get<double>();
  out.cv_score = j.at("cv_score").get<double>();
  return out;
}

}  // namespace priorgsa
