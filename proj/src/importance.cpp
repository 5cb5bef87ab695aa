// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/importance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace priorgsa {

PosteriorSampleSet PosteriorSampleSet::from_chain(const MCMCChain& chain,
                                                  const QoIFunction& qoi,
                                                  const GaussianSpec& is_prior) {
  if (chain.draws.rows() == 0) throw ConfigError("sample set: empty chain");
  is_prior.validate();
  if (is_prior.dim() != chain.draws.cols())
    throw ConfigError("sample set: sampling prior dimension mismatch");

  PosteriorSampleSet set;
  set.total_draws_ = chain.draws.rows();
  set.is_prior_ = is_prior;
  set.chain_seed_ = chain.seed;
  set.chain_burn_in_ = chain.burn_in;

  std::vector<long> starts;  // row index where each run begins
  starts.push_back(0);
  for (long k = 1; k < chain.draws.rows(); ++k)
    if ((chain.draws.row(k).array() != chain.draws.row(k - 1).array()).any())
      starts.push_back(k);

  const long runs = static_cast<long>(starts.size());
  set.distinct_.resize(runs, chain.draws.cols());
  set.multiplicities_.resize(static_cast<std::size_t>(runs));
  set.qoi_.resize(runs);
  set.is_log_prior_.resize(runs);
  for (long r = 0; r < runs; ++r) {
    const long begin = starts[static_cast<std::size_t>(r)];
    const long end = r + 1 < runs ? starts[static_cast<std::size_t>(r + 1)]
                                  : chain.draws.rows();
    set.distinct_.row(r) = chain.draws.row(begin);
    set.multiplicities_[static_cast<std::size_t>(r)] = end - begin;
    const Vector theta = chain.draws.row(begin).transpose();
    const double q = qoi(theta);
    if (!std::isfinite(q))
      throw EvaluationError("quantity of interest is not finite at a draw", theta);
    set.qoi_[r] = q;
    set.is_log_prior_[r] = is_prior.log_density(theta);
  }
  return set;
}

PosteriorSampleSet PosteriorSampleSet::from_components(Matrix distinct,
                                                       std::vector<long> multiplicities,
                                                       Vector qoi, Vector is_log_prior,
                                                       GaussianSpec is_prior) {
  const long runs = distinct.rows();
  if (runs == 0) throw ConfigError("sample set: no draws");
  if (static_cast<long>(multiplicities.size()) != runs || qoi.size() != runs ||
      is_log_prior.size() != runs)
    throw ConfigError("sample set: component length mismatch");
  is_prior.validate();
  if (is_prior.dim() != distinct.cols())
    throw ConfigError("sample set: sampling prior dimension mismatch");
  if (!qoi.allFinite() || !is_log_prior.allFinite())
    throw ConfigError("sample set: non-finite cached values");

  PosteriorSampleSet set;
  set.total_draws_ = 0;
  for (long mult : multiplicities) {
    if (mult < 1) throw ConfigError("sample set: multiplicities must be >= 1");
    set.total_draws_ += mult;
  }
  set.distinct_ = std::move(distinct);
  set.multiplicities_ = std::move(multiplicities);
  set.qoi_ = std::move(qoi);
  set.is_log_prior_ = std::move(is_log_prior);
  set.is_prior_ = std::move(is_prior);
  return set;
}

PosteriorSampleSet PosteriorSampleSet::prefix(long m) const {
  if (m < 1 || m > total_draws_)
    throw DomainError("sample set prefix length out of range");
  PosteriorSampleSet out;
  out.total_draws_ = m;
  out.is_prior_ = is_prior_;
  out.chain_seed_ = chain_seed_;
  out.chain_burn_in_ = chain_burn_in_;
  long kept = 0, remaining = m;
  while (remaining > 0) {
    remaining -= multiplicities_[static_cast<std::size_t>(kept)];
    ++kept;
  }
  out.distinct_ = distinct_.topRows(kept);
  out.qoi_ = qoi_.head(kept);
  out.is_log_prior_ = is_log_prior_.head(kept);
  out.multiplicities_.assign(multiplicities_.begin(), multiplicities_.begin() + kept);
  if (remaining < 0) out.multiplicities_.back() += remaining;
  return out;
}

double prior_log_ratio(const GaussianSpec& target, const GaussianSpec& sampling,
                       const Vector& theta) {
  if (target.dim() != sampling.dim() || theta.size() != target.dim())
    throw DomainError("prior log ratio: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < theta.size(); ++i) {
    const double zt = theta[i] - target.mean[i];
    const double zs = theta[i] - sampling.mean[i];
    s += 0.5 * std::log(sampling.variance[i] / target.variance[i]) -
         0.5 * zt * zt / target.variance[i] + 0.5 * zs * zs / sampling.variance[i];
  }
  return s;
}

ISWeights compute_weights(const PosteriorSampleSet& samples,
                          const GaussianPriorFamily& family,
                          const HyperparameterBox& box, const Vector& xi) {
  box.require_inside(xi);
  const GaussianSpec target = family.at(xi);
  const long n = samples.distinct_count();
  Vector log_ratio(n);
  const bool same =
      (target.mean.array() == samples.is_prior().mean.array()).all() &&
      (target.variance.array() == samples.is_prior().variance.array()).all();
  for (long r = 0; r < n; ++r)
    log_ratio[r] =
        same ? 0.0
             : target.log_density(samples.distinct_draws().row(r).transpose()) -
                   samples.is_log_prior()[r];

  ISWeights w;
  w.shift = log_ratio.maxCoeff();
  w.u.resize(n);
  for (long r = 0; r < n; ++r) {
    w.u[r] = std::exp(log_ratio[r] - w.shift);
    const double m = static_cast<double>(samples.multiplicities()[static_cast<std::size_t>(r)]);
    w.sum_u += m * w.u[r];
    w.sum_u_sq += m * w.u[r] * w.u[r];
  }
  if (!(w.sum_u > 0.0) || !std::isfinite(w.sum_u))
    throw DegenerateWeightsError("importance weights collapsed", xi);
  return w;
}

namespace {

double ess_of(const ISWeights& w) { return w.sum_u * w.sum_u / w.sum_u_sq; }

void check_floor(const PosteriorSampleSet& samples, const ISWeights& w,
                 const Vector& xi, double floor_fraction) {
  if (floor_fraction <= 0.0) return;
  if (ess_of(w) < floor_fraction * static_cast<double>(samples.total_draws()))
    throw DegenerateWeightsError("effective sample size below floor", xi);
}

// Batch-means long-run variance of the influence sequence v_t, laid out run
// by run in chain order. Returns the standard error of sum(v)/sum_u.
double batch_means_se(const PosteriorSampleSet& samples, const Vector& v_per_distinct,
                      double sum_u) {
  const long total = samples.total_draws();
  const long batch = static_cast<long>(std::floor(std::sqrt(static_cast<double>(total))));
  const long batches = total / batch;
  if (batches < 2) throw DomainError("chain too short for batch-means errors");
  const long used = batch * batches;

  std::vector<double> batch_sum(static_cast<std::size_t>(batches), 0.0);
  long t = 0;
  for (long r = 0; r < samples.distinct_count() && t < used; ++r) {
    long m = samples.multiplicities()[static_cast<std::size_t>(r)];
    const double v = v_per_distinct[r];
    while (m > 0 && t < used) {
      const long chunk = std::min(m, batch - (t % batch));
      batch_sum[static_cast<std::size_t>(t / batch)] += static_cast<double>(chunk) * v;
      t += chunk;
      m -= chunk;
    }
  }

  double mean = 0.0;
  for (double s : batch_sum) mean += s;
  mean /= static_cast<double>(used);
  double ss = 0.0;
  for (double s : batch_sum) {
    const double d = s / static_cast<double>(batch) - mean;
    ss += d * d;
  }
  const double long_run_variance =
      static_cast<double>(batch) / static_cast<double>(batches - 1) * ss;
  return std::sqrt(static_cast<double>(total) * long_run_variance) / sum_u;
}

}  // namespace

double is_moment(const PosteriorSampleSet& samples, const GaussianPriorFamily& family,
                 const HyperparameterBox& box, const Vector& xi, int power,
                 double ess_floor_fraction) {
  if (power < 1) throw DomainError("is_moment: power must be positive");
  const ISWeights w = compute_weights(samples, family, box, xi);
  check_floor(samples, w, xi, ess_floor_fraction);
  // Accumulated draw by draw in chain order so that unit weights reproduce
  // the plain running average bit for bit.
  double num = 0.0;
  for (long r = 0; r < samples.distinct_count(); ++r) {
    const double q = samples.qoi_values()[r];
    const double qp = power == 1 ? q : power == 2 ? q * q : std::pow(q, power);
    const double term = w.u[r] * qp;
    for (long c = 0; c < samples.multiplicities()[static_cast<std::size_t>(r)]; ++c)
      num += term;
  }
  return num / w.sum_u;
}

double effective_sample_size(const PosteriorSampleSet& samples,
                             const GaussianPriorFamily& family,
                             const HyperparameterBox& box, const Vector& xi) {
  return ess_of(compute_weights(samples, family, box, xi));
}

MomentEstimate is_mean_estimate(const PosteriorSampleSet& samples,
                                const GaussianPriorFamily& family,
                                const HyperparameterBox& box, const Vector& xi,
                                double ess_floor_fraction) {
  const ISWeights w = compute_weights(samples, family, box, xi);
  check_floor(samples, w, xi, ess_floor_fraction);
  const long n = samples.distinct_count();
  double num = 0.0;
  for (long r = 0; r < n; ++r)
    num += static_cast<double>(samples.multiplicities()[static_cast<std::size_t>(r)]) *
           w.u[r] * samples.qoi_values()[r];
  const double mean = num / w.sum_u;

  Vector v(n);
  for (long r = 0; r < n; ++r) v[r] = w.u[r] * (samples.qoi_values()[r] - mean);
  MomentEstimate est;
  est.value = mean;
  est.standard_error = batch_means_se(samples, v, w.sum_u);
  est.ess = ess_of(w);
  return est;
}

MomentEstimate is_variance_estimate(const PosteriorSampleSet& samples,
                                    const GaussianPriorFamily& family,
                                    const HyperparameterBox& box, const Vector& xi,
                                    double ess_floor_fraction) {
  const ISWeights w = compute_weights(samples, family, box, xi);
  check_floor(samples, w, xi, ess_floor_fraction);
  const long n = samples.distinct_count();
  double num1 = 0.0, num2 = 0.0;
  for (long r = 0; r < n; ++r) {
    const double m = static_cast<double>(samples.multiplicities()[static_cast<std::size_t>(r)]);
    const double q = samples.qoi_values()[r];
    num1 += m * w.u[r] * q;
    num2 += m * w.u[r] * q * q;
  }
  const double m1 = num1 / w.sum_u;
  const double m2 = num2 / w.sum_u;

  // First-order (delta method) influence of m2 - m1^2.
  Vector v(n);
  for (long r = 0; r < n; ++r) {
    const double q = samples.qoi_values()[r];
    v[r] = w.u[r] * ((q * q - m2) - 2.0 * m1 * (q - m1));
  }
  MomentEstimate est;
  est.value = guarded_variance(m1, m2, xi);
  est.standard_error = batch_means_se(samples, v, w.sum_u);
  est.ess = ess_of(w);
  return est;
}

double guarded_variance(double m1, double m2, const Vector& xi) {
  const double raw = m2 - m1 * m1;
  if (raw >= 0.0) return raw;
  if (raw >= -1e-12 * std::max(m2, std::numeric_limits<double>::min())) return 0.0;
  throw DegenerateWeightsError("variance estimate irreducibly negative", xi);
}

EssProfile ess_profile(const PosteriorSampleSet& samples,
                       const GaussianPriorFamily& family, const HyperparameterBox& box,
                       const Matrix& design, double floor_fraction) {
  EssProfile profile;
  profile.total_draws = samples.total_draws();
  profile.floor_fraction = floor_fraction;
  if (design.rows() == 0) return profile;
  const double floor_value = floor_fraction * static_cast<double>(samples.total_draws());
  profile.entries.reserve(static_cast<std::size_t>(design.rows()));
  for (long i = 0; i < design.rows(); ++i) {
    EssProfileEntry entry;
    entry.xi = design.row(i).transpose();
    try {
      entry.ess = effective_sample_size(samples, family, box, entry.xi);
      entry.ok = entry.ess >= floor_value;
    } catch (const DegenerateWeightsError&) {
      entry.ess = 0.0;
      entry.ok = false;
    }
    if (!entry.ok) ++profile.below_floor;
    profile.entries.push_back(std::move(entry));
  }
  std::stable_sort(profile.entries.begin(), profile.entries.end(),
                   [](const EssProfileEntry& a, const EssProfileEntry& b) {
                     return a.ess < b.ess;
                   });
  profile.min_ess = profile.entries.front().ess;
  profile.median_ess = profile.entries[profile.entries.size() / 2].ess;
  return profile;
}

}  // namespace priorgsa
