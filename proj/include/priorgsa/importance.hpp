// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "priorgsa/dram.hpp"
#include "priorgsa/problem.hpp"

namespace priorgsa {

// Posterior draws under the sampling prior, run-length encoded in chain
// order. Stores the quantity of interest and the sampling-prior log density
// per distinct draw so reweighting never touches the forward model.
class PosteriorSampleSet {
 public:
  static PosteriorSampleSet from_chain(const MCMCChain& chain, const QoIFunction& qoi,
                                       const GaussianSpec& is_prior);

  // Assembles a sample set from already-computed pieces (deserialization,
  // synthetic sets in tests). Caches must be finite and multiplicities >= 1.
  static PosteriorSampleSet from_components(Matrix distinct, std::vector<long> multiplicities,
                                            Vector qoi, Vector is_log_prior,
                                            GaussianSpec is_prior);

  // The first m chain draws (repeats counted); 1 <= m <= total_draws().
  PosteriorSampleSet prefix(long m) const;

  long total_draws() const { return total_draws_; }
  long distinct_count() const { return distinct_.rows(); }
  int param_dim() const { return static_cast<int>(distinct_.cols()); }
  const Matrix& distinct_draws() const { return distinct_; }
  const std::vector<long>& multiplicities() const { return multiplicities_; }
  const Vector& qoi_values() const { return qoi_; }
  const Vector& is_log_prior() const { return is_log_prior_; }
  const GaussianSpec& is_prior() const { return is_prior_; }
  std::uint64_t chain_seed() const { return chain_seed_; }
  long chain_burn_in() const { return chain_burn_in_; }

 private:
  PosteriorSampleSet() = default;
  Matrix distinct_;
  std::vector<long> multiplicities_;
  Vector qoi_;
  Vector is_log_prior_;
  GaussianSpec is_prior_;
  long total_draws_ = 0;
  std::uint64_t chain_seed_ = 0;
  long chain_burn_in_ = 0;
};

// log pi_target(theta) - log pi_sampling(theta), normalization included.
double prior_log_ratio(const GaussianSpec& target, const GaussianSpec& sampling,
                       const Vector& theta);

// Unnormalized weights for retargeting the chain to the prior at xi,
// exponentiated against the largest log ratio for stability.
struct ISWeights {
  Vector u;              // per distinct draw, u = exp(log_ratio - shift)
  double shift = 0.0;    // max log ratio
  double sum_u = 0.0;    // sum over draws (multiplicity-weighted)
  double sum_u_sq = 0.0; // same for u^2
};
ISWeights compute_weights(const PosteriorSampleSet& samples,
                          const GaussianPriorFamily& family,
                          const HyperparameterBox& box, const Vector& xi);

// Self-normalized estimate of E[q^power] under the prior at xi.
// ess_floor_fraction > 0 raises DegenerateWeightsError when the effective
// sample size falls below that fraction of the chain length.
double is_moment(const PosteriorSampleSet& samples, const GaussianPriorFamily& family,
                 const HyperparameterBox& box, const Vector& xi, int power,
                 double ess_floor_fraction = 0.0);

// m2 - m1^2 guarded against rounding: negativity within 1e-12 relative to m2
// clamps to zero, anything larger signals broken weights and throws
// DegenerateWeightsError naming xi.
double guarded_variance(double m1, double m2, const Vector& xi);

// (sum u)^2 / (sum u^2), multiplicity-weighted; equals total_draws() when
// the target prior coincides with the sampling prior.
double effective_sample_size(const PosteriorSampleSet& samples,
                             const GaussianPriorFamily& family,
                             const HyperparameterBox& box, const Vector& xi);

struct MomentEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  double ess = 0.0;
};

// Posterior-mean and posterior-variance estimates with batch-means standard
// errors taken over the ordered chain, so autocorrelation is priced in.
MomentEstimate is_mean_estimate(const PosteriorSampleSet& samples,
                                const GaussianPriorFamily& family,
                                const HyperparameterBox& box, const Vector& xi,
                                double ess_floor_fraction = 0.0);
MomentEstimate is_variance_estimate(const PosteriorSampleSet& samples,
                                    const GaussianPriorFamily& family,
                                    const HyperparameterBox& box, const Vector& xi,
                                    double ess_floor_fraction = 0.0);

struct EssProfileEntry {
  Vector xi;
  double ess = 0.0;
  bool ok = true;
};

// Reuse diagnostics over a design, sorted by ascending effective sample size.
struct EssProfile {
  std::vector<EssProfileEntry> entries;
  long total_draws = 0;
  double floor_fraction = 0.0;
  long below_floor = 0;
  double min_ess = 0.0;
  double median_ess = 0.0;
};
EssProfile ess_profile(const PosteriorSampleSet& samples,
                       const GaussianPriorFamily& family, const HyperparameterBox& box,
                       const Matrix& design, double floor_fraction = 0.01);

}  // namespace priorgsa
