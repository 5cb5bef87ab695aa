// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "priorgsa/common.hpp"

namespace priorgsa {

struct DRAMConfig {
  Vector initial_state;
  Matrix initial_proposal_covariance;
  long chain_length = 0;  // stored draws after burn-in
  long burn_in = 1000;
  std::uint64_t seed = 0;

  // Delayed rejection: each extra stage re-proposes from the current state
  // with the covariance shrunk by the cumulative product of stage_scales.
  int extra_stages = 1;
  std::vector<double> stage_scales = {0.2};

  // Adaptive Metropolis: refit the proposal covariance from the full state
  // history every adapt_interval steps once adapt_start steps have run.
  long adapt_start = 1000;
  long adapt_interval = 100;
  double adapt_regularization = 1e-8;
  double adapt_scale = 0.0;  // <= 0 selects 2.38^2 / dim

  double acceptance_low = 0.1;   // warning band bounds
  double acceptance_high = 0.6;

  void validate() const;  // throws ConfigError listing every violation
};

struct MCMCChain {
  Matrix draws;  // chain_length x dim, in chain order, repeats included
  // Stage that produced each stored draw: 1 = first proposal, 2 = first
  // delayed-rejection stage, ...; 0 = every stage rejected (state repeats).
  std::vector<int> accepted_stage;
  double acceptance_rate = 0.0;  // fraction of stored steps with any acceptance
  long distinct_draws = 0;       // runs of exactly equal consecutive draws
  long target_evaluations = 0;
  Matrix proposal_covariance;    // first-stage proposal covariance at the last step
  std::uint64_t seed = 0;
  long burn_in = 0;
  std::vector<std::string> warnings;
};

// Delayed-rejection adaptive Metropolis targeting exp(log_target).
// EvaluationError from the target is treated as a zero-density proposal.
MCMCChain dram_sample(const std::function<double(const Vector&)>& log_target,
                      const DRAMConfig& config);

}  // namespace priorgsa
