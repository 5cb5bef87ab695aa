// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/dram.hpp"

#include <cmath>
#include <limits>

#include "priorgsa/stats.hpp"

namespace priorgsa {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093453;

struct PathNode {
  Vector x;
  double ell;  // log target at x
};

// Proposal machinery for one step: stage j draws from N(current, s_j^2 C).
class StageProposals {
 public:
  StageProposals(const Eigen::LLT<Matrix>& llt, const std::vector<double>& scales,
                 int dim)
      : llt_(llt), cumulative_(scales.size() + 1, 1.0), dim_(dim) {
    for (std::size_t j = 0; j < scales.size(); ++j)
      cumulative_[j + 1] = cumulative_[j] * scales[j];
    log_det_half_ = llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  }

  double scale(int stage) const { return cumulative_[static_cast<std::size_t>(stage - 1)]; }

  Vector draw(int stage, const Vector& from, Rng& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector z(dim_);
    for (int i = 0; i < dim_; ++i) z[i] = normal(rng);
    const Vector step = llt_.matrixL() * z;
    return from + scale(stage) * step;
  }

  double log_density(int stage, const Vector& from, const Vector& to) const {
    const double s = scale(stage);
    const Vector w = llt_.matrixL().solve(to - from) / s;
    return -0.5 * w.squaredNorm() - 0.5 * dim_ * kLog2Pi - log_det_half_ -
           dim_ * std::log(s);
  }

 private:
  const Eigen::LLT<Matrix>& llt_;
  std::vector<double> cumulative_;
  int dim_;
  double log_det_half_;
};

// Log acceptance probability of the last node of the path, where the path is
// (current, proposal_1, ..., proposal_i). Stage-i proposal densities cancel
// by symmetry, so only stages below i enter.
double log_alpha(const std::vector<PathNode>& path, const StageProposals& prop);

double log_numerator(const std::vector<PathNode>& seq, const StageProposals& prop) {
  const int i = static_cast<int>(seq.size()) - 1;
  double t = seq[0].ell;
  if (t == kNegInf) return kNegInf;
  for (int j = 1; j <= i - 1; ++j) {
    t += prop.log_density(j, seq[0].x, seq[static_cast<std::size_t>(j)].x);
    std::vector<PathNode> prefix(seq.begin(), seq.begin() + j + 1);
    const double la = log_alpha(prefix, prop);
    if (la == 0.0) return kNegInf;  // a shorter reverse move would be certain
    t += log1m_exp(la);
  }
  return t;
}

double log_alpha(const std::vector<PathNode>& path, const StageProposals& prop) {
  const std::size_t i = path.size() - 1;
  if (path[static_cast<std::size_t>(i)].ell == kNegInf) return kNegInf;
  if (i == 1) return std::min(0.0, path[1].ell - path[0].ell);
  std::vector<PathNode> reversed(path.rbegin(), path.rend());
  const double num = log_numerator(reversed, prop);
  if (num == kNegInf) return kNegInf;
  const double den = log_numerator(path, prop);
  return std::min(0.0, num - den);
}

// Streaming mean/covariance of the full state history.
class RunningMoments {
 public:
  explicit RunningMoments(int dim) : n_(0), mean_(Vector::Zero(dim)), m2_(Matrix::Zero(dim, dim)) {}

  void push(const Vector& x) {
    ++n_;
    const Vector delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_).transpose();
  }

  long count() const { return n_; }
  Matrix covariance() const { return m2_ / static_cast<double>(n_ - 1); }

 private:
  long n_;
  Vector mean_;
  Matrix m2_;
};

}  // namespace

void DRAMConfig::validate() const {
  std::vector<std::string> bad;
  const int d = static_cast<int>(initial_state.size());
  if (d == 0) bad.push_back("dram: empty initial state");
  if (chain_length < 1) bad.push_back("dram: chain_length must be at least 1");
  if (burn_in < 0) bad.push_back("dram: negative burn_in");
  if (extra_stages < 0) bad.push_back("dram: negative extra_stages");
  if (static_cast<int>(stage_scales.size()) != extra_stages)
    bad.push_back("dram: stage_scales must list one factor per extra stage");
  for (double s : stage_scales)
    if (!(s > 0.0 && s <= 1.0)) bad.push_back("dram: stage scales must lie in (0, 1]");
  if (adapt_start < 1) bad.push_back("dram: adapt_start must be at least 1");
  if (adapt_interval < 1) bad.push_back("dram: adapt_interval must be at least 1");
  if (!(adapt_regularization >= 0.0)) bad.push_back("dram: negative regularization");
  if (initial_proposal_covariance.rows() != d || initial_proposal_covariance.cols() != d)
    bad.push_back("dram: proposal covariance does not match the state dimension");
  else if (Eigen::LLT<Matrix>(initial_proposal_covariance).info() != Eigen::Success)
    bad.push_back("dram: proposal covariance is not positive definite");
  if (!(acceptance_low >= 0.0 && acceptance_low < acceptance_high && acceptance_high <= 1.0))
    bad.push_back("dram: invalid acceptance warning band");
  if (!bad.empty()) throw ConfigError(bad);
}

MCMCChain dram_sample(const std::function<double(const Vector&)>& log_target,
                      const DRAMConfig& config) {
  config.validate();
  const int d = static_cast<int>(config.initial_state.size());
  const double adapt_scale =
      config.adapt_scale > 0.0 ? config.adapt_scale : 2.38 * 2.38 / d;

  MCMCChain chain;
  chain.seed = config.seed;
  chain.burn_in = config.burn_in;
  chain.draws.resize(config.chain_length, d);
  chain.accepted_stage.resize(static_cast<std::size_t>(config.chain_length));

  auto evaluate = [&](const Vector& x) {
    ++chain.target_evaluations;
    double ell;
    try {
      ell = log_target(x);
    } catch (const EvaluationError&) {
      return kNegInf;
    }
    if (std::isnan(ell)) return kNegInf;
    return ell;
  };

  Vector state = config.initial_state;
  double state_ell = evaluate(state);
  if (!std::isfinite(state_ell))
    throw ConfigError("dram: log target is not finite at the initial state");

  Eigen::LLT<Matrix> llt(config.initial_proposal_covariance);
  RunningMoments history(d);
  history.push(state);

  Rng rng(config.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const long total_steps = config.burn_in + config.chain_length;
  long accepted_after_burn_in = 0;

  for (long step = 1; step <= total_steps; ++step) {
    StageProposals proposals(llt, config.stage_scales, d);
    std::vector<PathNode> path{{state, state_ell}};
    int accepted_at = 0;
    for (int stage = 1; stage <= 1 + config.extra_stages; ++stage) {
      Vector candidate = proposals.draw(stage, state, rng);
      path.push_back({std::move(candidate), 0.0});
      path.back().ell = evaluate(path.back().x);
      const double la = log_alpha(path, proposals);
      const double u = unif(rng);
      if (std::log(u) < la) {
        state = path.back().x;
        state_ell = path.back().ell;
        accepted_at = stage;
        break;
      }
    }

    history.push(state);
    if (step >= config.adapt_start &&
        (step - config.adapt_start) % config.adapt_interval == 0 &&
        history.count() >= 2) {
      const Matrix adapted =
          adapt_scale * (history.covariance() +
                         config.adapt_regularization * Matrix::Identity(d, d));
      Eigen::LLT<Matrix> refit(adapted);
      if (refit.info() == Eigen::Success) llt = std::move(refit);
    }

    if (step > config.burn_in) {
      const long k = step - config.burn_in - 1;
      chain.draws.row(k) = state.transpose();
      chain.accepted_stage[static_cast<std::size_t>(k)] = accepted_at;
      if (accepted_at > 0) ++accepted_after_burn_in;
    }
  }

  chain.acceptance_rate =
      static_cast<double>(accepted_after_burn_in) / static_cast<double>(config.chain_length);
  const Matrix l = llt.matrixL();
  chain.proposal_covariance = l * l.transpose();
  chain.distinct_draws = 1;
  for (long k = 1; k < config.chain_length; ++k)
    if ((chain.draws.row(k).array() != chain.draws.row(k - 1).array()).any())
      ++chain.distinct_draws;

  if (chain.acceptance_rate <= config.acceptance_low ||
      chain.acceptance_rate >= config.acceptance_high)
    chain.warnings.push_back(
        "acceptance rate " + std::to_string(chain.acceptance_rate) +
        " outside (" + std::to_string(config.acceptance_low) + ", " +
        std::to_string(config.acceptance_high) + ")");
  return chain;
}

}  // namespace priorgsa
