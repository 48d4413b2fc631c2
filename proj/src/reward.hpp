#pragma once

#include <cstdint>
#include <vector>

#include "bundle.hpp"
#include "net.hpp"
#include "trajectory.hpp"

namespace bbcirl {

struct TrainingSample {
  int state = 0;
  int action = 0;
  int next_state = 0;
  int t = 0;       // within-episode timestep, drives gamma^t
  int bundle = 0;  // 0-based; bundle+1 must exist in the cloned sequence
};

// Transitions usable for reward estimation: every record of every bundle
// that has a successor policy. The last bundle contributes nothing.
std::vector<TrainingSample> eligible_samples(const TrajectoryLog& log,
                                             const ClonedPolicySequence& policies);

struct BetaParams {
  double gamma = 0.999;
  int batch_size = 100;       // Z
  int episodes = 5000;        // F
  double learning_rate = 0.00075;
  GradMode gradient_mode = GradMode::log_prob;
  std::uint64_t seed = 3;
  void validate() const;
};

// residual = beta(s_next) * gamma^t * g  -  (last_layer(psi_{k+1}) - last_layer(psi_k))
// over last-layer coordinates of the cloned nets; g is the last-layer block
// of the bundle-k policy's score at (state, action).
std::vector<double> beta_residual(const TrainingSample& sample, const Network& beta,
                                  const ClonedPolicySequence& policies, double gamma,
                                  GradMode mode = GradMode::log_prob);

struct BetaResult {
  Network beta;
  std::vector<double> loss_series;  // summed squared residual norm per training episode
};

// Uniformly samples Z eligible transitions per training episode, accumulates
// the squared residual norm, and takes one SGD step on beta. Cloned policies
// are read-only throughout.
BetaResult train_beta(const TrajectoryLog& log, const ClonedPolicySequence& policies,
                      const NetSpec& beta_spec, const BetaParams& params);

// beta evaluated at every one-hot state.
std::vector<double> predict_rewards(const Network& beta, int num_states);

}  // namespace bbcirl
