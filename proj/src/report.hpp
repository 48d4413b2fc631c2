#pragma once

#include <cstdint>
#include <vector>

#include "bundle.hpp"
#include "forward.hpp"
#include "grid.hpp"
#include "net.hpp"
#include "reward.hpp"

namespace bbcirl {

struct NormalizedGrid {
  std::vector<double> values;  // in [0,1]
  double source_min = 0.0;
  double source_max = 0.0;
  bool constant_input = false;  // degenerate case: everything mapped to 0.5
};

// Affine min-max map to [0,1]; constant input maps to all 0.5.
NormalizedGrid normalize_grid(std::span<const double> raw);

struct EvalResult {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  int episodes = 0;
  std::uint64_t seed = 0;
};

// Stochastic rollouts of the policy; undiscounted true returns.
EvalResult evaluate_policy(const Network& policy, const Environment& env, int n_episodes,
                           std::uint64_t seed);

struct GreedyRollout {
  std::vector<int> states;  // visited states, starting cell first
  bool reached_goal = false;
  int steps_to_goal = -1;
};

GreedyRollout greedy_rollout(const Network& policy, const Environment& env);

struct RetrainResult {
  Network policy;
  EvalResult true_eval;                 // measured against the real reward function
  std::vector<double> learner_returns;  // returns under the beta reward the learner saw
  GreedyRollout greedy;
  double reward_scale = 1.0;            // the factor actually applied to beta's outputs
};

// Trains a fresh policy with the environment's dynamics but rewards
// beta(s_{t+1}) * reward_scale, then evaluates it on the true rewards.
// reward_scale <= 0 selects auto scaling: beta is rescaled so its largest
// magnitude matches the goal reward.
RetrainResult retrain_from_beta(const Network& beta, const Environment& env,
                                const NetSpec& policy_spec, const ForwardParams& train,
                                double reward_scale, int eval_episodes,
                                std::uint64_t eval_seed);

struct ConfidenceBands {
  std::vector<double> mean;   // per-state mean of normalized estimates
  std::vector<double> lower;  // mean - 1.96 * sample std
  std::vector<double> upper;  // mean + 1.96 * sample std
  std::vector<double> visitation_pct;  // % of log records whose state is s
  int runs = 0;
};

// Trains beta once per listed seed on the same log and cloned sequence;
// bands are over the min-max normalized reward estimates.
ConfidenceBands confidence_bands(const TrajectoryLog& log,
                                 const ClonedPolicySequence& policies,
                                 const NetSpec& beta_spec, const BetaParams& base_params,
                                 std::span<const std::uint64_t> seeds, int num_states);

std::vector<double> visitation_percentages(const TrajectoryLog& log, int num_states);

// Prefix of the cloned sequence: bundles 1..first_k.
ClonedPolicySequence truncate_bundles(const ClonedPolicySequence& policies, int first_k);

struct NormSeries {
  std::vector<double> norms;  // Euclidean norm of each policy's last layer
  std::vector<double> diffs;  // |norm_{k+1} - norm_k|
  double mean_diff = 0.0;
};

NormSeries last_layer_norm_series(const ClonedPolicySequence& policies);

// Spearman rank correlation; average ranks on ties.
double spearman_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace bbcirl
