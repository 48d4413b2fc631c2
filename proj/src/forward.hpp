#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grid.hpp"
#include "net.hpp"
#include "rng.hpp"
#include "trajectory.hpp"

namespace bbcirl {

struct EpisodeResult {
  std::vector<StepRecord> steps;
  std::vector<double> rewards;  // true rewards, one per step; kept out of the log
  double undiscounted_return = 0.0;
  int first_goal_t = -1;  // timestep whose transition arrived at the goal, -1 if never
};

// Samples one fixed-length episode from the policy. The policy is not
// updated here.
EpisodeResult run_episode(const Environment& env, const Network& policy, Rng& rng,
                          int episode_index);
EpisodeResult run_episode(const Environment& env, const Network& policy,
                          std::uint64_t rng_seed, int episode_index = 0);

struct ForwardParams {
  int episodes = 5000;
  double alpha = 0.00075;
  double gamma = 0.999;
  std::uint64_t seed = 1;
  void validate() const;
};

struct ForwardResult {
  Network policy;
  TrajectoryLog log;
  std::vector<double> returns;  // undiscounted per-episode sums of the rewards seen by the learner
};

// REINFORCE: after each episode, applies the per-timestep update
//   params += alpha * gamma^t * R(s_{t+1}) * grad ln pi(a_t|s_t)
// in timestep order. When reward_override is given (49 per-state values) the
// learner optimizes those instead of the environment rewards; the trajectory
// log is identical in shape either way.
ForwardResult reinforce_train(const Environment& env, const NetSpec& spec,
                              const ForwardParams& params,
                              const std::vector<double>* reward_override = nullptr);

}  // namespace bbcirl
