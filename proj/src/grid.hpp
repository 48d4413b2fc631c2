#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"

namespace bbcirl {

inline constexpr int kActionRight = 0;
inline constexpr int kActionLeft = 1;
inline constexpr int kActionDown = 2;
inline constexpr int kNumActions = 3;

// Per-cell reward map drawn uniformly from {-5,-4,-3,-2}, one draw per cell
// in row-major order. The goal cell gets a draw too, but dynamics always pay
// goal_reward there.
std::vector<double> generate_cell_rewards(int width, int height, std::uint64_t seed);

struct GridConfig {
  int width = 7;
  int height = 7;
  int start = 0;
  int goal = 48;
  double goal_reward = 20.0;
  int horizon = 15;
  std::uint64_t reward_seed = 2204;
  std::vector<double> cell_rewards;  // empty -> generated from reward_seed

  // Resolves cell_rewards from the seed if absent, then checks invariants.
  void finalize();
  void validate() const;

  static GridConfig defaults();
};

struct StepOutcome {
  int next_state = 0;
  double reward = 0.0;
  bool done = false;  // goal arrival; horizon cutoff is the rollout's business
};

// Deterministic grid MDP. Actions move right/left/down; off-grid moves clamp
// in place. Every episode runs the full horizon: the goal does not absorb the
// agent, it is simply the one cell whose arrival pays goal_reward, so a
// policy that stays on it keeps collecting that reward.
class Environment {
 public:
  explicit Environment(GridConfig config);

  int num_states() const { return cfg_.width * cfg_.height; }
  int start() const { return cfg_.start; }
  int goal() const { return cfg_.goal; }
  int horizon() const { return cfg_.horizon; }
  const GridConfig& config() const { return cfg_; }

  StepOutcome step(int state, int action) const;

  // Reward paid on arrival at `state`.
  double reward_at(int state) const;

  // One-hot feature vector of length num_states().
  void encode_state(int state, std::span<double> out) const;
  std::vector<double> encode_state(int state) const;

  // Arrival rewards for all states (goal entry = goal_reward).
  std::vector<double> reward_table() const;

  std::uint64_t fingerprint() const { return hash_; }

 private:
  void check_state(int state) const;
  GridConfig cfg_;
  std::uint64_t hash_;
};

}  // namespace bbcirl
