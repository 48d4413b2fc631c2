#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "grid.hpp"

namespace bbcirl {

struct StepRecord {
  int episode = 0;
  int t = 0;
  int state = 0;
  int action = 0;
  int next_state = 0;
  bool operator==(const StepRecord&) const = default;
};

// State-action observations across episodes: what the observer sees.
// Rewards are never stored here.
struct TrajectoryLog {
  std::vector<StepRecord> records;
  int num_episodes = 0;
  int horizon = 0;
  std::uint64_t env_hash = 0;

  // Episodes contiguous from 0, t strictly increasing per episode, states
  // chained within an episode. Throws UsageError on violation.
  void check_consistent() const;

  std::string serialize(const std::vector<std::string>& manifest = {}) const;
  static TrajectoryLog deserialize(std::string_view text);
};

}  // namespace bbcirl
