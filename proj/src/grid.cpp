#include "grid.hpp"

#include <string>

#include "io.hpp"
#include "rng.hpp"

namespace bbcirl {

std::vector<double> generate_cell_rewards(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> rewards(static_cast<std::size_t>(width * height));
  for (auto& r : rewards) r = -5.0 + static_cast<double>(rng.index(4));
  return rewards;
}

GridConfig GridConfig::defaults() {
  GridConfig cfg;
  cfg.finalize();
  return cfg;
}

void GridConfig::finalize() {
  if (cell_rewards.empty()) cell_rewards = generate_cell_rewards(width, height, reward_seed);
  validate();
}

void GridConfig::validate() const {
  const int n = width * height;
  if (width <= 0 || height <= 0)
    throw ConfigError("grid: width and height must be positive");
  if (start < 0 || start >= n || goal < 0 || goal >= n)
    throw ConfigError("grid: start/goal cell index out of range [0," + std::to_string(n) + ")");
  if (start == goal) throw ConfigError("grid: start must differ from goal");
  if (horizon < 1) throw ConfigError("grid: horizon must be at least 1");
  if (static_cast<int>(cell_rewards.size()) != n)
    throw ConfigError("grid: cell_rewards must have " + std::to_string(n) + " entries");
  for (int s = 0; s < n; ++s) {
    if (s == goal) continue;
    double r = cell_rewards[static_cast<std::size_t>(s)];
    if (r < -5.0 || r > -2.0)
      throw ConfigError("grid: cell reward at state " + std::to_string(s) +
                        " outside [-5,-2]: " + format_double(r));
    if (goal_reward <= r)
      throw ConfigError("grid: goal_reward must exceed every cell reward; state " +
                        std::to_string(s) + " has " + format_double(r));
  }
}

namespace {

std::uint64_t config_hash(const GridConfig& cfg) {
  std::string repr = std::to_string(cfg.width) + "," + std::to_string(cfg.height) + "," +
                     std::to_string(cfg.start) + "," + std::to_string(cfg.goal) + "," +
                     format_double(cfg.goal_reward) + "," + std::to_string(cfg.horizon);
  for (double r : cfg.cell_rewards) repr += "," + format_double(r);
  return fnv1a64(repr);
}

}  // namespace

Environment::Environment(GridConfig config) : cfg_(std::move(config)) {
  cfg_.finalize();
  hash_ = config_hash(cfg_);
}

void Environment::check_state(int state) const {
  if (state < 0 || state >= num_states())
    throw UsageError("state index out of range: " + std::to_string(state));
}

StepOutcome Environment::step(int state, int action) const {
  check_state(state);
  const int w = cfg_.width;
  int row = state / w;
  int col = state % w;
  switch (action) {
    case kActionRight:
      if (col + 1 < w) ++col;
      break;
    case kActionLeft:
      if (col > 0) --col;
      break;
    case kActionDown:
      if (row + 1 < cfg_.height) ++row;
      break;
    default:
      throw UsageError("action must be 0 (right), 1 (left) or 2 (down), got " +
                       std::to_string(action));
  }
  const int next = row * w + col;
  return StepOutcome{next, reward_at(next), next == cfg_.goal};
}

double Environment::reward_at(int state) const {
  check_state(state);
  if (state == cfg_.goal) return cfg_.goal_reward;
  return cfg_.cell_rewards[static_cast<std::size_t>(state)];
}

void Environment::encode_state(int state, std::span<double> out) const {
  check_state(state);
  if (static_cast<int>(out.size()) != num_states())
    throw UsageError("encode_state: output span must have length " +
                     std::to_string(num_states()));
  for (auto& v : out) v = 0.0;
  out[static_cast<std::size_t>(state)] = 1.0;
}

std::vector<double> Environment::encode_state(int state) const {
  std::vector<double> out(static_cast<std::size_t>(num_states()));
  encode_state(state, out);
  return out;
}

std::vector<double> Environment::reward_table() const {
  std::vector<double> table(static_cast<std::size_t>(num_states()));
  for (int s = 0; s < num_states(); ++s) table[static_cast<std::size_t>(s)] = reward_at(s);
  return table;
}

}  // namespace bbcirl
