#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bundle.hpp"
#include "forward.hpp"
#include "grid.hpp"
#include "reward.hpp"
#include "theory.hpp"

namespace bbcirl {

// Flat `key = value` file with `#` comments and dotted section keys.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_text(std::string_view text);
  static KeyValueConfig parse_file(const std::filesystem::path& path);

  // Canonical form: sorted keys, one `key = value` line each.
  std::string serialize() const;

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::string& get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

  bool operator==(const KeyValueConfig&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

struct EvalConfig {
  int episodes = 100;       // rollouts per policy evaluation
  int runs = 10;            // beta trainings behind the confidence bands
  int first_k = 0;          // 0 = use every bundle
  double beta_reward_scale = 1.0;  // <= 0 selects auto scaling
  std::uint64_t seed = 4;
};

struct BoundsConfig {
  double delta = 0.05;
  double pi_size = 1e8;
  double epsilon = -1.0;  // negative = estimate from the cloned sequence
  int bmax = 100;
};

// Typed view over the config file; carries the published hyperparameters as
// defaults so an empty file is the reference experiment.
struct PipelineConfig {
  GridConfig grid;
  ForwardParams forward;
  std::vector<int> forward_hidden = {16};
  CloneParams clone;
  std::vector<int> clone_hidden = {16};
  BetaParams beta;
  std::vector<int> beta_hidden = {20};
  std::vector<std::uint64_t> beta_seeds = {3};
  EvalConfig eval;
  BoundsConfig bounds;
  std::string output_dir = "out";

  static PipelineConfig from_kv(const KeyValueConfig& kv);
  static PipelineConfig load(const std::filesystem::path& path);
  KeyValueConfig to_kv() const;  // fully expanded effective config

  NetSpec forward_spec() const;
  NetSpec clone_spec() const;
  NetSpec beta_spec() const;

  std::uint64_t hash() const;  // over the canonical effective serialization
  void validate() const;
};

}  // namespace bbcirl
