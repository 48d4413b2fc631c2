#include "config.hpp"

#include <algorithm>

#include "io.hpp"

namespace bbcirl {

KeyValueConfig KeyValueConfig::parse_text(std::string_view text) {
  KeyValueConfig cfg;
  int lineno = 0;
  for (const auto& raw : split(text, '\n')) {
    ++lineno;
    auto line = trim(raw);
    if (auto pos = line.find('#'); pos != std::string_view::npos) line = trim(line.substr(0, pos));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    auto key = std::string(trim(line.substr(0, eq)));
    auto value = std::string(trim(line.substr(eq + 1)));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    cfg.values_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("config file not found: " + path.string());
  return parse_text(read_file(path));
}

std::string KeyValueConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

const std::string& KeyValueConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

namespace {

class Reader {
 public:
  explicit Reader(const KeyValueConfig& kv) : kv_(kv) {}

  template <typename F>
  void apply(const std::string& key, F&& setter) {
    known_.push_back(key);
    if (!kv_.has(key)) return;
    try {
      setter(kv_.get(key));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("invalid config key '" + key + "': " + e.what());
    }
  }

  void check_unknown() const {
    for (const auto& [key, value] : kv_.entries()) {
      (void)value;
      if (std::find(known_.begin(), known_.end(), key) == known_.end())
        throw ConfigError("unknown config key '" + key + "'");
    }
  }

 private:
  const KeyValueConfig& kv_;
  std::vector<std::string> known_;
};

int to_int(const std::string& v) { return static_cast<int>(parse_int(v)); }

std::vector<int> to_int_list(const std::string& v) {
  std::vector<int> out;
  for (const auto& tok : split(v, ',')) {
    auto t = trim(tok);
    if (t.empty()) continue;
    out.push_back(to_int(std::string(t)));
  }
  if (out.empty()) throw IoError("empty list");
  return out;
}

std::vector<std::uint64_t> to_u64_list(const std::string& v) {
  std::vector<std::uint64_t> out;
  for (const auto& tok : split(v, ',')) {
    auto t = trim(tok);
    if (t.empty()) continue;
    out.push_back(parse_u64(t));
  }
  if (out.empty()) throw IoError("empty list");
  return out;
}

std::vector<double> to_double_list(const std::string& v) {
  std::vector<double> out;
  for (const auto& tok : split(v, ',')) {
    auto t = trim(tok);
    if (t.empty()) continue;
    out.push_back(parse_double(t));
  }
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw IoError("expected a boolean");
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::from_kv(const KeyValueConfig& kv) {
  PipelineConfig c;
  Reader r(kv);

  r.apply("grid.width", [&](const std::string& v) { c.grid.width = to_int(v); });
  r.apply("grid.height", [&](const std::string& v) { c.grid.height = to_int(v); });
  r.apply("grid.start", [&](const std::string& v) { c.grid.start = to_int(v); });
  r.apply("grid.goal", [&](const std::string& v) { c.grid.goal = to_int(v); });
  r.apply("grid.goal_reward", [&](const std::string& v) { c.grid.goal_reward = parse_double(v); });
  r.apply("grid.horizon", [&](const std::string& v) { c.grid.horizon = to_int(v); });
  r.apply("grid.reward_seed", [&](const std::string& v) { c.grid.reward_seed = parse_u64(v); });
  r.apply("grid.cell_rewards", [&](const std::string& v) { c.grid.cell_rewards = to_double_list(v); });

  r.apply("forward.episodes", [&](const std::string& v) { c.forward.episodes = to_int(v); });
  r.apply("forward.alpha", [&](const std::string& v) { c.forward.alpha = parse_double(v); });
  r.apply("forward.gamma", [&](const std::string& v) { c.forward.gamma = parse_double(v); });
  r.apply("forward.seed", [&](const std::string& v) { c.forward.seed = parse_u64(v); });
  r.apply("forward.hidden", [&](const std::string& v) { c.forward_hidden = to_int_list(v); });

  r.apply("bundle.size", [&](const std::string& v) { c.clone.bundle_size = to_int(v); });
  r.apply("bundle.mode", [&](const std::string& v) {
    if (v == "disjoint") c.clone.mode = BundleMode::disjoint;
    else if (v == "sliding") c.clone.mode = BundleMode::sliding;
    else throw IoError("expected disjoint or sliding");
  });
  r.apply("bundle.independent", [&](const std::string& v) { c.clone.independent = to_bool(v); });
  r.apply("bundle.clone_lr", [&](const std::string& v) { c.clone.learning_rate = parse_double(v); });
  r.apply("bundle.clone_epochs", [&](const std::string& v) { c.clone.epochs = to_int(v); });
  r.apply("bundle.seed", [&](const std::string& v) { c.clone.seed = parse_u64(v); });
  r.apply("bundle.hidden", [&](const std::string& v) { c.clone_hidden = to_int_list(v); });

  r.apply("beta.batch", [&](const std::string& v) { c.beta.batch_size = to_int(v); });
  r.apply("beta.episodes", [&](const std::string& v) { c.beta.episodes = to_int(v); });
  r.apply("beta.lr", [&](const std::string& v) { c.beta.learning_rate = parse_double(v); });
  r.apply("beta.gamma", [&](const std::string& v) { c.beta.gamma = parse_double(v); });
  r.apply("beta.gradient_mode", [&](const std::string& v) {
    if (v == "log") c.beta.gradient_mode = GradMode::log_prob;
    else if (v == "plain") c.beta.gradient_mode = GradMode::prob;
    else throw IoError("expected log or plain");
  });
  r.apply("beta.hidden", [&](const std::string& v) { c.beta_hidden = to_int_list(v); });
  r.apply("beta.seeds", [&](const std::string& v) { c.beta_seeds = to_u64_list(v); });

  r.apply("eval.episodes", [&](const std::string& v) { c.eval.episodes = to_int(v); });
  r.apply("eval.runs", [&](const std::string& v) { c.eval.runs = to_int(v); });
  r.apply("eval.first_k", [&](const std::string& v) { c.eval.first_k = to_int(v); });
  r.apply("eval.beta_reward_scale",
          [&](const std::string& v) { c.eval.beta_reward_scale = parse_double(v); });
  r.apply("eval.seed", [&](const std::string& v) { c.eval.seed = parse_u64(v); });

  r.apply("bounds.delta", [&](const std::string& v) { c.bounds.delta = parse_double(v); });
  r.apply("bounds.pi_size", [&](const std::string& v) { c.bounds.pi_size = parse_double(v); });
  r.apply("bounds.epsilon", [&](const std::string& v) { c.bounds.epsilon = parse_double(v); });
  r.apply("bounds.bmax", [&](const std::string& v) { c.bounds.bmax = to_int(v); });

  r.apply("output.dir", [&](const std::string& v) { c.output_dir = v; });

  r.check_unknown();
  if (!c.beta_seeds.empty()) c.beta.seed = c.beta_seeds.front();
  c.grid.finalize();
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  return from_kv(KeyValueConfig::parse_file(path));
}

KeyValueConfig PipelineConfig::to_kv() const {
  KeyValueConfig kv;
  kv.set("grid.width", std::to_string(grid.width));
  kv.set("grid.height", std::to_string(grid.height));
  kv.set("grid.start", std::to_string(grid.start));
  kv.set("grid.goal", std::to_string(grid.goal));
  kv.set("grid.goal_reward", format_double(grid.goal_reward));
  kv.set("grid.horizon", std::to_string(grid.horizon));
  kv.set("grid.reward_seed", std::to_string(grid.reward_seed));
  if (!grid.cell_rewards.empty()) kv.set("grid.cell_rewards", join_doubles(grid.cell_rewards));
  kv.set("forward.episodes", std::to_string(forward.episodes));
  kv.set("forward.alpha", format_double(forward.alpha));
  kv.set("forward.gamma", format_double(forward.gamma));
  kv.set("forward.seed", std::to_string(forward.seed));
  kv.set("forward.hidden", join_ints(forward_hidden));
  kv.set("bundle.size", std::to_string(clone.bundle_size));
  kv.set("bundle.mode", clone.mode == BundleMode::disjoint ? "disjoint" : "sliding");
  kv.set("bundle.independent", clone.independent ? "true" : "false");
  kv.set("bundle.clone_lr", format_double(clone.learning_rate));
  kv.set("bundle.clone_epochs", std::to_string(clone.epochs));
  kv.set("bundle.seed", std::to_string(clone.seed));
  kv.set("bundle.hidden", join_ints(clone_hidden));
  kv.set("beta.batch", std::to_string(beta.batch_size));
  kv.set("beta.episodes", std::to_string(beta.episodes));
  kv.set("beta.lr", format_double(beta.learning_rate));
  kv.set("beta.gamma", format_double(beta.gamma));
  kv.set("beta.gradient_mode", beta.gradient_mode == GradMode::log_prob ? "log" : "plain");
  kv.set("beta.hidden", join_ints(beta_hidden));
  kv.set("beta.seeds", join_u64(beta_seeds));
  kv.set("eval.episodes", std::to_string(eval.episodes));
  kv.set("eval.runs", std::to_string(eval.runs));
  kv.set("eval.first_k", std::to_string(eval.first_k));
  kv.set("eval.beta_reward_scale", format_double(eval.beta_reward_scale));
  kv.set("eval.seed", std::to_string(eval.seed));
  kv.set("bounds.delta", format_double(bounds.delta));
  kv.set("bounds.pi_size", format_double(bounds.pi_size));
  kv.set("bounds.epsilon", format_double(bounds.epsilon));
  kv.set("bounds.bmax", std::to_string(bounds.bmax));
  kv.set("output.dir", output_dir);
  return kv;
}

NetSpec PipelineConfig::forward_spec() const {
  NetSpec spec;
  spec.layer_sizes.push_back(grid.width * grid.height);
  for (int h : forward_hidden) spec.layer_sizes.push_back(h);
  spec.layer_sizes.push_back(kNumActions);
  spec.head = Head::softmax;
  spec.init_seed = forward.seed;
  return spec;
}

NetSpec PipelineConfig::clone_spec() const {
  NetSpec spec;
  spec.layer_sizes.push_back(grid.width * grid.height);
  for (int h : clone_hidden) spec.layer_sizes.push_back(h);
  spec.layer_sizes.push_back(kNumActions);
  spec.head = Head::softmax;
  spec.init_seed = clone.seed;
  return spec;
}

NetSpec PipelineConfig::beta_spec() const {
  NetSpec spec;
  spec.layer_sizes.push_back(grid.width * grid.height);
  for (int h : beta_hidden) spec.layer_sizes.push_back(h);
  spec.layer_sizes.push_back(1);
  spec.head = Head::linear;
  spec.init_seed = beta_seeds.empty() ? 3 : beta_seeds.front();
  return spec;
}

std::uint64_t PipelineConfig::hash() const { return fnv1a64(to_kv().serialize()); }

void PipelineConfig::validate() const {
  grid.validate();
  forward.validate();
  clone.validate();
  beta.validate();
  forward_spec().validate();
  clone_spec().validate();
  beta_spec().validate();
  if (eval.episodes < 2) throw ConfigError("eval.episodes must be at least 2");
  if (eval.runs < 2) throw ConfigError("eval.runs must be at least 2");
  if (eval.first_k < 0) throw ConfigError("eval.first_k must be non-negative");
  if (beta_seeds.empty()) throw ConfigError("beta.seeds must list at least one seed");
  if (bounds.bmax < 1) throw ConfigError("bounds.bmax must be at least 1");
  if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
}

}  // namespace bbcirl
