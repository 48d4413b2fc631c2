#include "bundle.hpp"

#include <cstring>
#include <string>

#include "io.hpp"

namespace bbcirl {

void CloneParams::validate() const {
  if (bundle_size < 1) throw ConfigError("clone: bundle size must be at least 1");
  if (learning_rate <= 0.0) throw ConfigError("clone: learning rate must be positive");
  if (epochs < 1) throw ConfigError("clone: epochs must be at least 1");
}

namespace {

// Episode boundaries assuming records sorted by (episode, t).
std::vector<std::pair<std::size_t, std::size_t>> episode_ranges(const TrajectoryLog& log) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges(
      static_cast<std::size_t>(log.num_episodes), {0, 0});
  std::size_t i = 0;
  while (i < log.records.size()) {
    const int e = log.records[i].episode;
    std::size_t j = i;
    while (j < log.records.size() && log.records[j].episode == e) ++j;
    if (e < 0 || e >= log.num_episodes)
      throw UsageError("bundles: record references episode " + std::to_string(e) +
                       " outside the log header range");
    ranges[static_cast<std::size_t>(e)] = {i, j};
    i = j;
  }
  return ranges;
}

}  // namespace

std::vector<Bundle> make_bundles(const TrajectoryLog& log, int bundle_size, BundleMode mode) {
  const int E = log.num_episodes;
  if (bundle_size < 1) throw ConfigError("bundles: B must be at least 1");
  if (bundle_size > E)
    throw ConfigError("bundles: B=" + std::to_string(bundle_size) + " exceeds E=" +
                      std::to_string(E));
  const auto ranges = episode_ranges(log);
  std::vector<Bundle> bundles;
  const int M = (mode == BundleMode::disjoint) ? E / bundle_size : E - bundle_size + 1;
  bundles.reserve(static_cast<std::size_t>(M));
  for (int k = 0; k < M; ++k) {
    Bundle b;
    b.index = k;
    b.episode_lo = (mode == BundleMode::disjoint) ? k * bundle_size : k;
    b.episode_hi = b.episode_lo + bundle_size;
    for (int e = b.episode_lo; e < b.episode_hi; ++e) {
      const auto [lo, hi] = ranges[static_cast<std::size_t>(e)];
      b.records.insert(b.records.end(), log.records.begin() + static_cast<std::ptrdiff_t>(lo),
                       log.records.begin() + static_cast<std::ptrdiff_t>(hi));
    }
    bundles.push_back(std::move(b));
  }
  return bundles;
}

std::vector<Bundle> thin_for_independence(const TrajectoryLog& log, int bundle_size) {
  const int E = log.num_episodes;
  if (bundle_size < 1) throw ConfigError("bundles: B must be at least 1");
  if (2 * bundle_size > E)
    throw ConfigError("bundles: thinning needs 2B <= E, got B=" + std::to_string(bundle_size) +
                      ", E=" + std::to_string(E));
  const auto ranges = episode_ranges(log);
  // global record index before thinning decides which pairs survive
  std::vector<std::size_t> global_index(log.records.size());
  for (std::size_t i = 0; i < log.records.size(); ++i) global_index[i] = i;

  std::vector<Bundle> bundles;
  const int M = E / (2 * bundle_size);
  bundles.reserve(static_cast<std::size_t>(M));
  for (int k = 0; k < M; ++k) {
    Bundle b;
    b.index = k;
    b.episode_lo = k * 2 * bundle_size;
    b.episode_hi = b.episode_lo + 2 * bundle_size;
    for (int e = b.episode_lo; e < b.episode_hi; ++e) {
      const auto [lo, hi] = ranges[static_cast<std::size_t>(e)];
      for (std::size_t i = lo; i < hi; ++i)
        if (i % 2 == 0) b.records.push_back(log.records[i]);
    }
    bundles.push_back(std::move(b));
  }
  return bundles;
}

BundleDistribution empirical_distribution(const Bundle& bundle, int num_actions) {
  if (bundle.records.empty()) throw UsageError("empirical_distribution: bundle is empty");
  BundleDistribution dist;
  std::map<int, std::vector<int>> counts;
  for (const auto& r : bundle.records) {
    if (r.action < 0 || r.action >= num_actions)
      throw UsageError("empirical_distribution: action " + std::to_string(r.action) +
                       " outside arity " + std::to_string(num_actions));
    auto& c = counts[r.state];
    if (c.empty()) c.assign(static_cast<std::size_t>(num_actions), 0);
    ++c[static_cast<std::size_t>(r.action)];
    ++dist.total_pairs;
  }
  for (auto& [state, c] : counts) {
    ActionStats stats;
    stats.visits = 0;
    for (int v : c) stats.visits += v;
    stats.probs.resize(static_cast<std::size_t>(num_actions));
    for (int a = 0; a < num_actions; ++a)
      stats.probs[static_cast<std::size_t>(a)] =
          static_cast<double>(c[static_cast<std::size_t>(a)]) / stats.visits;
    dist.by_state.emplace(state, std::move(stats));
  }
  return dist;
}

std::vector<Bundle> bundles_for(const TrajectoryLog& log, const CloneParams& params) {
  if (params.independent) return thin_for_independence(log, params.bundle_size);
  return make_bundles(log, params.bundle_size, params.mode);
}

ClonedPolicySequence clone_policies(const TrajectoryLog& log, const NetSpec& spec,
                                    const CloneParams& params) {
  params.validate();
  NetSpec seeded = spec;
  seeded.init_seed = params.seed;
  seeded.validate();
  if (seeded.head != Head::softmax)
    throw ConfigError("clone: policy spec must have a softmax head");

  const auto bundles = bundles_for(log, params);
  const int num_actions = seeded.output_size();

  ClonedPolicySequence seq;
  seq.spec = seeded;
  seq.params = params;
  seq.policies.reserve(bundles.size());
  seq.final_losses.reserve(bundles.size());

  Network net(seeded);  // bundle 1 starts from the fresh seeded net
  NetScratch scratch;
  std::vector<double> grad(static_cast<std::size_t>(net.param_count()));
  for (const auto& bundle : bundles) {
    const BundleDistribution dist = empirical_distribution(bundle, num_actions);
    double loss = 0.0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
      std::memset(grad.data(), 0, grad.size() * sizeof(double));
      loss = 0.0;
      for (const auto& [state, stats] : dist.by_state)
        loss += net.accumulate_mse_grad_state(state, stats.probs, scratch, grad);
      if (!std::isfinite(loss))
        throw NumericError("clone: non-finite loss in bundle " +
                           std::to_string(bundle.index + 1));
      net.apply_gradient(grad, -params.learning_rate);
    }
    seq.final_losses.push_back(loss);
    seq.policies.push_back(net);  // copy; next bundle warm-starts from it
  }
  return seq;
}

}  // namespace bbcirl
