#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bbcirl {

NormalizedGrid normalize_grid(std::span<const double> raw) {
  if (raw.empty()) throw UsageError("normalize_grid: empty input");
  NormalizedGrid out;
  out.values.resize(raw.size());
  double lo = raw[0], hi = raw[0];
  for (double v : raw) {
    if (!std::isfinite(v)) throw UsageError("normalize_grid: non-finite input value");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.source_min = lo;
  out.source_max = hi;
  if (hi - lo <= 0.0) {
    out.constant_input = true;
    std::fill(out.values.begin(), out.values.end(), 0.5);
    return out;
  }
  for (std::size_t i = 0; i < raw.size(); ++i) out.values[i] = (raw[i] - lo) / (hi - lo);
  return out;
}

EvalResult evaluate_policy(const Network& policy, const Environment& env, int n_episodes,
                           std::uint64_t seed) {
  if (n_episodes < 2) throw UsageError("evaluate_policy: need at least 2 episodes");
  Rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (int e = 0; e < n_episodes; ++e) {
    const EpisodeResult ep = run_episode(env, policy, rng, e);
    sum += ep.undiscounted_return;
    sumsq += ep.undiscounted_return * ep.undiscounted_return;
  }
  EvalResult r;
  r.episodes = n_episodes;
  r.seed = seed;
  r.mean = sum / n_episodes;
  const double var = (sumsq - n_episodes * r.mean * r.mean) / (n_episodes - 1);
  r.stddev = std::sqrt(std::max(0.0, var));
  return r;
}

GreedyRollout greedy_rollout(const Network& policy, const Environment& env) {
  GreedyRollout out;
  NetScratch scratch;
  int state = env.start();
  out.states.push_back(state);
  for (int t = 0; t < env.horizon(); ++t) {
    auto probs = policy.forward_state(state, scratch);
    int best = 0;
    for (int a = 1; a < static_cast<int>(probs.size()); ++a)
      if (probs[a] > probs[best]) best = a;
    const StepOutcome outcome = env.step(state, best);
    state = outcome.next_state;
    out.states.push_back(state);
    if (outcome.done && !out.reached_goal) {
      out.reached_goal = true;
      out.steps_to_goal = t + 1;
    }
  }
  return out;
}

RetrainResult retrain_from_beta(const Network& beta, const Environment& env,
                                const NetSpec& policy_spec, const ForwardParams& train,
                                double reward_scale, int eval_episodes,
                                std::uint64_t eval_seed) {
  std::vector<double> rewards = predict_rewards(beta, env.num_states());
  double scale = reward_scale;
  if (scale <= 0.0) {
    double peak = 0.0;
    for (double v : rewards) peak = std::max(peak, std::abs(v));
    scale = (peak > 0.0) ? env.config().goal_reward / peak : 1.0;
  }
  for (double& v : rewards) v *= scale;

  ForwardResult trained = reinforce_train(env, policy_spec, train, &rewards);
  RetrainResult out{std::move(trained.policy), {}, std::move(trained.returns), {}, scale};
  out.true_eval = evaluate_policy(out.policy, env, eval_episodes, eval_seed);
  out.greedy = greedy_rollout(out.policy, env);
  return out;
}

std::vector<double> visitation_percentages(const TrajectoryLog& log, int num_states) {
  std::vector<double> pct(static_cast<std::size_t>(num_states), 0.0);
  if (log.records.empty()) return pct;
  for (const auto& r : log.records) {
    if (r.state < 0 || r.state >= num_states)
      throw UsageError("visitation: state outside grid: " + std::to_string(r.state));
    pct[static_cast<std::size_t>(r.state)] += 1.0;
  }
  const double total = static_cast<double>(log.records.size());
  for (double& v : pct) v = 100.0 * v / total;
  return pct;
}

ConfidenceBands confidence_bands(const TrajectoryLog& log,
                                 const ClonedPolicySequence& policies,
                                 const NetSpec& beta_spec, const BetaParams& base_params,
                                 std::span<const std::uint64_t> seeds, int num_states) {
  const int runs = static_cast<int>(seeds.size());
  if (runs < 2) throw UsageError("confidence_bands: need at least 2 seeds");
  std::vector<std::vector<double>> estimates;
  estimates.reserve(static_cast<std::size_t>(runs));
  for (std::uint64_t seed : seeds) {
    BetaParams p = base_params;
    p.seed = seed;
    const BetaResult res = train_beta(log, policies, beta_spec, p);
    estimates.push_back(normalize_grid(predict_rewards(res.beta, num_states)).values);
  }
  ConfidenceBands bands;
  bands.runs = runs;
  bands.mean.assign(static_cast<std::size_t>(num_states), 0.0);
  bands.lower.assign(static_cast<std::size_t>(num_states), 0.0);
  bands.upper.assign(static_cast<std::size_t>(num_states), 0.0);
  for (int s = 0; s < num_states; ++s) {
    double sum = 0.0, sumsq = 0.0;
    for (const auto& est : estimates) {
      sum += est[static_cast<std::size_t>(s)];
      sumsq += est[static_cast<std::size_t>(s)] * est[static_cast<std::size_t>(s)];
    }
    const double mean = sum / runs;
    const double var = (sumsq - runs * mean * mean) / (runs - 1);
    const double sd = std::sqrt(std::max(0.0, var));
    bands.mean[static_cast<std::size_t>(s)] = mean;
    bands.lower[static_cast<std::size_t>(s)] = mean - 1.96 * sd;
    bands.upper[static_cast<std::size_t>(s)] = mean + 1.96 * sd;
  }
  bands.visitation_pct = visitation_percentages(log, num_states);
  return bands;
}

ClonedPolicySequence truncate_bundles(const ClonedPolicySequence& policies, int first_k) {
  if (first_k < 1 || first_k > policies.size())
    throw UsageError("truncate_bundles: first_k must lie in [1," +
                     std::to_string(policies.size()) + "], got " + std::to_string(first_k));
  ClonedPolicySequence out;
  out.spec = policies.spec;
  out.params = policies.params;
  out.policies.assign(policies.policies.begin(), policies.policies.begin() + first_k);
  if (static_cast<int>(policies.final_losses.size()) >= first_k)
    out.final_losses.assign(policies.final_losses.begin(),
                            policies.final_losses.begin() + first_k);
  return out;
}

NormSeries last_layer_norm_series(const ClonedPolicySequence& policies) {
  NormSeries out;
  out.norms.reserve(static_cast<std::size_t>(policies.size()));
  for (const auto& net : policies.policies) {
    double sq = 0.0;
    for (double v : net.last_layer()) sq += v * v;
    out.norms.push_back(std::sqrt(sq));
  }
  for (std::size_t k = 0; k + 1 < out.norms.size(); ++k)
    out.diffs.push_back(std::abs(out.norms[k + 1] - out.norms[k]));
  if (!out.diffs.empty())
    out.mean_diff = std::accumulate(out.diffs.begin(), out.diffs.end(), 0.0) /
                    static_cast<double>(out.diffs.size());
  return out;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw UsageError("spearman: need two equally sized series");
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace bbcirl
