#include "forward.hpp"

namespace bbcirl {

void ForwardParams::validate() const {
  if (episodes < 1) throw ConfigError("forward: episodes must be positive");
  if (alpha <= 0.0) throw ConfigError("forward: alpha must be positive");
  if (gamma <= 0.0 || gamma > 1.0) throw ConfigError("forward: gamma must be in (0,1]");
}

EpisodeResult run_episode(const Environment& env, const Network& policy, Rng& rng,
                          int episode_index) {
  if (policy.spec().head != Head::softmax)
    throw UsageError("run_episode: policy must have a softmax head");
  if (policy.input_size() != env.num_states() || policy.output_size() != kNumActions)
    throw UsageError("run_episode: policy shape does not match environment");
  EpisodeResult ep;
  ep.steps.reserve(static_cast<std::size_t>(env.horizon()));
  ep.rewards.reserve(static_cast<std::size_t>(env.horizon()));
  NetScratch scratch;
  int state = env.start();
  for (int t = 0; t < env.horizon(); ++t) {
    auto probs = policy.forward_state(state, scratch);
    const int action = rng.categorical(probs);
    const StepOutcome outcome = env.step(state, action);
    ep.steps.push_back(StepRecord{episode_index, t, state, action, outcome.next_state});
    ep.rewards.push_back(outcome.reward);
    ep.undiscounted_return += outcome.reward;
    if (ep.first_goal_t < 0 && outcome.done) ep.first_goal_t = t;
    state = outcome.next_state;
  }
  return ep;
}

EpisodeResult run_episode(const Environment& env, const Network& policy,
                          std::uint64_t rng_seed, int episode_index) {
  Rng rng(rng_seed);
  return run_episode(env, policy, rng, episode_index);
}

ForwardResult reinforce_train(const Environment& env, const NetSpec& spec,
                              const ForwardParams& params,
                              const std::vector<double>* reward_override) {
  params.validate();
  if (reward_override &&
      static_cast<int>(reward_override->size()) != env.num_states())
    throw UsageError("reinforce_train: reward override must cover every state");

  Network policy(spec);
  if (policy.input_size() != env.num_states() || policy.output_size() != kNumActions ||
      policy.spec().head != Head::softmax)
    throw ConfigError("reinforce_train: policy spec must map one-hot states to 3 actions");

  TrajectoryLog log;
  log.num_episodes = params.episodes;
  log.horizon = env.horizon();
  log.env_hash = env.fingerprint();
  log.records.reserve(static_cast<std::size_t>(params.episodes) * env.horizon());

  std::vector<double> returns;
  returns.reserve(static_cast<std::size_t>(params.episodes));

  Rng rng(params.seed);
  NetScratch scratch;
  for (int e = 0; e < params.episodes; ++e) {
    EpisodeResult ep = run_episode(env, policy, rng, e);
    // learner-side rewards: the override replaces what the agent optimizes
    double ep_return = 0.0;
    double discount = 1.0;
    for (std::size_t i = 0; i < ep.steps.size(); ++i) {
      const StepRecord& r = ep.steps[i];
      const double reward = reward_override
                                ? (*reward_override)[static_cast<std::size_t>(r.next_state)]
                                : ep.rewards[i];
      ep_return += reward;
      policy.apply_score_step_state(r.state, r.action, params.alpha * discount * reward,
                                    scratch);
      discount *= params.gamma;
      log.records.push_back(r);
    }
    returns.push_back(ep_return);
    if (!policy.params_finite())
      throw NumericError("reinforce_train: non-finite parameters after episode " +
                         std::to_string(e));
  }
  return ForwardResult{std::move(policy), std::move(log), std::move(returns)};
}

}  // namespace bbcirl
