#include "reward.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "rng.hpp"

namespace bbcirl {

void BetaParams::validate() const {
  if (gamma <= 0.0 || gamma > 1.0) throw ConfigError("beta: gamma must be in (0,1]");
  if (batch_size < 1) throw ConfigError("beta: batch size must be at least 1");
  if (episodes < 1) throw ConfigError("beta: training episodes must be at least 1");
  if (learning_rate <= 0.0) throw ConfigError("beta: learning rate must be positive");
}

std::vector<TrainingSample> eligible_samples(const TrajectoryLog& log,
                                             const ClonedPolicySequence& policies) {
  if (policies.size() < 2)
    throw UsageError("reward training needs at least 2 cloned policies; the last bundle "
                     "has no successor");
  const auto bundles = bundles_for(log, policies.params);
  if (static_cast<int>(bundles.size()) != policies.size())
    throw UsageError("trajectory log does not match the cloned sequence's bundling");
  std::vector<TrainingSample> samples;
  for (const auto& b : bundles) {
    if (b.index + 1 >= policies.size()) break;
    for (const auto& r : b.records)
      samples.push_back(TrainingSample{r.state, r.action, r.next_state, r.t, b.index});
  }
  return samples;
}

namespace {

std::vector<double> last_layer_delta(const ClonedPolicySequence& policies, int k) {
  const auto cur = policies.policies[static_cast<std::size_t>(k)].last_layer();
  const auto next = policies.policies[static_cast<std::size_t>(k + 1)].last_layer();
  std::vector<double> delta(cur.size());
  for (std::size_t i = 0; i < cur.size(); ++i) delta[i] = next[i] - cur[i];
  return delta;
}

}  // namespace

std::vector<double> beta_residual(const TrainingSample& sample, const Network& beta,
                                  const ClonedPolicySequence& policies, double gamma,
                                  GradMode mode) {
  if (gamma <= 0.0 || gamma > 1.0) throw UsageError("beta_residual: gamma must be in (0,1]");
  if (sample.bundle < 0 || sample.bundle + 1 >= policies.size())
    throw UsageError("beta_residual: bundle " + std::to_string(sample.bundle + 1) +
                     " has no successor policy");
  const Network& pol = policies.policies[static_cast<std::size_t>(sample.bundle)];
  NetScratch scratch;
  std::vector<double> score(static_cast<std::size_t>(pol.last_layer_size()));
  pol.last_layer_score_state(sample.state, sample.action, mode, scratch, score);
  const double beta_value = beta.scalar_forward_state(sample.next_state);
  const double scale = beta_value * std::pow(gamma, sample.t);
  const auto delta = last_layer_delta(policies, sample.bundle);
  std::vector<double> residual(score.size());
  for (std::size_t i = 0; i < score.size(); ++i)
    residual[i] = scale * score[i] - delta[i];
  return residual;
}

BetaResult train_beta(const TrajectoryLog& log, const ClonedPolicySequence& policies,
                      const NetSpec& beta_spec, const BetaParams& params) {
  params.validate();
  NetSpec seeded = beta_spec;
  seeded.init_seed = params.seed;
  seeded.validate();
  if (seeded.head != Head::linear)
    throw ConfigError("beta: reward net needs a scalar linear head");

  const auto samples = eligible_samples(log, policies);
  if (samples.empty()) throw UsageError("beta: no eligible transitions to sample");

  const int M = policies.size();
  const int score_len = policies.policies.front().last_layer_size();
  std::vector<std::vector<double>> deltas;
  deltas.reserve(static_cast<std::size_t>(M - 1));
  for (int k = 0; k + 1 < M; ++k) deltas.push_back(last_layer_delta(policies, k));

  // gamma^t lookup over the timestep range present in the samples
  int max_t = 0;
  for (const auto& smp : samples) max_t = std::max(max_t, smp.t);
  std::vector<double> gamma_pow(static_cast<std::size_t>(max_t) + 1, 1.0);
  for (std::size_t t = 1; t < gamma_pow.size(); ++t)
    gamma_pow[t] = gamma_pow[t - 1] * params.gamma;

  Network beta(seeded);
  Rng rng(params.seed);
  NetScratch pol_scratch, beta_scratch;
  std::vector<double> score(static_cast<std::size_t>(score_len));
  std::vector<double> grad(static_cast<std::size_t>(beta.param_count()));
  std::vector<double> losses;
  losses.reserve(static_cast<std::size_t>(params.episodes));

  for (int f = 0; f < params.episodes; ++f) {
    std::memset(grad.data(), 0, grad.size() * sizeof(double));
    double loss = 0.0;
    for (int z = 0; z < params.batch_size; ++z) {
      const TrainingSample& smp = samples[rng.index(samples.size())];
      const Network& pol = policies.policies[static_cast<std::size_t>(smp.bundle)];
      pol.last_layer_score_state(smp.state, smp.action, params.gradient_mode, pol_scratch,
                                 score);
      const double g_t = gamma_pow[static_cast<std::size_t>(smp.t)];
      const double beta_value = beta.forward_state(smp.next_state, beta_scratch)[0];
      const auto& delta = deltas[static_cast<std::size_t>(smp.bundle)];
      // squared norm of (beta*g_t*score - delta) plus its beta-output gradient
      double sq = 0.0;
      double dot = 0.0;
      for (int i = 0; i < score_len; ++i) {
        const double r = beta_value * g_t * score[static_cast<std::size_t>(i)] -
                         delta[static_cast<std::size_t>(i)];
        sq += r * r;
        dot += r * score[static_cast<std::size_t>(i)];
      }
      loss += sq;
      beta.accumulate_scalar_grad_state(smp.next_state, 2.0 * g_t * dot, beta_scratch, grad);
    }
    if (!std::isfinite(loss))
      throw NumericError("beta: non-finite loss in training episode " + std::to_string(f));
    beta.apply_gradient(grad, -params.learning_rate);
    losses.push_back(loss);
  }
  return BetaResult{std::move(beta), std::move(losses)};
}

std::vector<double> predict_rewards(const Network& beta, int num_states) {
  if (beta.input_size() != num_states)
    throw UsageError("predict_rewards: beta input size does not match state count");
  std::vector<double> out(static_cast<std::size_t>(num_states));
  for (int s = 0; s < num_states; ++s) out[static_cast<std::size_t>(s)] = beta.scalar_forward_state(s);
  return out;
}

}  // namespace bbcirl
