#include "theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bbcirl {

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size() || p.empty())
    throw UsageError("tv_distance: distributions must share a non-empty support");
  constexpr double kTol = 1e-6;
  double sum_p = 0.0, sum_q = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < -kTol || q[i] < -kTol || !std::isfinite(p[i]) || !std::isfinite(q[i]))
      throw UsageError("tv_distance: negative or non-finite probability entry");
    sum_p += p[i];
    sum_q += q[i];
    l1 += std::abs(p[i] - q[i]);
  }
  if (std::abs(sum_p - 1.0) > kTol || std::abs(sum_q - 1.0) > kTol)
    throw UsageError("tv_distance: inputs are not normalized distributions");
  return 0.5 * l1;
}

double estimate_epsilon(const ClonedPolicySequence& policies, int num_states) {
  if (policies.size() < 2)
    throw UsageError("estimate_epsilon: need at least two policies");
  double eps = 0.0;
  NetScratch a, b;
  std::vector<double> pa, pb;
  for (int k = 0; k + 1 < policies.size(); ++k) {
    const Network& cur = policies.policies[static_cast<std::size_t>(k)];
    const Network& next = policies.policies[static_cast<std::size_t>(k + 1)];
    for (int s = 0; s < num_states; ++s) {
      auto da = cur.forward_state(s, a);
      auto db = next.forward_state(s, b);
      double l1 = 0.0;
      for (std::size_t i = 0; i < da.size(); ++i) l1 += std::abs(da[i] - db[i]);
      eps = std::max(eps, 0.5 * l1);
    }
  }
  return eps;
}

void BoundInputs::validate() const {
  if (bundle_size < 1) throw UsageError("bound: B must be at least 1");
  if (samples_per_trajectory < 1) throw UsageError("bound: T must be at least 1");
  if (epsilon < 0.0) throw UsageError("bound: epsilon must be non-negative");
  if (gamma <= 0.0 || gamma >= 1.0)
    throw UsageError("bound: gamma must lie strictly inside (0,1); the 1/(1-gamma) "
                     "factor is undefined otherwise");
  if (delta <= 0.0 || delta >= 1.0) throw UsageError("bound: delta must lie in (0,1)");
  if (policy_class_size <= 1.0) throw UsageError("bound: policy class size must exceed 1");
}

BoundReport bundle_bound(const BoundInputs& in) {
  in.validate();
  const double B = in.bundle_size;
  const double T = in.samples_per_trajectory;
  BoundReport r;
  r.drift_term = 4.0 * in.gamma * (B - 1.0) * in.epsilon / (1.0 - in.gamma);
  r.sampling_term = 4.0 * std::log(in.policy_class_size / in.delta) / (B * T);
  r.bias_term = 2.0 * in.epsilon * in.epsilon * (B - 1.0) * (B - 1.0);
  r.total = r.drift_term + r.sampling_term + r.bias_term;
  r.standard_bc =
      2.0 * std::log(in.policy_class_size / (2.0 * in.delta - in.delta * in.delta)) / T;
  return r;
}

std::pair<double, double> lemma_pair_bounds(int bundle_size, double epsilon, double gamma) {
  if (bundle_size < 1) throw UsageError("lemma bounds: B must be at least 1");
  if (gamma >= 1.0 || gamma <= 0.0)
    throw UsageError("lemma bounds: gamma must lie strictly inside (0,1)");
  const double policy_tv = (bundle_size - 1.0) * epsilon;
  const double visitation_l1 = 2.0 * gamma * policy_tv / (1.0 - gamma);
  return {policy_tv, visitation_l1};
}

OptimalBundle optimal_bundle_size(const BoundInputs& base, int max_size) {
  if (max_size < 1) throw UsageError("optimal bundle size: max size must be at least 1");
  OptimalBundle best;
  for (int b = 1; b <= max_size; ++b) {
    BoundInputs in = base;
    in.bundle_size = b;
    const BoundReport r = bundle_bound(in);
    if (b == 1 || r.total < best.report.total) {
      best.best_size = b;
      best.report = r;
    }
  }
  best.beats_standard = best.report.total < best.report.standard_bc;
  return best;
}

}  // namespace bbcirl
