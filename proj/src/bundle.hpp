#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "net.hpp"
#include "trajectory.hpp"

namespace bbcirl {

enum class BundleMode { disjoint, sliding };

struct Bundle {
  int index = 0;        // 0-based position in the bundle sequence
  int episode_lo = 0;   // inclusive
  int episode_hi = 0;   // exclusive
  std::vector<StepRecord> records;
};

// Disjoint: M = floor(E/B), trailing episodes discarded. Sliding: M = E-B+1,
// stride one episode.
std::vector<Bundle> make_bundles(const TrajectoryLog& log, int bundle_size, BundleMode mode);

// Independence thinning: bundles span 2B episodes and keep only records at
// even global index, so each bundle retains as many state-action pairs as a
// disjoint bundle of size B.
std::vector<Bundle> thin_for_independence(const TrajectoryLog& log, int bundle_size);

struct ActionStats {
  std::vector<double> probs;  // empirical action distribution at this state
  int visits = 0;
};

struct BundleDistribution {
  std::map<int, ActionStats> by_state;  // visited states only
  int total_pairs = 0;
};

BundleDistribution empirical_distribution(const Bundle& bundle, int num_actions = kNumActions);

struct CloneParams {
  int bundle_size = 15;
  BundleMode mode = BundleMode::disjoint;
  bool independent = false;  // use the thinning sampler
  double learning_rate = 0.00075;
  int epochs = 2000;
  std::uint64_t seed = 2;
  void validate() const;
};

struct ClonedPolicySequence {
  NetSpec spec;
  CloneParams params;
  std::vector<Network> policies;  // one per bundle, in bundle order
  std::vector<double> final_losses;

  int size() const { return static_cast<int>(policies.size()); }
};

// Algorithm: one policy per bundle, warm-started from the previous bundle's
// policy, trained by full-batch gradient descent on
//   loss(psi_k) = sum over visited states of mean_a (pi(s)_a - rho_k(s)_a)^2.
ClonedPolicySequence clone_policies(const TrajectoryLog& log, const NetSpec& spec,
                                    const CloneParams& params);

// Rebuilds the bundling a ClonedPolicySequence was trained on.
std::vector<Bundle> bundles_for(const TrajectoryLog& log, const CloneParams& params);

}  // namespace bbcirl
