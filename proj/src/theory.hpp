#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bundle.hpp"

namespace bbcirl {

// Total variation distance between finite distributions: half the L1 norm,
// which equals the sup over events.
double tv_distance(std::span<const double> p, std::span<const double> q);

// Tightest epsilon consistent with the cloned sequence: max over consecutive
// policy pairs and over all states of the TV distance between their action
// distributions.
double estimate_epsilon(const ClonedPolicySequence& policies, int num_states);

struct BoundInputs {
  int bundle_size = 15;            // B
  int samples_per_trajectory = 15; // T
  double epsilon = 0.0;
  double gamma = 0.999;
  double delta = 0.05;
  double policy_class_size = 1e8;  // |Pi|
  void validate() const;
};

struct BoundReport {
  double drift_term = 0.0;     // 4*gamma*(B-1)*eps / (1-gamma)
  double sampling_term = 0.0;  // 4*ln(|Pi|/delta) / (B*T)
  double bias_term = 0.0;      // 2*eps^2*(B-1)^2
  double total = 0.0;
  double standard_bc = 0.0;    // 2*ln(|Pi|/(2*delta-delta^2)) / T, same (1-delta)^2 level
};

BoundReport bundle_bound(const BoundInputs& inputs);

// ((B-1)*eps, 2*gamma*(B-1)*eps/(1-gamma)): the in-bundle policy TV bound and
// the visitation L1 bound it implies.
std::pair<double, double> lemma_pair_bounds(int bundle_size, double epsilon, double gamma);

struct OptimalBundle {
  int best_size = 1;
  BoundReport report;
  bool beats_standard = false;  // strict improvement over the matched-probability standard bound
};

// Brute-force minimization of the bundle bound over B in [1, max_size].
OptimalBundle optimal_bundle_size(const BoundInputs& base, int max_size);

}  // namespace bbcirl
