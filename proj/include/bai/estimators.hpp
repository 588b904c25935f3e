#pragma once
/*
The two cumulative-gain estimators:

  G-tilde (importance-weighted)  g~_{k,t} = g_{k,t} 1{I_t=k} / p_{k,t},
  unbiased under any positive sampling distribution; used by Rule and P1.

  G-hat (empirical mean)         the per-pull average, optionally scaled by n;
  used by the elimination baselines (SR, SH) and static uniform.

Tallies are single-writer state owned by one learner instance for one episode.
*/

#include <vector>

#include "bai/core.hpp"

namespace bai {

struct ImportanceWeightedTally {
  std::vector<double> totals;  // G~_{k,t}; unpulled arms stay at 0
  long long rounds_seen = 0;

  explicit ImportanceWeightedTally(int K) : totals(static_cast<size_t>(K), 0.0) {}
  int num_arms() const { return static_cast<int>(totals.size()); }
};

/// Adds reward / prob to the pulled arm's total. `prob` must be the same
/// probability the sampler actually used this round; anything else silently
/// breaks unbiasedness, which is why the learner loop owns both.
void iw_update(ImportanceWeightedTally& tally, ArmIndex pulled, double reward, double prob);

/// Vector form matching the sampling distribution of the round.
void iw_update(ImportanceWeightedTally& tally, ArmIndex pulled, double reward,
               const ProbabilityVector& probs);

struct EmpiricalMeanTally {
  std::vector<double> reward_sums;
  std::vector<long long> pull_counts;  // T_k(t)
  long long rounds_seen = 0;

  explicit EmpiricalMeanTally(int K)
      : reward_sums(static_cast<size_t>(K), 0.0), pull_counts(static_cast<size_t>(K), 0) {}
  int num_arms() const { return static_cast<int>(reward_sums.size()); }

  void record(ArmIndex pulled, double reward);
};

/// The n-scaled form G^_k = n * reward_sums[k] / pull_counts[k].
/// Throws NeverPulled when the arm has no pulls.
double empirical_estimate(const EmpiricalMeanTally& tally, ArmIndex k, long long n);

/// Plain per-pull mean; argmax-equivalent to the scaled form at equal counts.
double empirical_mean(const EmpiricalMeanTally& tally, ArmIndex k);

}  // namespace bai
