#include "bai/estimators.hpp"

namespace bai {

void iw_update(ImportanceWeightedTally& tally, ArmIndex pulled, double reward, double prob) {
  if (!(reward >= 0.0 && reward <= 1.0)) throw DomainError("iw_update: reward outside [0,1]");
  if (pulled < 1 || pulled > tally.num_arms()) throw DomainError("iw_update: arm out of range");
  if (!(prob > 0.0)) throw DomainError("iw_update: pull probability must be positive");
  tally.totals[static_cast<size_t>(pulled) - 1] += reward / prob;
  ++tally.rounds_seen;
}

void iw_update(ImportanceWeightedTally& tally, ArmIndex pulled, double reward,
               const ProbabilityVector& probs) {
  if (probs.num_arms() != tally.num_arms()) throw DomainError("iw_update: size mismatch");
  iw_update(tally, pulled, reward, probs[pulled]);
}

void EmpiricalMeanTally::record(ArmIndex pulled, double reward) {
  if (!(reward >= 0.0 && reward <= 1.0)) throw DomainError("record: reward outside [0,1]");
  if (pulled < 1 || pulled > num_arms()) throw DomainError("record: arm out of range");
  reward_sums[static_cast<size_t>(pulled) - 1] += reward;
  ++pull_counts[static_cast<size_t>(pulled) - 1];
  ++rounds_seen;
}

double empirical_estimate(const EmpiricalMeanTally& tally, ArmIndex k, long long n) {
  if (k < 1 || k > tally.num_arms()) throw DomainError("empirical_estimate: arm out of range");
  const long long c = tally.pull_counts[static_cast<size_t>(k) - 1];
  if (c == 0) throw NeverPulled("empirical_estimate: arm was never pulled");
  return static_cast<double>(n) * tally.reward_sums[static_cast<size_t>(k) - 1] /
         static_cast<double>(c);
}

double empirical_mean(const EmpiricalMeanTally& tally, ArmIndex k) {
  if (k < 1 || k > tally.num_arms()) throw DomainError("empirical_mean: arm out of range");
  const long long c = tally.pull_counts[static_cast<size_t>(k) - 1];
  if (c == 0) throw NeverPulled("empirical_mean: arm was never pulled");
  return tally.reward_sums[static_cast<size_t>(k) - 1] / static_cast<double>(c);
}

}  // namespace bai
