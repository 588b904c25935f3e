#pragma once
/*
Fixed-budget learners behind one interface: pick a sampling distribution each
round, observe one reward, recommend at the end.

  Rule          uniform random sampling, recommend argmax G~.
  P1            rank arms by G~ descending, sample rank r with probability
                1/(r * barlog K) (a Zipf(1) distribution over ranks).
  MixedP1Rule   the per-round mixture 0.5 * uniform + 0.5 * P1; the effective
                mixture probability is what enters the importance weights.
  SR            Successive Rejects phase schedule, eliminate worst empirical
                mean each phase.
  SH            Sequential Halving, keep the top half each phase.
  StaticUniform round-robin n/K pulls per arm (remainder to the lowest
                indices), recommend argmax empirical mean.

Rule, P1 and the mixture are anytime: their per-round policies never read n.
SR/SH/StaticUniform follow deterministic schedules that consume exactly n
pulls. All ties break by ascending arm index.
*/

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bai/core.hpp"
#include "bai/estimators.hpp"

namespace bai {

struct RewardSource;  // environments.hpp

enum class LearnerKind : int { Rule, P1, MixedP1Rule, SR, SH, StaticUniform };

const char* learner_name(LearnerKind kind);
std::optional<LearnerKind> parse_learner(std::string_view name);

/// Substream salts: one episode stream splits into a learner stream (the
/// learner's own coin flips) and a source stream (the reward tensor), so that
/// replaying a pre-drawn tensor reproduces the exact same trajectory.
inline constexpr std::uint64_t kLearnerStreamSalt = 0x4C4541524E4552ull;
inline constexpr std::uint64_t kSourceStreamSalt = 0x534F55524345ull;

struct PullRecord {
  long long t = 0;
  ArmIndex arm = 0;
  double prob_used = 1.0;  // 1.0 for deterministic schedules
  double reward = 0.0;

  friend bool operator==(const PullRecord&, const PullRecord&) = default;
};

struct EpisodeLog {
  std::vector<PullRecord> pulls;
  ArmIndex recommendation = 0;

  friend bool operator==(const EpisodeLog&, const EpisodeLog&) = default;
};

// ---------------------------------------------------------------------------
// Per-round policies (exposed for property tests; the episode drivers below
// sample through equivalent rank-based machinery).

/// The constant uniform vector 1/K, for any round.
ProbabilityVector rule_policy(int K);

/// p_k = 1 / (rank_k * barlog K) with ranks by decreasing G~, ties by index.
ProbabilityVector p1_policy(const ImportanceWeightedTally& tally);

/// 0.5 * rule + 0.5 * p1, used both for sampling and for importance weights.
ProbabilityVector mixed_policy(const ImportanceWeightedTally& tally);

/// argmax of G~, ties by ascending index.
ArmIndex recommend_iw(const ImportanceWeightedTally& tally);

// ---------------------------------------------------------------------------
// Deterministic schedules (exposed for the exhaustive schedule checks).

/// logbar(K) = 1/2 + sum_{i=2..K} 1/i, the Successive Rejects normalizer.
double sr_logbar(int K);

struct SrSchedule {
  /// cumulative per-arm pull targets n_k for k = 0..K-1 (n_0 = 0); phase k
  /// pulls every active arm n_k - n_{k-1} times and then eliminates one.
  std::vector<long long> cumulative_targets;
  /// rounds left over by the ceil schedule; the final phase absorbs them so
  /// the total is exactly n (odd round to the lower-indexed finalist).
  long long final_leftover = 0;
  long long total = 0;
};
/// Throws BudgetTooSmall when n < K(K+1)/2.
SrSchedule sr_schedule(int K, long long n);

struct ShSchedule {
  int phases = 0;                      // ceil(log2 K)
  std::vector<int> active_counts;      // |A_j| per phase; halves to 2
  std::vector<long long> per_arm;      // floor(n / (|A_j| * phases))
  long long final_extra_per_arm = 0;   // leftover rounds folded into the last phase
  int final_extra_odd = 0;             // one more pull for the lowest-indexed finalists
  long long total = 0;
};
/// Throws BudgetTooSmall when n < K * ceil(log2 K).
ShSchedule sh_schedule(int K, long long n);

/// Pull counts of the static uniform allocation: n/K each, remainder to the
/// lowest-indexed arms.
std::vector<long long> static_uniform_counts(int K, long long n);

// ---------------------------------------------------------------------------
// Episode drivers. A fixed (kind, source, n, stream) determines the episode
// byte for byte; the logged and unlogged variants share one code path.

ArmIndex run_episode_rec(LearnerKind kind, const RewardSource& source, long long n,
                         const RngStream& stream);

EpisodeLog run_episode_logged(LearnerKind kind, const RewardSource& source, long long n,
                              const RngStream& stream);

/// Per-arm pull counts restricted to rounds [1, window_end].
std::vector<long long> pull_counts_through(LearnerKind kind, const RewardSource& source,
                                           long long n, long long window_end,
                                           const RngStream& stream);

}  // namespace bai
