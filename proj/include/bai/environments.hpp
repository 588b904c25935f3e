#pragma once
/*
Reward sources: Bernoulli instances (including the eight benchmark presets
A..H), the adversarial constructions used by the lower-bound arguments, and
fixed reward matrices loaded from CSV.

Every source is an oblivious process: given a stream, the full K x n reward
tensor is a deterministic function of (source, stream), independent of the
learner's actions. Rewards are generated per-cell from a counter-based
generator keyed by (stream, arm, round), so on-demand generation and a
pre-drawn tensor agree cell for cell and no materialization is required.
*/

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bai/core.hpp"

namespace bai {

enum class LearnerKind : int;  // defined in learners.hpp

enum class SourceKind {
  Bernoulli,
  SwitchAdversary,
  TwoPhaseAdversary,
  DeceptionAdversary,
  FixedMatrix,
};

/// Interpretation of preset E: the Table-1-consistent gaps 0.025*(i-1), or the
/// paper's printed formula mu_i = 0.5 - 0.025*i (which contradicts its own
/// complexity table). Both are available; neither is silently corrected.
enum class EMode { Table, Printed };

/// Preset C gap arithmetic: exact powers of 0.37, or gaps pre-rounded to three
/// decimals (0.137, 0.051, 0.019), which is what the published table used.
enum class CGaps { Exact, Rounded3 };

struct RewardSource {
  SourceKind kind = SourceKind::Bernoulli;
  int K = 0;
  long long n = 0;

  std::vector<double> base_means;  // per-arm means of the stochastic segment
  ArmIndex bar_k = 0;              // adversary target arm
  long long switch_round = 0;      // SwitchAdversary: bar_k at base mean for t <= switch_round
  double boosted_mean = 0.0;       // SwitchAdversary: bar_k mean after the switch
  long long half_round = 0;        // TwoPhaseAdversary: stochastic segment is t <= half_round
  double tail_gain = 0.0;          // TwoPhaseAdversary: deterministic gain of bar_k afterwards
  long long blackout_until = 0;    // DeceptionAdversary: rewards are 0 for t <= blackout_until
  std::vector<std::vector<double>> matrix;  // FixedMatrix: K rows x n columns

  int num_arms() const { return K; }
  long long horizon() const { return n; }
  bool is_stochastic() const { return kind == SourceKind::Bernoulli; }

  /// E[g_{k,t}] (for deterministic cells, the value itself).
  double mean_at(ArmIndex k, long long t) const;

  /// g_{k,t} for the tensor identified by `key` (see RngStream::key()).
  double reward(std::uint64_t key, ArmIndex k, long long t) const;

  /// The full pre-drawn tensor for this stream; identical, cell for cell, to
  /// on-demand reward() calls with stream.key().
  std::vector<std::vector<double>> tensor(const RngStream& stream) const;

  /// Row sums of the realized tensor, without materializing it.
  std::vector<double> realized_gains(std::uint64_t key) const;

  /// sum_t E[g_{k,t}] in closed form.
  std::vector<double> expected_gains() const;

  /// The analytic best arm for stochastic sources (unique argmax of means);
  /// nullopt for adversarial kinds, where the ground truth is the hindsight
  /// best arm of the realized tensor, and for tied stochastic means.
  std::optional<ArmIndex> known_best() const;
};

/// Arm means of benchmark setup 'A'..'H'. The best arm always has mean 1/2.
std::vector<double> preset(char setup, EMode e_mode = EMode::Table, CGaps c_gaps = CGaps::Exact);

RewardSource bernoulli_source(const std::vector<double>& means, long long n);

/// The STO/ADV pair behind the best-of-both-worlds lower bound. Requires a
/// canonical base profile (arm 1 best with mean exactly 1/2, so mu_k = 1/2 -
/// Delta_k). STO plays arm bar_k at 1/2 + Delta_(1)/2 throughout; ADV keeps
/// bar_k at its base mean for t <= n_i = ceil(n * Delta_(1)/Delta_i) and then
/// switches it to 1/2 + Delta_(1)/2.
std::pair<RewardSource, RewardSource> switch_adversary_pair(const GapProfile& base,
                                                            ArmIndex bar_k, ArmIndex i,
                                                            long long n);

/// The ADV member alone, with the switch round pinned explicitly. This is the
/// knob the blueprint exposes for instances whose gap ratios make the
/// Delta_(1)/Delta_i rule degenerate (flat gaps give n_i = n, i.e. no switch).
RewardSource switch_adversary_at(const GapProfile& base, ArmIndex bar_k, long long switch_round,
                                 long long n);

/// The two-problem construction behind the general adversarial lower bound.
/// Both problems are Bernoulli at the base means for t <= ceil(n/2) -- except
/// ADV2 raises bar_k's mean by 2*Delta_(1) -- and deterministic afterwards:
/// 0 for every arm but bar_k, which earns Delta_bar - Delta_(1) per round.
std::pair<RewardSource, RewardSource> two_phase_adversary_pair(const GapProfile& base,
                                                               ArmIndex bar_k, long long n);

/// Zero rewards for t <= blackout_until, Bernoulli(means) afterwards.
RewardSource deception_adversary(const std::vector<double>& means, long long blackout_until,
                                 long long n);

RewardSource fixed_matrix_source(std::vector<std::vector<double>> matrix);

/// K rows x n columns of reals in [0,1], comma-delimited, no header.
std::vector<std::vector<double>> load_reward_csv(const std::string& path);

/// Operational stand-in for the proofs' existential under-pulled arm: run the
/// learner `reps` times against the source, average each arm's pull count over
/// rounds [1, phase_end], and return the arm in [2:K] with the smallest
/// average (ties by index). Requires reps >= 100.
ArmIndex estimate_low_pull_arm(LearnerKind learner, const RewardSource& source, long long n,
                               long long phase_end, int reps, const RngStream& stream);

}  // namespace bai
