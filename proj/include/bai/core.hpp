#pragma once
/*
Core domain types for fixed-budget best-arm identification: gap profiles,
hindsight gaps, probability vectors, ranking with deterministic tie-breaking,
harmonic normalization, and the reproducible randomness contract.

Conventions used throughout the library:
  - Arms are 1-based (ArmIndex in [1, K]) on every public surface.
  - Per-arm vectors store arm k at position k-1.
  - Every tie over arms is broken by ascending arm index.
*/

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace bai {

using ArmIndex = int;  // 1-based

// ---------------------------------------------------------------------------
// Errors

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonUniqueBestArm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NeverPulled : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Ranking and gaps

/// Ranks of a value vector: rank 1 is the largest value, ties broken by
/// ascending arm index. Returns ranks[k-1] = rank of arm k, a bijection on [1,K].
std::vector<int> rank_by_value(const std::vector<double>& values);

/// A stochastic instance described by its arm means in [0,1].
/// gaps[k-1]   = |max_{i != k} mu_i - mu_k|
/// sorted_gaps = ascending Delta_(1) <= ... <= Delta_(K); the two smallest
///               always coincide (best and second-best share the gap).
/// rank_of     = rank of each arm by decreasing mean (index tie-break), so
///               sorted_gaps[r-1] is the gap of the rank-r arm.
struct GapProfile {
  std::vector<double> means;
  std::vector<double> gaps;
  std::vector<double> sorted_gaps;
  std::vector<int> rank_of;

  int num_arms() const { return static_cast<int>(means.size()); }
  ArmIndex best_arm() const;
  /// H1 = sum_k 1/Delta_k^2, the horizon scale used by the experiments.
  double h1() const;
};

/// Builds a GapProfile. Rejects K < 2, means outside [0,1], and a tied maximum.
GapProfile gaps_from_means(const std::vector<double>& means);

/// Gaps in hindsight of a realized reward tensor.
/// n * gaps[k-1] = |max_{i != k} G_i - G_k| with G_k the row sums.
struct HindsightGaps {
  std::vector<double> cumulative_gains;
  std::vector<double> gaps;
  ArmIndex best_arm = 0;
  long long horizon = 0;
};

/// From a K x n reward matrix with entries in [0,1]. Throws NonUniqueBestArm
/// when the maximal cumulative gain is attained by more than one arm.
HindsightGaps hindsight_gaps(const std::vector<std::vector<double>>& rewards);

/// Same, from precomputed cumulative gains.
HindsightGaps hindsight_from_gains(const std::vector<double>& gains, long long n);

/// barlog K = sum_{k=1..K} 1/k. Throws DomainError for K < 1.
double harmonic(int K);

/// A sampling distribution over arms: strictly positive entries summing to 1.
struct ProbabilityVector {
  std::vector<double> probs;

  int num_arms() const { return static_cast<int>(probs.size()); }
  double operator[](ArmIndex k) const { return probs[static_cast<size_t>(k) - 1]; }
  /// Throws DomainError unless all entries are > 0 and the sum is within
  /// 1e-12 of 1.
  void validate() const;
};

/// Integer presentation of a complexity value: round half away from zero,
/// after snapping to 6 decimals so values sitting on a .5 boundary up to
/// floating-point drift (e.g. 937.5) present consistently.
long long present_int(double x);

// ---------------------------------------------------------------------------
// Reproducible randomness
//
// A stream is identified by (master_seed, stream_id). Same pair, same draws.
// Substreams minted via substream() are statistically independent, which is
// how per-repetition and per-purpose (learner vs. reward source) streams are
// derived without coordination.

/// SplitMix64 finalizer; the basis of all stream/key derivation here.
std::uint64_t mix64(std::uint64_t x);

/// Stateless counter-based uniform in [0,1): a pure function of (key, a, b).
double cell_u01(std::uint64_t key, std::uint64_t a, std::uint64_t b);

struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  RngStream substream(std::uint64_t salt) const {
    return RngStream{master_seed, mix64(stream_id ^ (salt * 0x9E3779B97F4A7C15ull))};
  }
  std::uint64_t key() const {
    return mix64(mix64(master_seed ^ 0x6A09E667F3BCC909ull) ^ stream_id);
  }
  double cell(std::uint64_t a, std::uint64_t b) const { return cell_u01(key(), a, b); }
};

/// Sequential generator with portable draw functions. std::mt19937_64 output
/// is pinned by the standard; the helpers below avoid the
/// implementation-defined std::*_distribution wrappers so that byte-for-byte
/// reproducibility holds across toolchains.
class Rng {
 public:
  explicit Rng(const RngStream& s) : eng_(s.key()) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0,1) with 53-bit resolution.
  double next_u01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Unbiased uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace bai
