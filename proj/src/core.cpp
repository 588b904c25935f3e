#include "bai/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bai {

std::vector<int> rank_by_value(const std::vector<double>& values) {
  const int K = static_cast<int>(values.size());
  std::vector<int> idx(K);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  std::vector<int> ranks(K);
  for (int r = 0; r < K; ++r) ranks[idx[r]] = r + 1;
  return ranks;
}

namespace {

// Indices (0-based) of the largest and second-largest entries; the largest is
// the earliest maximal entry, so callers can detect duplicates of the max.
struct TopTwo {
  int arg_max;
  double max1;
  double max2;
  bool max_tied;
};

TopTwo top_two(const std::vector<double>& v) {
  TopTwo t{0, v[0], -1.0, false};
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > t.max1) {
      t.max2 = t.max1;
      t.max1 = v[i];
      t.arg_max = i;
      t.max_tied = false;
    } else if (v[i] == t.max1) {
      t.max_tied = true;
      t.max2 = t.max1;
    } else if (v[i] > t.max2) {
      t.max2 = v[i];
    }
  }
  return t;
}

}  // namespace

ArmIndex GapProfile::best_arm() const {
  for (int k = 0; k < num_arms(); ++k)
    if (rank_of[k] == 1) return k + 1;
  throw DomainError("GapProfile: missing rank-1 arm");
}

double GapProfile::h1() const {
  double s = 0.0;
  for (double g : gaps) s += 1.0 / (g * g);
  return s;
}

GapProfile gaps_from_means(const std::vector<double>& means) {
  const int K = static_cast<int>(means.size());
  if (K < 2) throw DomainError("gaps_from_means: need at least 2 arms");
  for (double m : means)
    if (!(m >= 0.0 && m <= 1.0)) throw DomainError("gaps_from_means: mean outside [0,1]");
  const TopTwo t = top_two(means);
  if (t.max_tied) throw NonUniqueBestArm("gaps_from_means: tied best arm");

  GapProfile p;
  p.means = means;
  p.gaps.resize(K);
  for (int k = 0; k < K; ++k) {
    const double other_max = (k == t.arg_max) ? t.max2 : t.max1;
    p.gaps[k] = std::fabs(other_max - means[k]);
  }
  p.rank_of = rank_by_value(means);
  p.sorted_gaps.resize(K);
  for (int k = 0; k < K; ++k) p.sorted_gaps[p.rank_of[k] - 1] = p.gaps[k];
  return p;
}

HindsightGaps hindsight_from_gains(const std::vector<double>& gains, long long n) {
  const int K = static_cast<int>(gains.size());
  if (K < 2) throw DomainError("hindsight_gaps: need at least 2 arms");
  if (n < 1) throw DomainError("hindsight_gaps: horizon must be positive");
  const TopTwo t = top_two(gains);
  if (t.max_tied) throw NonUniqueBestArm("hindsight_gaps: tied cumulative gains at the top");

  HindsightGaps h;
  h.cumulative_gains = gains;
  h.horizon = n;
  h.best_arm = t.arg_max + 1;
  h.gaps.resize(K);
  for (int k = 0; k < K; ++k) {
    const double other_max = (k == t.arg_max) ? t.max2 : t.max1;
    h.gaps[k] = std::fabs(other_max - gains[k]) / static_cast<double>(n);
  }
  return h;
}

HindsightGaps hindsight_gaps(const std::vector<std::vector<double>>& rewards) {
  const int K = static_cast<int>(rewards.size());
  if (K < 2) throw DomainError("hindsight_gaps: need at least 2 arms");
  const size_t n = rewards[0].size();
  std::vector<double> gains(K, 0.0);
  for (int k = 0; k < K; ++k) {
    if (rewards[k].size() != n) throw DomainError("hindsight_gaps: ragged reward matrix");
    for (double g : rewards[k]) {
      if (!(g >= 0.0 && g <= 1.0)) throw DomainError("hindsight_gaps: reward outside [0,1]");
      gains[k] += g;
    }
  }
  return hindsight_from_gains(gains, static_cast<long long>(n));
}

double harmonic(int K) {
  if (K < 1) throw DomainError("harmonic: K must be >= 1");
  double h = 0.0;
  for (int k = 1; k <= K; ++k) h += 1.0 / k;
  return h;
}

void ProbabilityVector::validate() const {
  if (probs.empty()) throw DomainError("ProbabilityVector: empty");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) throw DomainError("ProbabilityVector: non-positive entry");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw DomainError("ProbabilityVector: entries do not sum to 1");
}

long long present_int(double x) {
  const double snapped = std::round(x * 1e6) / 1e6;
  return std::llround(snapped);
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double cell_u01(std::uint64_t key, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = mix64(key ^ (a * 0xD6E8FEB86659FD93ull));
  h = mix64(h ^ (b * 0xCA5A826395121157ull));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace bai
