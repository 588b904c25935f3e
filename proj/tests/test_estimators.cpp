#include <cmath>
#include <random>

#include <doctest.h>

#include "bai/estimators.hpp"

using namespace bai;

TEST_CASE("importance-weighted updates") {
  ImportanceWeightedTally tally(4);
  const ProbabilityVector uniform{{0.25, 0.25, 0.25, 0.25}};
  iw_update(tally, 2, 0.5, uniform);
  CHECK(tally.totals == std::vector<double>{0.0, 2.0, 0.0, 0.0});
  CHECK(tally.rounds_seen == 1);

  iw_update(tally, 3, 0.0, uniform);
  CHECK(tally.totals == std::vector<double>{0.0, 2.0, 0.0, 0.0});
  CHECK(tally.rounds_seen == 2);

  // P1 probabilities for K=3 at barlog 3 = 11/6; 1 / (2/11) = 5.5 exactly
  ImportanceWeightedTally t3(3);
  const ProbabilityVector p1{{6.0 / 11.0, 3.0 / 11.0, 2.0 / 11.0}};
  iw_update(t3, 3, 1.0, p1);
  CHECK(t3.totals[2] == doctest::Approx(5.5).epsilon(1e-15));

  CHECK_THROWS_AS(iw_update(tally, 1, 1.5, uniform), DomainError);
  CHECK_THROWS_AS(iw_update(tally, 1, -0.1, uniform), DomainError);
  CHECK_THROWS_AS(iw_update(tally, 1, 0.5, 0.0), DomainError);
}

TEST_CASE("empirical estimates") {
  EmpiricalMeanTally tally(2);
  tally.record(1, 1.0);
  tally.record(1, 0.0);
  tally.record(1, 1.0);
  CHECK(empirical_estimate(tally, 1, 6) == doctest::Approx(4.0));
  CHECK(empirical_mean(tally, 1) == doctest::Approx(2.0 / 3.0));

  EmpiricalMeanTally one(2);
  one.record(1, 0.0);
  CHECK(empirical_estimate(one, 1, 10) == 0.0);
  CHECK_THROWS_AS(empirical_estimate(one, 2, 10), NeverPulled);
  CHECK(one.rounds_seen == 1);
}

TEST_CASE("tally bookkeeping invariants") {
  std::mt19937_64 gen(5);
  EmpiricalMeanTally tally(4);
  long long total = 0;
  for (int i = 0; i < 500; ++i) {
    const ArmIndex arm = static_cast<ArmIndex>(gen() % 4) + 1;
    tally.record(arm, (gen() % 2) ? 1.0 : 0.0);
    ++total;
  }
  long long counted = 0;
  for (int k = 1; k <= 4; ++k) {
    counted += tally.pull_counts[k - 1];
    CHECK(tally.reward_sums[k - 1] <= static_cast<double>(tally.pull_counts[k - 1]));
  }
  CHECK(counted == tally.rounds_seen);
  CHECK(total == tally.rounds_seen);
}

TEST_CASE("iw estimator is unbiased under uniform sampling") {
  // Fixed 3 x 20 reward matrix, uniform probabilities, Monte Carlo mean of
  // G~ must approach the true row sums. The full n=50, 1e5-rep version runs
  // in the acceptance suite.
  const int K = 3, n = 20, reps = 20000;
  std::vector<std::vector<double>> g(K, std::vector<double>(n));
  for (int k = 0; k < K; ++k)
    for (int t = 0; t < n; ++t) g[k][t] = ((k + 1) * 31 + (t + 1) * 17) % 101 / 100.0;
  std::vector<double> G(K, 0.0);
  for (int k = 0; k < K; ++k)
    for (int t = 0; t < n; ++t) G[k] += g[k][t];

  const ProbabilityVector uniform{{1.0 / 3, 1.0 / 3, 1.0 / 3}};
  std::vector<double> sum(K, 0.0), sumsq(K, 0.0);
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<int> pick(0, K - 1);
  for (int r = 0; r < reps; ++r) {
    ImportanceWeightedTally tally(K);
    for (int t = 0; t < n; ++t) {
      const int arm = pick(gen);
      iw_update(tally, arm + 1, g[arm][t], uniform);
    }
    for (int k = 0; k < K; ++k) {
      sum[k] += tally.totals[k];
      sumsq[k] += tally.totals[k] * tally.totals[k];
    }
  }
  for (int k = 0; k < K; ++k) {
    const double mean = sum[k] / reps;
    const double var = sumsq[k] / reps - mean * mean;
    const double se = std::sqrt(var / reps);
    CHECK(std::fabs(mean - G[k]) <= 3.0 * se);
  }
}

TEST_CASE("per-round iw values are scaled Bernoulli") {
  // g~ takes only the values 0 or g/p.
  const double p = 0.25;
  std::mt19937_64 gen(1);
  for (int i = 0; i < 1000; ++i) {
    ImportanceWeightedTally tally(4);
    const double g = (gen() % 100) / 100.0;
    const ArmIndex arm = static_cast<ArmIndex>(gen() % 4) + 1;
    const bool hit = gen() % 4 == 0;
    if (hit) iw_update(tally, arm, g, p);
    for (int k = 1; k <= 4; ++k) {
      const double v = tally.totals[k - 1];
      CHECK((v == 0.0 || v == g / p));
    }
  }
}

TEST_CASE("round-robin with unit probabilities matches plain sums") {
  const int K = 3, n = 30;
  ImportanceWeightedTally iw(K);
  EmpiricalMeanTally em(K);
  std::mt19937_64 gen(8);
  for (int t = 0; t < n; ++t) {
    const ArmIndex arm = t % K + 1;
    const double g = (gen() % 100) / 100.0;
    iw_update(iw, arm, g, 1.0);
    em.record(arm, g);
  }
  for (int k = 1; k <= K; ++k) CHECK(iw.totals[k - 1] == em.reward_sums[k - 1]);
}
