#include "bai/learners.hpp"

#include <algorithm>
#include <cmath>

#include "bai/environments.hpp"

namespace bai {

const char* learner_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::Rule: return "rule";
    case LearnerKind::P1: return "p1";
    case LearnerKind::MixedP1Rule: return "mixed";
    case LearnerKind::SR: return "sr";
    case LearnerKind::SH: return "sh";
    case LearnerKind::StaticUniform: return "uniform";
  }
  return "?";
}

std::optional<LearnerKind> parse_learner(std::string_view name) {
  if (name == "rule") return LearnerKind::Rule;
  if (name == "p1") return LearnerKind::P1;
  if (name == "mixed") return LearnerKind::MixedP1Rule;
  if (name == "sr") return LearnerKind::SR;
  if (name == "sh") return LearnerKind::SH;
  if (name == "uniform" || name == "static-uniform") return LearnerKind::StaticUniform;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Policies

ProbabilityVector rule_policy(int K) {
  if (K < 2) throw DomainError("rule_policy: need at least 2 arms");
  return ProbabilityVector{std::vector<double>(static_cast<size_t>(K), 1.0 / K)};
}

ProbabilityVector p1_policy(const ImportanceWeightedTally& tally) {
  const int K = tally.num_arms();
  if (K < 2) throw DomainError("p1_policy: need at least 2 arms");
  const std::vector<int> ranks = rank_by_value(tally.totals);
  const double blog = harmonic(K);
  ProbabilityVector p{std::vector<double>(static_cast<size_t>(K))};
  for (int k = 0; k < K; ++k) p.probs[static_cast<size_t>(k)] = 1.0 / (ranks[static_cast<size_t>(k)] * blog);
  return p;
}

ProbabilityVector mixed_policy(const ImportanceWeightedTally& tally) {
  ProbabilityVector p = p1_policy(tally);
  const double u = 1.0 / tally.num_arms();
  for (double& x : p.probs) x = 0.5 * u + 0.5 * x;
  return p;
}

ArmIndex recommend_iw(const ImportanceWeightedTally& tally) {
  if (tally.num_arms() < 1) throw DomainError("recommend_iw: empty tally");
  int best = 0;
  for (int k = 1; k < tally.num_arms(); ++k)
    if (tally.totals[static_cast<size_t>(k)] > tally.totals[static_cast<size_t>(best)]) best = k;
  return best + 1;
}

// ---------------------------------------------------------------------------
// Schedules

double sr_logbar(int K) {
  double s = 0.5;
  for (int i = 2; i <= K; ++i) s += 1.0 / i;
  return s;
}

SrSchedule sr_schedule(int K, long long n) {
  if (K < 2) throw DomainError("sr_schedule: need at least 2 arms");
  if (n < static_cast<long long>(K) * (K + 1) / 2)
    throw BudgetTooSmall("sr_schedule: n < K(K+1)/2");
  SrSchedule s;
  s.cumulative_targets.assign(static_cast<size_t>(K), 0);
  const double budget = static_cast<double>(n - K) / sr_logbar(K);
  long long used = 0;
  for (int k = 1; k <= K - 1; ++k) {
    const long long nk = static_cast<long long>(std::ceil(budget / (K + 1 - k)));
    s.cumulative_targets[static_cast<size_t>(k)] = nk;
    used += (K + 1 - k) * (nk - s.cumulative_targets[static_cast<size_t>(k) - 1]);
  }
  s.final_leftover = n - used;
  s.total = n;
  return s;
}

ShSchedule sh_schedule(int K, long long n) {
  if (K < 2) throw DomainError("sh_schedule: need at least 2 arms");
  const int phases = static_cast<int>(std::ceil(std::log2(static_cast<double>(K))));
  if (n < static_cast<long long>(K) * phases) throw BudgetTooSmall("sh_schedule: n < K ceil(log2 K)");
  ShSchedule s;
  s.phases = phases;
  long long used = 0;
  for (int active = K; active > 1; active = (active + 1) / 2) {
    s.active_counts.push_back(active);
    const long long m = n / (static_cast<long long>(active) * phases);
    s.per_arm.push_back(m);
    used += static_cast<long long>(active) * m;
  }
  const long long leftover = n - used;
  const int last_active = s.active_counts.back();
  s.final_extra_per_arm = leftover / last_active;
  s.final_extra_odd = static_cast<int>(leftover % last_active);
  s.total = n;
  return s;
}

std::vector<long long> static_uniform_counts(int K, long long n) {
  if (K < 2) throw DomainError("static_uniform_counts: need at least 2 arms");
  std::vector<long long> counts(static_cast<size_t>(K), n / K);
  for (long long k = 0; k < n % K; ++k) ++counts[static_cast<size_t>(k)];
  return counts;
}

// ---------------------------------------------------------------------------
// Episode drivers

namespace {

// Rank order maintained incrementally: order[r-1] = arm at rank r, sorted by
// (G~ desc, index asc). A pulled arm's total only grows, so it can only move
// toward the front; a bubble pass restores the order exactly as a full
// re-sort would.
struct RankOrder {
  std::vector<ArmIndex> order;
  std::vector<int> pos;  // pos[k-1] = 0-based rank of arm k

  explicit RankOrder(int K) : order(static_cast<size_t>(K)), pos(static_cast<size_t>(K)) {
    for (int k = 0; k < K; ++k) {
      order[static_cast<size_t>(k)] = k + 1;
      pos[static_cast<size_t>(k)] = k;
    }
  }

  void raise(ArmIndex arm, const std::vector<double>& totals) {
    int p = pos[static_cast<size_t>(arm) - 1];
    const double v = totals[static_cast<size_t>(arm) - 1];
    while (p > 0) {
      const ArmIndex prev = order[static_cast<size_t>(p) - 1];
      const double pv = totals[static_cast<size_t>(prev) - 1];
      if (pv > v || (pv == v && prev < arm)) break;
      order[static_cast<size_t>(p)] = prev;
      pos[static_cast<size_t>(prev) - 1] = p;
      --p;
    }
    order[static_cast<size_t>(p)] = arm;
    pos[static_cast<size_t>(arm) - 1] = p;
  }
};

// Inverse-CDF sampling of a rank; the rank weights are fixed, only the
// arm <-> rank mapping moves.
struct RankSampler {
  std::vector<double> weights;  // weight of rank r at [r-1]
  std::vector<double> cum;

  RankSampler(int K, bool mixed) : weights(static_cast<size_t>(K)), cum(static_cast<size_t>(K)) {
    const double blog = harmonic(K);
    double acc = 0.0;
    for (int r = 1; r <= K; ++r) {
      double w = 1.0 / (r * blog);
      if (mixed) w = 0.5 / K + 0.5 * w;
      weights[static_cast<size_t>(r) - 1] = w;
      acc += w;
      cum[static_cast<size_t>(r) - 1] = acc;
    }
    cum.back() = 1.0;
  }

  int sample_rank(Rng& rng) const {
    const double u = rng.next_u01();
    return static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin()) + 1;
  }
};

struct NoopSink {
  void operator()(long long, ArmIndex, double, double) const {}
};

struct LogSink {
  EpisodeLog* log;
  void operator()(long long t, ArmIndex arm, double prob, double reward) const {
    log->pulls.push_back(PullRecord{t, arm, prob, reward});
  }
};

struct WindowCountSink {
  std::vector<long long>* counts;
  long long window_end;
  void operator()(long long t, ArmIndex arm, double, double) const {
    if (t <= window_end) ++(*counts)[static_cast<size_t>(arm) - 1];
  }
};

template <class Sink>
ArmIndex drive_iw(LearnerKind kind, const RewardSource& source, long long n,
                  const RngStream& stream, Sink&& sink) {
  const int K = source.num_arms();
  Rng rng(stream.substream(kLearnerStreamSalt));
  const std::uint64_t skey = stream.substream(kSourceStreamSalt).key();
  ImportanceWeightedTally tally(K);

  if (kind == LearnerKind::Rule) {
    const double p = 1.0 / K;
    for (long long t = 1; t <= n; ++t) {
      const ArmIndex arm = static_cast<ArmIndex>(rng.next_below(static_cast<std::uint64_t>(K))) + 1;
      const double g = source.reward(skey, arm, t);
      iw_update(tally, arm, g, p);
      sink(t, arm, p, g);
    }
    return recommend_iw(tally);
  }

  const RankSampler sampler(K, kind == LearnerKind::MixedP1Rule);
  RankOrder ranks(K);
  for (long long t = 1; t <= n; ++t) {
    const int r = sampler.sample_rank(rng);
    const ArmIndex arm = ranks.order[static_cast<size_t>(r) - 1];
    const double p = sampler.weights[static_cast<size_t>(r) - 1];
    const double g = source.reward(skey, arm, t);
    iw_update(tally, arm, g, p);
    if (g > 0.0) ranks.raise(arm, tally.totals);
    sink(t, arm, p, g);
  }
  return recommend_iw(tally);
}

// Round-robin over the active arms with per-arm budgets; ascending index
// within each cycle.
template <class Sink>
void pull_phase(const RewardSource& source, std::uint64_t skey, const std::vector<ArmIndex>& active,
                const std::vector<long long>& budget, long long& t, EmpiricalMeanTally& tally,
                Sink&& sink) {
  long long max_budget = 0;
  for (size_t i = 0; i < active.size(); ++i) max_budget = std::max(max_budget, budget[i]);
  for (long long rep = 0; rep < max_budget; ++rep) {
    for (size_t i = 0; i < active.size(); ++i) {
      if (rep >= budget[i]) continue;
      const ArmIndex arm = active[i];
      const double g = source.reward(skey, arm, ++t);
      tally.record(arm, g);
      sink(t, arm, 1.0, g);
    }
  }
}

// Arm with the lowest cumulative empirical mean; ties by ascending index.
ArmIndex worst_active(const EmpiricalMeanTally& tally, const std::vector<ArmIndex>& active) {
  ArmIndex worst = active[0];
  double worst_mean = empirical_mean(tally, worst);
  for (size_t i = 1; i < active.size(); ++i) {
    const double m = empirical_mean(tally, active[i]);
    if (m < worst_mean) {
      worst = active[i];
      worst_mean = m;
    }
  }
  return worst;
}

template <class Sink>
ArmIndex drive_sr(const RewardSource& source, long long n, const RngStream& stream, Sink&& sink) {
  const int K = source.num_arms();
  const SrSchedule sched = sr_schedule(K, n);
  const std::uint64_t skey = stream.substream(kSourceStreamSalt).key();
  EmpiricalMeanTally tally(K);
  std::vector<ArmIndex> active(static_cast<size_t>(K));
  for (int k = 0; k < K; ++k) active[static_cast<size_t>(k)] = k + 1;

  long long t = 0;
  for (int phase = 1; phase <= K - 1; ++phase) {
    const long long m = sched.cumulative_targets[static_cast<size_t>(phase)] -
                        sched.cumulative_targets[static_cast<size_t>(phase) - 1];
    std::vector<long long> budget(active.size(), m);
    if (phase == K - 1) {
      budget[0] += sched.final_leftover / 2 + sched.final_leftover % 2;
      budget[1] += sched.final_leftover / 2;
    }
    pull_phase(source, skey, active, budget, t, tally, sink);
    const ArmIndex worst = worst_active(tally, active);
    active.erase(std::find(active.begin(), active.end(), worst));
  }
  return active[0];
}

template <class Sink>
ArmIndex drive_sh(const RewardSource& source, long long n, const RngStream& stream, Sink&& sink) {
  const int K = source.num_arms();
  const ShSchedule sched = sh_schedule(K, n);
  const std::uint64_t skey = stream.substream(kSourceStreamSalt).key();
  EmpiricalMeanTally tally(K);
  std::vector<ArmIndex> active(static_cast<size_t>(K));
  for (int k = 0; k < K; ++k) active[static_cast<size_t>(k)] = k + 1;

  long long t = 0;
  for (int phase = 0; phase < sched.phases; ++phase) {
    std::vector<long long> budget(active.size(), sched.per_arm[static_cast<size_t>(phase)]);
    if (phase == sched.phases - 1) {
      for (size_t i = 0; i < active.size(); ++i) {
        budget[i] += sched.final_extra_per_arm;
        if (static_cast<int>(i) < sched.final_extra_odd) ++budget[i];
      }
    }
    pull_phase(source, skey, active, budget, t, tally, sink);

    std::vector<double> means(active.size());
    for (size_t i = 0; i < active.size(); ++i) means[i] = empirical_mean(tally, active[i]);
    const std::vector<int> ranks = rank_by_value(means);
    const int keep = (static_cast<int>(active.size()) + 1) / 2;
    std::vector<ArmIndex> next;
    for (size_t i = 0; i < active.size(); ++i)
      if (ranks[i] <= keep) next.push_back(active[i]);
    active = std::move(next);
  }
  return active[0];
}

template <class Sink>
ArmIndex drive_static_uniform(const RewardSource& source, long long n, const RngStream& stream,
                              Sink&& sink) {
  const int K = source.num_arms();
  const std::uint64_t skey = stream.substream(kSourceStreamSalt).key();
  EmpiricalMeanTally tally(K);
  for (long long t = 1; t <= n; ++t) {
    const ArmIndex arm = static_cast<ArmIndex>((t - 1) % K) + 1;
    const double g = source.reward(skey, arm, t);
    tally.record(arm, g);
    sink(t, arm, 1.0, g);
  }
  ArmIndex best = 0;
  double best_mean = -1.0;
  for (int k = 1; k <= K; ++k) {
    if (tally.pull_counts[static_cast<size_t>(k) - 1] == 0) continue;
    const double m = empirical_mean(tally, k);
    if (m > best_mean) {
      best = k;
      best_mean = m;
    }
  }
  return best;
}

template <class Sink>
ArmIndex drive(LearnerKind kind, const RewardSource& source, long long n, const RngStream& stream,
               Sink&& sink) {
  if (source.num_arms() < 2) throw DomainError("episode: need at least 2 arms");
  if (n < 1) throw DomainError("episode: horizon must be positive");
  if (n > source.horizon()) throw DomainError("episode: horizon exceeds the source's");
  switch (kind) {
    case LearnerKind::Rule:
    case LearnerKind::P1:
    case LearnerKind::MixedP1Rule:
      return drive_iw(kind, source, n, stream, sink);
    case LearnerKind::SR:
      return drive_sr(source, n, stream, sink);
    case LearnerKind::SH:
      return drive_sh(source, n, stream, sink);
    case LearnerKind::StaticUniform:
      return drive_static_uniform(source, n, stream, sink);
  }
  throw DomainError("episode: bad learner kind");
}

}  // namespace

ArmIndex run_episode_rec(LearnerKind kind, const RewardSource& source, long long n,
                         const RngStream& stream) {
  return drive(kind, source, n, stream, NoopSink{});
}

EpisodeLog run_episode_logged(LearnerKind kind, const RewardSource& source, long long n,
                              const RngStream& stream) {
  EpisodeLog log;
  log.pulls.reserve(static_cast<size_t>(n));
  log.recommendation = drive(kind, source, n, stream, LogSink{&log});
  return log;
}

std::vector<long long> pull_counts_through(LearnerKind kind, const RewardSource& source,
                                           long long n, long long window_end,
                                           const RngStream& stream) {
  std::vector<long long> counts(static_cast<size_t>(source.num_arms()), 0);
  drive(kind, source, n, stream, WindowCountSink{&counts, window_end});
  return counts;
}

}  // namespace bai
