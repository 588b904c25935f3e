#include "bai/environments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bai/learners.hpp"

namespace bai {

namespace {

// ceil with a relative nudge so a 1-ulp overshoot in n*a (e.g. n * (2/3)
// computed in doubles) does not bump the round count.
long long ceil_rounds(double x) {
  return static_cast<long long>(std::ceil(x - 1e-9 * std::max(1.0, std::fabs(x))));
}

void check_means(const std::vector<double>& means) {
  if (means.size() < 2) throw DomainError("reward source: need at least 2 arms");
  for (double m : means)
    if (!(m >= 0.0 && m <= 1.0)) throw DomainError("reward source: mean outside [0,1]");
}

// The lower-bound constructions assume mu_1 = 1/2 and mu_k = 1/2 - Delta_k.
void check_canonical_base(const GapProfile& base) {
  if (base.rank_of[0] != 1 || std::fabs(base.means[0] - 0.5) > 1e-12)
    throw DomainError("adversary: base profile must have arm 1 best with mean 1/2");
}

}  // namespace

double RewardSource::mean_at(ArmIndex k, long long t) const {
  const size_t ki = static_cast<size_t>(k) - 1;
  switch (kind) {
    case SourceKind::Bernoulli:
      return base_means[ki];
    case SourceKind::SwitchAdversary:
      if (k == bar_k && t > switch_round) return boosted_mean;
      return base_means[ki];
    case SourceKind::TwoPhaseAdversary:
      if (t <= half_round) return base_means[ki];
      return k == bar_k ? tail_gain : 0.0;
    case SourceKind::DeceptionAdversary:
      return t <= blackout_until ? 0.0 : base_means[ki];
    case SourceKind::FixedMatrix:
      return matrix[ki][static_cast<size_t>(t) - 1];
  }
  throw DomainError("mean_at: bad source kind");
}

double RewardSource::reward(std::uint64_t key, ArmIndex k, long long t) const {
  switch (kind) {
    case SourceKind::FixedMatrix:
      return matrix[static_cast<size_t>(k) - 1][static_cast<size_t>(t) - 1];
    case SourceKind::TwoPhaseAdversary:
      if (t > half_round) return k == bar_k ? tail_gain : 0.0;
      break;
    case SourceKind::DeceptionAdversary:
      if (t <= blackout_until) return 0.0;
      break;
    default:
      break;
  }
  const double mu = mean_at(k, t);
  return cell_u01(key, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(t)) < mu ? 1.0
                                                                                          : 0.0;
}

std::vector<std::vector<double>> RewardSource::tensor(const RngStream& stream) const {
  const std::uint64_t key = stream.key();
  std::vector<std::vector<double>> g(static_cast<size_t>(K),
                                     std::vector<double>(static_cast<size_t>(n)));
  for (int k = 1; k <= K; ++k)
    for (long long t = 1; t <= n; ++t)
      g[static_cast<size_t>(k) - 1][static_cast<size_t>(t) - 1] = reward(key, k, t);
  return g;
}

std::vector<double> RewardSource::realized_gains(std::uint64_t key) const {
  std::vector<double> gains(static_cast<size_t>(K), 0.0);
  for (int k = 1; k <= K; ++k) {
    double s = 0.0;
    for (long long t = 1; t <= n; ++t) s += reward(key, k, t);
    gains[static_cast<size_t>(k) - 1] = s;
  }
  return gains;
}

std::vector<double> RewardSource::expected_gains() const {
  std::vector<double> gains(static_cast<size_t>(K), 0.0);
  const double nd = static_cast<double>(n);
  for (int k = 1; k <= K; ++k) {
    const size_t ki = static_cast<size_t>(k) - 1;
    switch (kind) {
      case SourceKind::Bernoulli:
        gains[ki] = nd * base_means[ki];
        break;
      case SourceKind::SwitchAdversary:
        gains[ki] = (k == bar_k) ? static_cast<double>(switch_round) * base_means[ki] +
                                       static_cast<double>(n - switch_round) * boosted_mean
                                 : nd * base_means[ki];
        break;
      case SourceKind::TwoPhaseAdversary:
        gains[ki] = static_cast<double>(half_round) * base_means[ki] +
                    (k == bar_k ? static_cast<double>(n - half_round) * tail_gain : 0.0);
        break;
      case SourceKind::DeceptionAdversary:
        gains[ki] = static_cast<double>(n - blackout_until) * base_means[ki];
        break;
      case SourceKind::FixedMatrix: {
        double s = 0.0;
        for (double v : matrix[ki]) s += v;
        gains[ki] = s;
        break;
      }
    }
  }
  return gains;
}

std::optional<ArmIndex> RewardSource::known_best() const {
  if (kind != SourceKind::Bernoulli) return std::nullopt;
  int best = 0;
  bool tied = false;
  for (int k = 1; k < K; ++k) {
    if (base_means[static_cast<size_t>(k)] > base_means[static_cast<size_t>(best)]) {
      best = k;
      tied = false;
    } else if (base_means[static_cast<size_t>(k)] == base_means[static_cast<size_t>(best)]) {
      tied = true;
    }
  }
  if (tied) return std::nullopt;
  return best + 1;
}

std::vector<double> preset(char setup, EMode e_mode, CGaps c_gaps) {
  std::vector<double> m;
  switch (setup) {
    case 'A':  // one group of bad arms
      m.assign(20, 0.4);
      m[0] = 0.5;
      return m;
    case 'B':  // two groups of bad arms
      m.assign(20, 0.38);
      m[0] = 0.5;
      for (int i = 1; i <= 5; ++i) m[static_cast<size_t>(i)] = 0.42;
      return m;
    case 'C':  // geometric progression
      if (c_gaps == CGaps::Rounded3) return {0.5, 0.5 - 0.137, 0.5 - 0.051, 0.5 - 0.019};
      m = {0.5};
      for (int i = 2; i <= 4; ++i) m.push_back(0.5 - std::pow(0.37, i));
      return m;
    case 'D':  // three groups of six arms
      return {0.5, 0.42, 0.4, 0.4, 0.35, 0.35};
    case 'E':  // arithmetic progression
      m = {0.5};
      for (int i = 2; i <= 15; ++i)
        m.push_back(e_mode == EMode::Printed ? 0.5 - 0.025 * i : 0.5 - 0.025 * (i - 1));
      return m;
    case 'F':  // two good arms and a large group of bad arms
      m.assign(20, 0.37);
      m[0] = 0.5;
      m[1] = 0.48;
      return m;
    case 'G':  // three groups of bad arms
      m.assign(30, 0.38);
      m[0] = 0.5;
      for (int i = 1; i <= 5; ++i) m[static_cast<size_t>(i)] = 0.45;
      for (int i = 6; i <= 19; ++i) m[static_cast<size_t>(i)] = 0.43;
      return m;
    case 'H':  // square-root gaps
      m = {0.5};
      for (int i = 2; i <= 100; ++i) m.push_back(0.5 - 0.25 * std::sqrt(i / 200.0));
      return m;
    default:
      throw DomainError(std::string("preset: unknown setup '") + setup + "'");
  }
}

RewardSource bernoulli_source(const std::vector<double>& means, long long n) {
  check_means(means);
  if (n < 1) throw DomainError("bernoulli_source: horizon must be positive");
  RewardSource s;
  s.kind = SourceKind::Bernoulli;
  s.K = static_cast<int>(means.size());
  s.n = n;
  s.base_means = means;
  return s;
}

RewardSource switch_adversary_at(const GapProfile& base, ArmIndex bar_k, long long switch_round,
                                 long long n) {
  check_canonical_base(base);
  const int K = base.num_arms();
  if (bar_k < 2 || bar_k > K) throw DomainError("switch adversary: bar_k must be in [2,K]");
  if (switch_round < 0 || switch_round > n)
    throw DomainError("switch adversary: switch round outside [0,n]");
  if (n < 1) throw DomainError("switch adversary: horizon must be positive");
  const double boost = 0.5 + base.sorted_gaps[0] / 2.0;
  if (boost > 1.0) throw DomainError("switch adversary: boosted mean above 1");
  RewardSource s;
  s.kind = SourceKind::SwitchAdversary;
  s.K = K;
  s.n = n;
  s.base_means = base.means;
  s.bar_k = bar_k;
  s.switch_round = switch_round;
  s.boosted_mean = boost;
  return s;
}

std::pair<RewardSource, RewardSource> switch_adversary_pair(const GapProfile& base,
                                                            ArmIndex bar_k, ArmIndex i,
                                                            long long n) {
  check_canonical_base(base);
  const int K = base.num_arms();
  if (i < 2 || i > K) throw DomainError("switch adversary: i must be in [2,K]");
  const double a_i = base.sorted_gaps[0] / base.gaps[static_cast<size_t>(i) - 1];
  const long long n_i = std::min(n, ceil_rounds(static_cast<double>(n) * a_i));

  RewardSource adv = switch_adversary_at(base, bar_k, n_i, n);
  std::vector<double> sto_means = base.means;
  sto_means[static_cast<size_t>(bar_k) - 1] = adv.boosted_mean;
  return {bernoulli_source(sto_means, n), std::move(adv)};
}

std::pair<RewardSource, RewardSource> two_phase_adversary_pair(const GapProfile& base,
                                                               ArmIndex bar_k, long long n) {
  check_canonical_base(base);
  const int K = base.num_arms();
  if (bar_k < 2 || bar_k > K) throw DomainError("two-phase adversary: bar_k must be in [2,K]");
  if (n < 1) throw DomainError("two-phase adversary: horizon must be positive");
  const double delta_1 = base.sorted_gaps[0];
  const double delta_bar = base.gaps[static_cast<size_t>(bar_k) - 1];
  const double tail = delta_bar - delta_1;
  if (!(tail >= 0.0 && tail <= 1.0))
    throw DomainError("two-phase adversary: requires Delta_bar >= Delta_(1)");
  const double raised = base.means[static_cast<size_t>(bar_k) - 1] + 2.0 * delta_1;
  if (raised > 1.0) throw DomainError("two-phase adversary: raised mean above 1");

  RewardSource adv1;
  adv1.kind = SourceKind::TwoPhaseAdversary;
  adv1.K = K;
  adv1.n = n;
  adv1.base_means = base.means;
  adv1.bar_k = bar_k;
  adv1.half_round = (n + 1) / 2;  // first phase gets ceil(n/2) rounds
  adv1.tail_gain = tail;

  RewardSource adv2 = adv1;
  adv2.base_means[static_cast<size_t>(bar_k) - 1] = raised;
  return {std::move(adv1), std::move(adv2)};
}

RewardSource deception_adversary(const std::vector<double>& means, long long blackout_until,
                                 long long n) {
  check_means(means);
  if (n < 1) throw DomainError("deception adversary: horizon must be positive");
  if (blackout_until < 0 || blackout_until > n)
    throw DomainError("deception adversary: blackout outside [0,n]");
  RewardSource s;
  s.kind = SourceKind::DeceptionAdversary;
  s.K = static_cast<int>(means.size());
  s.n = n;
  s.base_means = means;
  s.blackout_until = blackout_until;
  return s;
}

RewardSource fixed_matrix_source(std::vector<std::vector<double>> matrix) {
  if (matrix.size() < 2) throw DomainError("fixed matrix: need at least 2 arms");
  const size_t n = matrix[0].size();
  if (n < 1) throw DomainError("fixed matrix: need at least 1 round");
  for (const auto& row : matrix) {
    if (row.size() != n) throw DomainError("fixed matrix: ragged rows");
    for (double v : row)
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("fixed matrix: entry outside [0,1]");
  }
  RewardSource s;
  s.kind = SourceKind::FixedMatrix;
  s.K = static_cast<int>(matrix.size());
  s.n = static_cast<long long>(n);
  s.matrix = std::move(matrix);
  return s;
}

std::vector<std::vector<double>> load_reward_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("load_reward_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      size_t pos = 0;
      double v;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw DomainError("load_reward_csv: bad cell '" + cell + "'");
      }
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
      if (pos != cell.size()) throw DomainError("load_reward_csv: bad cell '" + cell + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ArmIndex estimate_low_pull_arm(LearnerKind learner, const RewardSource& source, long long n,
                               long long phase_end, int reps, const RngStream& stream) {
  if (reps < 100) throw DomainError("estimate_low_pull_arm: need reps >= 100");
  if (phase_end < 1 || phase_end > n)
    throw DomainError("estimate_low_pull_arm: phase_end outside [1,n]");
  const int K = source.num_arms();
  std::vector<double> avg(static_cast<size_t>(K), 0.0);
  for (int r = 0; r < reps; ++r) {
    const auto counts =
        pull_counts_through(learner, source, n, phase_end, stream.substream(static_cast<std::uint64_t>(r)));
    for (int k = 0; k < K; ++k) avg[static_cast<size_t>(k)] += static_cast<double>(counts[static_cast<size_t>(k)]);
  }
  ArmIndex best = 2;
  for (int k = 3; k <= K; ++k)
    if (avg[static_cast<size_t>(k) - 1] < avg[static_cast<size_t>(best) - 1]) best = k;
  return best;
}

}  // namespace bai
