#pragma once
/*
Experiment engine: single episodes against the game protocol, parallel Monte
Carlo estimation of misidentification probabilities with Wilson intervals,
theoretical-bound overlays, complexity-table reproduction, and CSV emission.

Reproducibility contract: a (config, master_seed) pair determines every output
byte except wall_time, for any worker count. Episode r uses the stream
(master_seed, r); error counts are integers summed over workers.
*/

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bai/complexity.hpp"
#include "bai/core.hpp"
#include "bai/environments.hpp"
#include "bai/learners.hpp"

namespace bai {

// ---------------------------------------------------------------------------
// Episodes

struct EpisodeResult {
  ArmIndex recommendation = 0;
  ArmIndex ground_truth = 0;  // k*_STO for stochastic sources, k*_g otherwise
  bool success = false;
  EpisodeLog log;
};

/// Plays the protocol for exactly n rounds. For adversarial sources the
/// ground truth is the hindsight best arm of the realized tensor; a tied
/// realized best raises NonUniqueBestArm.
EpisodeResult run_episode(LearnerKind kind, const RewardSource& source, long long n,
                          const RngStream& stream);

// ---------------------------------------------------------------------------
// Intervals and bounds

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};
WilsonInterval wilson_interval(long long errors, long long reps, double z = 1.959963984540054);

/// Theoretical error ceilings. Values above 1 are reported as-is and flagged
/// vacuous. The P1 stochastic bound needs an H_P1 value and is undefined for
/// hindsight-only inputs.
struct BoundsReport {
  double rule_adv = 0.0;  // K exp(-3n / (28 H_UNIF))
  bool rule_adv_vacuous = false;
  std::optional<double> p1_sto;  // 2 K^3 n exp(-n / (128 H_P1))
  bool p1_sto_vacuous = false;
  double p1_adv = 0.0;  // K exp(-3n / (40 barlog(K) H_UNIF))
  bool p1_adv_vacuous = false;
};
BoundsReport theoretical_bounds(int K, long long n, double h_unif_value,
                                std::optional<double> h_p1_value);
BoundsReport theoretical_bounds(const GapProfile& profile, long long n);
BoundsReport theoretical_bounds(const HindsightGaps& hindsight, long long n);

// ---------------------------------------------------------------------------
// Monte Carlo

struct ExperimentConfig {
  std::string setup;                  // preset id "A".."H", or "custom" with means
  std::vector<double> means;          // used when setup == "custom"
  std::vector<LearnerKind> learners;
  long long n = 0;                    // 0 -> round(H1) of the instance
  long long repetitions = 1000;
  std::uint64_t master_seed = 1;
  int workers = 0;                    // 0 -> hardware concurrency
  std::string out;                    // CSV path; empty -> stdout only
  EMode setup_e_mode = EMode::Table;
  CGaps setup_c_gaps = CGaps::Exact;
};

/// Flat key = value lines, '#' comments. Unknown keys are errors.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
/// ConfigError unless R >= 1, n >= K, and every learner's budget precondition
/// holds at this n.
void validate_config(const ExperimentConfig& config);

/// BAI_WORKERS env var, then `requested`, then hardware concurrency.
int resolve_workers(int requested);

struct ErrorRateRow {
  std::string setup;
  std::string learner;
  long long n = 0;
  long long repetitions = 0;
  long long errors = 0;
  double error_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double theory_bound = std::numeric_limits<double>::quiet_NaN();
  bool vacuous = false;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;  // not serialized
};

struct ErrorRateReport {
  std::vector<ErrorRateRow> rows;
};

/// Number of misidentifications over reps episodes with streams
/// (master_seed, 0..reps-1), distributed over `workers` threads. The count is
/// identical for every worker count.
long long count_errors(LearnerKind kind, const RewardSource& source, long long n,
                       std::uint64_t master_seed, long long reps, int workers);

ErrorRateReport monte_carlo(const ExperimentConfig& config);

/// One row for an explicit (label, learner, source) combination; used by the
/// adversary runs where the source is not a plain preset.
ErrorRateRow run_error_rate(const std::string& setup_label, LearnerKind kind,
                            const RewardSource& source, long long n, std::uint64_t master_seed,
                            long long reps, int workers);

/// Header: setup,learner,n,repetitions,errors,error_rate,ci_low,ci_high,
/// theory_bound,vacuous,seed. Reals carry 10 significant digits; LF endings.
void emit_csv(const ErrorRateReport& report, const std::string& path);
std::string csv_text(const ErrorRateReport& report);

// ---------------------------------------------------------------------------
// Table 1

struct Table1Row {
  char setup = '?';
  double h_sr = 0.0, h_bob = 0.0, h_unif = 0.0;
  long long r_sr = 0, r_bob = 0, r_unif = 0;  // integer presentation
  long long p_sr = 0, p_bob = 0, p_unif = 0;  // published values
  bool match_sr = false, match_bob = false, match_unif = false;
};

struct Table1 {
  std::vector<Table1Row> rows;
  EMode e_mode = EMode::Table;
  CGaps c_gaps = CGaps::Exact;
};

Table1 table1(EMode e_mode = EMode::Table, CGaps c_gaps = CGaps::Exact);
std::string table1_text(const Table1& table);

}  // namespace bai
