#include "bai/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace bai {

namespace {

ArmIndex ground_truth_arm(const RewardSource& source, const RngStream& stream) {
  if (source.is_stochastic()) {
    const auto best = source.known_best();
    if (!best) throw NonUniqueBestArm("episode: stochastic source has tied best means");
    return *best;
  }
  const std::uint64_t skey = stream.substream(kSourceStreamSalt).key();
  return hindsight_from_gains(source.realized_gains(skey), source.horizon()).best_arm;
}

}  // namespace

EpisodeResult run_episode(LearnerKind kind, const RewardSource& source, long long n,
                          const RngStream& stream) {
  EpisodeResult result;
  result.log = run_episode_logged(kind, source, n, stream);
  result.recommendation = result.log.recommendation;
  result.ground_truth = ground_truth_arm(source, stream);
  result.success = result.recommendation == result.ground_truth;
  return result;
}

WilsonInterval wilson_interval(long long errors, long long reps, double z) {
  if (reps < 1) throw DomainError("wilson_interval: need reps >= 1");
  const double nr = static_cast<double>(reps);
  const double p = static_cast<double>(errors) / nr;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nr;
  const double center = (p + z2 / (2.0 * nr)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nr + z2 / (4.0 * nr * nr)) / denom;
  WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (errors == 0) ci.low = 0.0;  // the exact endpoint; avoids fp residue
  if (errors == reps) ci.high = 1.0;
  return ci;
}

BoundsReport theoretical_bounds(int K, long long n, double h_unif_value,
                                std::optional<double> h_p1_value) {
  if (K < 2) throw DomainError("theoretical_bounds: need at least 2 arms");
  if (n < 0) throw DomainError("theoretical_bounds: negative horizon");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(K);
  BoundsReport b;
  b.rule_adv = kd * std::exp(-3.0 * nd / (28.0 * h_unif_value));
  b.rule_adv_vacuous = b.rule_adv >= 1.0;
  b.p1_adv = kd * std::exp(-3.0 * nd / (40.0 * harmonic(K) * h_unif_value));
  b.p1_adv_vacuous = b.p1_adv >= 1.0;
  if (h_p1_value) {
    b.p1_sto = 2.0 * kd * kd * kd * nd * std::exp(-nd / (128.0 * *h_p1_value));
    b.p1_sto_vacuous = *b.p1_sto >= 1.0;
  }
  return b;
}

BoundsReport theoretical_bounds(const GapProfile& profile, long long n) {
  return theoretical_bounds(profile.num_arms(), n, h_unif(profile),
                            h_p1_min(profile).first);
}

BoundsReport theoretical_bounds(const HindsightGaps& hindsight, long long n) {
  return theoretical_bounds(static_cast<int>(hindsight.gaps.size()), n, h_unif(hindsight),
                            std::nullopt);
}

// ---------------------------------------------------------------------------
// Config

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

long long parse_ll(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key + ": '" + v + "'");
  }
}

double parse_d(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad real for " + key + ": '" + v + "'");
  }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "setup") {
      cfg.setup = value;
    } else if (key == "means") {
      cfg.setup = "custom";
      cfg.means.clear();
      for (const std::string& tok : split(value, ','))
        cfg.means.push_back(parse_d(tok, "means"));
    } else if (key == "learners") {
      cfg.learners.clear();
      for (const std::string& tok : split(value, ',')) {
        const auto kind = parse_learner(tok);
        if (!kind) throw ConfigError("config: unknown learner '" + tok + "'");
        cfg.learners.push_back(*kind);
      }
    } else if (key == "n") {
      cfg.n = parse_ll(value, key);
    } else if (key == "repetitions") {
      cfg.repetitions = parse_ll(value, key);
    } else if (key == "master_seed") {
      cfg.master_seed = static_cast<std::uint64_t>(parse_ll(value, key));
    } else if (key == "workers") {
      cfg.workers = static_cast<int>(parse_ll(value, key));
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "setup_e_mode") {
      if (value == "table") cfg.setup_e_mode = EMode::Table;
      else if (value == "printed") cfg.setup_e_mode = EMode::Printed;
      else throw ConfigError("config: setup_e_mode must be table|printed");
    } else if (key == "setup_c_gaps") {
      if (value == "exact") cfg.setup_c_gaps = CGaps::Exact;
      else if (value == "rounded3") cfg.setup_c_gaps = CGaps::Rounded3;
      else throw ConfigError("config: setup_c_gaps must be exact|rounded3");
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

std::vector<double> config_means(const ExperimentConfig& cfg) {
  if (cfg.setup == "custom") {
    if (cfg.means.empty()) throw ConfigError("config: custom setup needs means");
    return cfg.means;
  }
  if (cfg.setup.size() != 1) throw ConfigError("config: setup must be A..H or custom means");
  return preset(cfg.setup[0], cfg.setup_e_mode, cfg.setup_c_gaps);
}

long long effective_horizon(const ExperimentConfig& cfg, const GapProfile& profile) {
  if (cfg.n > 0) return cfg.n;
  return present_int(profile.h1());  // the experiments' default scale
}

void check_budget(LearnerKind kind, int K, long long n) {
  switch (kind) {
    case LearnerKind::SR:
      if (n < static_cast<long long>(K) * (K + 1) / 2)
        throw ConfigError("config: SR needs n >= K(K+1)/2");
      break;
    case LearnerKind::SH: {
      const int phases = static_cast<int>(std::ceil(std::log2(static_cast<double>(K))));
      if (n < static_cast<long long>(K) * phases)
        throw ConfigError("config: SH needs n >= K ceil(log2 K)");
      break;
    }
    default:
      break;
  }
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.repetitions < 1) throw ConfigError("config: repetitions must be >= 1");
  if (cfg.learners.empty()) throw ConfigError("config: no learners selected");
  std::vector<double> means;
  try {
    means = config_means(cfg);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  GapProfile profile;
  try {
    profile = gaps_from_means(means);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid means: ") + e.what());
  }
  const long long n = effective_horizon(cfg, profile);
  if (n < profile.num_arms()) throw ConfigError("config: n must be >= K");
  for (LearnerKind kind : cfg.learners) check_budget(kind, profile.num_arms(), n);
}

int resolve_workers(int requested) {
  if (const char* env = std::getenv("BAI_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
      throw ConfigError("BAI_WORKERS is not a positive integer");
    }
    throw ConfigError("BAI_WORKERS is not a positive integer");
  }
  if (requested >= 1) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

long long count_errors(LearnerKind kind, const RewardSource& source, long long n,
                       std::uint64_t master_seed, long long reps, int workers) {
  if (reps < 1) throw DomainError("count_errors: need reps >= 1");
  workers = static_cast<int>(std::max<long long>(1, std::min<long long>(workers, reps)));

  auto run_range = [&](long long begin, long long end) {
    long long errors = 0;
    for (long long r = begin; r < end; ++r) {
      const RngStream stream{master_seed, static_cast<std::uint64_t>(r)};
      const ArmIndex rec = run_episode_rec(kind, source, n, stream);
      const ArmIndex truth = ground_truth_arm(source, stream);
      if (rec != truth) ++errors;
    }
    return errors;
  };

  if (workers == 1) return run_range(0, reps);

  std::vector<long long> partial(static_cast<size_t>(workers), 0);
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  const long long chunk = (reps + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long long begin = static_cast<long long>(w) * chunk;
    const long long end = std::min(reps, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        if (begin < end) partial[static_cast<size_t>(w)] = run_range(begin, end);
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  long long total = 0;
  for (long long e : partial) total += e;
  return total;
}

namespace {

// Bound overlay per learner: Rule gets its adversarial ceiling, P1 its
// stochastic or adversarial ceiling depending on the source. The remaining
// learners have no ceiling in scope.
void attach_bound(ErrorRateRow& row, LearnerKind kind, const RewardSource& source,
                  long long n) {
  std::optional<double> bound;
  bool vacuous = false;
  if (kind == LearnerKind::Rule || kind == LearnerKind::P1) {
    if (source.is_stochastic()) {
      const GapProfile profile = gaps_from_means(source.base_means);
      const BoundsReport b = theoretical_bounds(profile, n);
      if (kind == LearnerKind::Rule) {
        bound = b.rule_adv;
        vacuous = b.rule_adv_vacuous;
      } else {
        bound = b.p1_sto;
        vacuous = b.p1_sto_vacuous;
      }
    } else {
      // Deterministic overlay from the expected tensor's hindsight gaps.
      const HindsightGaps hind =
          hindsight_from_gains(source.expected_gains(), source.horizon());
      const BoundsReport b = theoretical_bounds(hind, n);
      if (kind == LearnerKind::Rule) {
        bound = b.rule_adv;
        vacuous = b.rule_adv_vacuous;
      } else {
        bound = b.p1_adv;
        vacuous = b.p1_adv_vacuous;
      }
    }
  }
  if (bound) {
    row.theory_bound = *bound;
    row.vacuous = vacuous;
  }
}

}  // namespace

ErrorRateRow run_error_rate(const std::string& setup_label, LearnerKind kind,
                            const RewardSource& source, long long n, std::uint64_t master_seed,
                            long long reps, int workers) {
  const auto start = std::chrono::steady_clock::now();
  ErrorRateRow row;
  row.setup = setup_label;
  row.learner = learner_name(kind);
  row.n = n;
  row.repetitions = reps;
  row.seed = master_seed;
  row.errors = count_errors(kind, source, n, master_seed, reps, workers);
  row.error_rate = static_cast<double>(row.errors) / static_cast<double>(reps);
  const WilsonInterval ci = wilson_interval(row.errors, reps);
  row.ci_low = ci.low;
  row.ci_high = ci.high;
  attach_bound(row, kind, source, n);
  row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

ErrorRateReport monte_carlo(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const std::vector<double> means = config_means(cfg);
  const GapProfile profile = gaps_from_means(means);
  const long long n = effective_horizon(cfg, profile);
  const int workers = resolve_workers(cfg.workers);
  const RewardSource source = bernoulli_source(means, n);

  ErrorRateReport report;
  for (LearnerKind kind : cfg.learners)
    report.rows.push_back(
        run_error_rate(cfg.setup, kind, source, n, cfg.master_seed, cfg.repetitions, workers));
  return report;
}

namespace {

std::string fmt_real(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

std::string csv_text(const ErrorRateReport& report) {
  std::string out =
      "setup,learner,n,repetitions,errors,error_rate,ci_low,ci_high,theory_bound,vacuous,seed\n";
  for (const ErrorRateRow& r : report.rows) {
    out += r.setup + ',' + r.learner + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.repetitions) + ',' + std::to_string(r.errors) + ',' +
           fmt_real(r.error_rate) + ',' + fmt_real(r.ci_low) + ',' + fmt_real(r.ci_high) + ',' +
           fmt_real(r.theory_bound) + ',' + (r.vacuous ? "1" : "0") + ',' +
           std::to_string(r.seed) + '\n';
  }
  return out;
}

void emit_csv(const ErrorRateReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << csv_text(report);
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

// ---------------------------------------------------------------------------
// Table 1

namespace {

struct Published {
  char setup;
  long long sr, bob, unif;
};

constexpr Published kPublished[] = {
    {'A', 2000, 2000, 2000},  {'B', 1389, 2083, 3125},   {'C', 5540, 5540, 11080},
    {'D', 400, 500, 938},     {'E', 3200, 3200, 24000},  {'F', 5000, 7692, 50000},
    {'G', 4082, 5714, 12000}, {'H', 3200, 22627, 160000},
};

}  // namespace

Table1 table1(EMode e_mode, CGaps c_gaps) {
  Table1 t;
  t.e_mode = e_mode;
  t.c_gaps = c_gaps;
  for (const Published& pub : kPublished) {
    const GapProfile profile = gaps_from_means(preset(pub.setup, e_mode, c_gaps));
    Table1Row row;
    row.setup = pub.setup;
    row.h_sr = h_sr(profile);
    row.h_bob = h_bob(profile);
    row.h_unif = h_unif(profile);
    row.r_sr = present_int(row.h_sr);
    row.r_bob = present_int(row.h_bob);
    row.r_unif = present_int(row.h_unif);
    row.p_sr = pub.sr;
    row.p_bob = pub.bob;
    row.p_unif = pub.unif;
    row.match_sr = row.r_sr == pub.sr;
    row.match_bob = row.r_bob == pub.bob;
    row.match_unif = row.r_unif == pub.unif;
    t.rows.push_back(row);
  }
  return t;
}

std::string table1_text(const Table1& t) {
  std::ostringstream out;
  out << "setup      H_SR      H_BOB     H_UNIF   published            match\n";
  bool c_mismatch = false, e_mismatch = false;
  for (const Table1Row& r : t.rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%c     %9lld  %9lld  %9lld   %lld/%lld/%lld   %s%s%s\n",
                  r.setup, r.r_sr, r.r_bob, r.r_unif, r.p_sr, r.p_bob, r.p_unif,
                  r.match_sr ? "y" : "N", r.match_bob ? "y" : "N", r.match_unif ? "y" : "N");
    out << line;
    if (r.setup == 'C' && !(r.match_sr && r.match_bob && r.match_unif)) c_mismatch = true;
    if (r.setup == 'E' && !(r.match_sr && r.match_bob && r.match_unif)) e_mismatch = true;
  }
  if (c_mismatch)
    out << "note: setup C uses exact gap arithmetic here; the published row used gaps\n"
           "      rounded to three decimals (rerun with setup_c_gaps = rounded3).\n";
  if (t.c_gaps == CGaps::Rounded3)
    out << "note: setup C gaps rounded to three decimals (0.137, 0.051, 0.019).\n";
  if (e_mismatch)
    out << "note: setup E used the printed means 0.5 - 0.025*i, which contradict the\n"
           "      published row (table-consistent gaps are 0.025*(i-1)).\n";
  if (t.e_mode == EMode::Table)
    out << "note: setup E uses the table-consistent gaps 0.025*(i-1); the printed\n"
           "      formula 0.5 - 0.025*i gives 800/800/6000 instead (rerun with\n"
           "      setup_e_mode = printed).\n";
  return out.str();
}

}  // namespace bai
