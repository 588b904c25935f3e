// Command-line harness: complexity tables, single-instance complexity reports,
// Monte Carlo simulations from a config file, and adversary runs.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 runtime error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bai/harness.hpp"

namespace {

using namespace bai;

GapProfile profile_for(const std::string& setup, const std::string& means_csv, EMode e_mode,
                       CGaps c_gaps) {
  if (!means_csv.empty()) {
    std::vector<double> means;
    std::stringstream ss(means_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        means.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("bad mean '" + tok + "'");
      }
    }
    return gaps_from_means(means);
  }
  if (setup.size() != 1) throw ConfigError("expected --setup A..H or --means");
  return gaps_from_means(preset(setup[0], e_mode, c_gaps));
}

int cmd_table1(bool rounded_gaps, const std::string& e_mode_name) {
  const EMode e_mode = e_mode_name == "printed" ? EMode::Printed : EMode::Table;
  const CGaps c_gaps = rounded_gaps ? CGaps::Rounded3 : CGaps::Exact;
  std::cout << table1_text(table1(e_mode, c_gaps));
  return 0;
}

int cmd_complexity(const std::string& setup, const std::string& means_csv, bool rounded_gaps,
                   const std::string& e_mode_name, bool refine) {
  const EMode e_mode = e_mode_name == "printed" ? EMode::Printed : EMode::Table;
  const CGaps c_gaps = rounded_gaps ? CGaps::Rounded3 : CGaps::Exact;
  const GapProfile profile = profile_for(setup, means_csv, e_mode, c_gaps);
  const ComplexityReport report = complexity_report(profile);
  const auto [p1_value, alloc] =
      refine ? h_p1_min_refined(profile) : std::make_pair(report.h_p1, report.argmin_allocation);

  std::printf("K      = %d\n", profile.num_arms());
  std::printf("H1     = %.10g\n", profile.h1());
  std::printf("H_SR   = %.10g  (%lld)\n", report.h_sr, present_int(report.h_sr));
  std::printf("H_BOB  = %.10g  (%lld)\n", report.h_bob, present_int(report.h_bob));
  std::printf("H_UNIF = %.10g  (%lld)\n", report.h_unif, present_int(report.h_unif));
  std::printf("H_P1   = %.10g  (%lld)%s\n", p1_value, present_int(p1_value),
              refine ? "  [refined]" : "");
  std::printf("argmin allocation:");
  for (int i = 1; i <= profile.num_arms(); ++i) std::printf(" %.6g", alloc[i]);
  std::printf("\n");
  return 0;
}

int cmd_simulate(const std::string& config_path) {
  ExperimentConfig cfg = parse_config_file(config_path);
  const ErrorRateReport report = monte_carlo(cfg);
  if (!cfg.out.empty()) {
    emit_csv(report, cfg.out);
    std::printf("wrote %s\n", cfg.out.c_str());
  }
  for (const ErrorRateRow& r : report.rows)
    std::printf("%s %s n=%lld R=%lld errors=%lld rate=%.5f ci=[%.5f,%.5f] bound=%.5g%s (%.2fs)\n",
                r.setup.c_str(), r.learner.c_str(), r.n, r.repetitions, r.errors, r.error_rate,
                r.ci_low, r.ci_high, r.theory_bound, r.vacuous ? " (vacuous)" : "",
                r.wall_time_s);
  return 0;
}

int cmd_adversary(const std::string& kind, const std::string& setup, int bar_k, int arm_i,
                  long long n, long long reps, long long switch_round, long long blackout,
                  const std::string& learner_csv, std::uint64_t seed, int workers,
                  const std::string& out) {
  if (setup.size() != 1) throw ConfigError("expected --setup A..H");
  const GapProfile base = gaps_from_means(preset(setup[0]));
  if (n <= 0) n = present_int(base.h1());
  if (bar_k <= 0) throw ConfigError("expected --bar-k in [2,K]");

  std::vector<std::pair<std::string, RewardSource>> sources;
  const std::string prefix = setup + ":" + kind;
  if (kind == "switch") {
    if (switch_round >= 0) {
      sources.emplace_back(prefix + ":adv", switch_adversary_at(base, bar_k, switch_round, n));
    } else {
      if (arm_i <= 0) throw ConfigError("switch adversary needs --i or --switch-round");
      auto [sto, adv] = switch_adversary_pair(base, bar_k, arm_i, n);
      sources.emplace_back(prefix + ":sto", std::move(sto));
      sources.emplace_back(prefix + ":adv", std::move(adv));
    }
  } else if (kind == "two-phase") {
    auto [adv1, adv2] = two_phase_adversary_pair(base, bar_k, n);
    sources.emplace_back(prefix + ":adv1", std::move(adv1));
    sources.emplace_back(prefix + ":adv2", std::move(adv2));
  } else if (kind == "deception") {
    const long long t0 = blackout >= 0 ? blackout : n / 2;
    sources.emplace_back(prefix, deception_adversary(base.means, t0, n));
  } else {
    throw ConfigError("unknown adversary kind '" + kind + "'");
  }

  std::vector<LearnerKind> learners;
  for (const auto& tok : [&] {
         std::vector<std::string> toks;
         std::stringstream ss(learner_csv);
         std::string t;
         while (std::getline(ss, t, ',')) toks.push_back(t);
         return toks;
       }()) {
    const auto k = parse_learner(tok);
    if (!k) throw ConfigError("unknown learner '" + tok + "'");
    learners.push_back(*k);
  }
  if (learners.empty()) throw ConfigError("no learners selected");

  const int w = resolve_workers(workers);
  ErrorRateReport report;
  for (const auto& [label, source] : sources)
    for (LearnerKind lk : learners)
      report.rows.push_back(run_error_rate(label, lk, source, n, seed, reps, w));

  if (!out.empty()) {
    emit_csv(report, out);
    std::printf("wrote %s\n", out.c_str());
  }
  for (const ErrorRateRow& r : report.rows)
    std::printf("%s %s n=%lld R=%lld errors=%lld rate=%.5f ci=[%.5f,%.5f] bound=%.5g%s (%.2fs)\n",
                r.setup.c_str(), r.learner.c_str(), r.n, r.repetitions, r.errors, r.error_rate,
                r.ci_low, r.ci_high, r.theory_bound, r.vacuous ? " (vacuous)" : "",
                r.wall_time_s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-budget best-arm identification harness"};
  app.require_subcommand(1);

  auto* t1 = app.add_subcommand("table1", "Reproduce the complexity table for setups A..H");
  bool t1_rounded = false;
  std::string t1_emode = "table";
  t1->add_flag("--rounded-gaps", t1_rounded, "Round setup C gaps to three decimals");
  t1->add_option("--setup-e-mode", t1_emode, "table|printed")->check(CLI::IsMember({"table", "printed"}));

  auto* cx = app.add_subcommand("complexity", "Complexity report for one instance");
  std::string cx_setup, cx_means, cx_emode = "table";
  bool cx_rounded = false, cx_refine = false;
  cx->add_option("--setup", cx_setup, "Preset id A..H");
  cx->add_option("--means", cx_means, "Comma-separated arm means");
  cx->add_flag("--rounded-gaps", cx_rounded, "Round setup C gaps to three decimals");
  cx->add_option("--setup-e-mode", cx_emode, "table|printed")->check(CLI::IsMember({"table", "printed"}));
  cx->add_flag("--refine", cx_refine, "Golden-section refinement of the H_P1 allocation");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo error rates from a config file");
  std::string sim_config;
  sim->add_option("--config", sim_config, "Path to key = value config")->required();

  auto* adv = app.add_subcommand("adversary", "Run learners against an adversarial construction");
  std::string adv_kind, adv_setup, adv_learner = "rule,p1,sr";
  int adv_bar = 0, adv_i = 0, adv_workers = 0;
  long long adv_n = 0, adv_reps = 1000, adv_switch = -1, adv_blackout = -1;
  std::uint64_t adv_seed = 1;
  std::string adv_out;
  adv->add_option("--kind", adv_kind, "switch|two-phase|deception")->required()
      ->check(CLI::IsMember({"switch", "two-phase", "deception"}));
  adv->add_option("--setup", adv_setup, "Preset id A..H")->required();
  adv->add_option("--bar-k", adv_bar, "Target arm in [2,K]")->required();
  adv->add_option("--i", adv_i, "Phase-arm index for the switch construction");
  adv->add_option("-n", adv_n, "Horizon (default round(H1))");
  adv->add_option("-R,--repetitions", adv_reps, "Monte Carlo repetitions");
  adv->add_option("--switch-round", adv_switch, "Explicit switch round (overrides --i)");
  adv->add_option("--blackout", adv_blackout, "Deception blackout T0 (default n/2)");
  adv->add_option("--learner", adv_learner, "Comma-separated learners");
  adv->add_option("--seed", adv_seed, "Master seed");
  adv->add_option("--workers", adv_workers, "Worker threads (0 = auto)");
  adv->add_option("--out", adv_out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (t1->parsed()) return cmd_table1(t1_rounded, t1_emode);
    if (cx->parsed()) return cmd_complexity(cx_setup, cx_means, cx_rounded, cx_emode, cx_refine);
    if (sim->parsed()) return cmd_simulate(sim_config);
    if (adv->parsed())
      return cmd_adversary(adv_kind, adv_setup, adv_bar, adv_i, adv_n, adv_reps, adv_switch,
                           adv_blackout, adv_learner, adv_seed, adv_workers, adv_out);
  } catch (const bai::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bai::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
