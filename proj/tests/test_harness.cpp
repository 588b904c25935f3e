#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "bai/harness.hpp"

using namespace bai;

TEST_CASE("episodes against a sure-thing instance always succeed") {
  const RewardSource src = bernoulli_source({1.0, 0.0}, 10);
  for (LearnerKind kind : {LearnerKind::Rule, LearnerKind::P1, LearnerKind::MixedP1Rule,
                           LearnerKind::StaticUniform}) {
    for (int r = 0; r < 50; ++r) {
      const EpisodeResult res = run_episode(kind, src, 10, RngStream{1, (std::uint64_t)r});
      REQUIRE(res.success);
      REQUIRE(res.recommendation == 1);
      REQUIRE(res.ground_truth == 1);
    }
  }
}

TEST_CASE("rule has success probability one on the 1-round matrix") {
  const RewardSource src = fixed_matrix_source({{1.0}, {0.0}});
  for (int r = 0; r < 500; ++r)
    REQUIRE(run_episode(LearnerKind::Rule, src, 1, RngStream{2, (std::uint64_t)r}).success);
}

TEST_CASE("episodes replay identically") {
  const RewardSource src = bernoulli_source(preset('D'), 700);
  const EpisodeResult a = run_episode(LearnerKind::P1, src, 700, RngStream{3, 9});
  const EpisodeResult b = run_episode(LearnerKind::P1, src, 700, RngStream{3, 9});
  CHECK(a.recommendation == b.recommendation);
  CHECK(a.log == b.log);
}

TEST_CASE("wilson intervals") {
  const WilsonInterval ci = wilson_interval(50, 100);
  CHECK(ci.low == doctest::Approx(0.404).epsilon(0.01));
  CHECK(ci.high == doctest::Approx(0.596).epsilon(0.01));
  // contains the point estimate
  for (long long e : {0LL, 1LL, 37LL, 100LL}) {
    const WilsonInterval i = wilson_interval(e, 100);
    const double rate = static_cast<double>(e) / 100.0;
    CHECK(i.low <= rate);
    CHECK(i.high >= rate);
  }
  CHECK(wilson_interval(0, 10).low == 0.0);
  CHECK(wilson_interval(10, 10).high == 1.0);
}

TEST_CASE("wilson coverage on a known error probability") {
  // K=2, n=1, tensor ((0),(1)): arm 2 is the hindsight best; Rule errs exactly
  // when it pulls arm 1 (tie at zero resolves to arm 1) => p* = 1/2.
  const RewardSource src = fixed_matrix_source({{0.0}, {1.0}});
  const long long R = 150;
  int covered = 0;
  for (int meta = 0; meta < 1000; ++meta) {
    long long errors = 0;
    for (long long r = 0; r < R; ++r) {
      const RngStream stream{static_cast<std::uint64_t>(meta), static_cast<std::uint64_t>(r)};
      errors += !run_episode(LearnerKind::Rule, src, 1, stream).success;
    }
    const WilsonInterval ci = wilson_interval(errors, R);
    covered += ci.low <= 0.5 && 0.5 <= ci.high;
  }
  CHECK(covered >= 930);
}

TEST_CASE("theoretical bounds") {
  // setup D at n = 30000: Rule's ceiling = 6 exp(-90000/(28 * 937.5))
  const GapProfile d = gaps_from_means(preset('D'));
  const BoundsReport b = theoretical_bounds(d, 30000);
  CHECK(b.rule_adv == doctest::Approx(0.1945994454).epsilon(1e-9));
  CHECK_FALSE(b.rule_adv_vacuous);
  REQUIRE(b.p1_sto.has_value());

  // n = 0: leading constants
  const BoundsReport z = theoretical_bounds(d, 0);
  CHECK(z.rule_adv == 6.0);
  CHECK(z.p1_adv == 6.0);
  CHECK(*z.p1_sto == 0.0);
  CHECK(z.rule_adv_vacuous);

  // monotone decreasing in n
  double prev_rule = z.rule_adv, prev_adv = z.p1_adv;
  for (long long n = 1000; n <= 64000; n *= 2) {
    const BoundsReport bn = theoretical_bounds(d, n);
    CHECK(bn.rule_adv < prev_rule);
    CHECK(bn.p1_adv < prev_adv);
    prev_rule = bn.rule_adv;
    prev_adv = bn.p1_adv;
  }

  // hindsight overload has no stochastic P1 bound
  const HindsightGaps h = hindsight_gaps({{1, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 0}});
  CHECK_FALSE(theoretical_bounds(h, 100).p1_sto.has_value());
}

TEST_CASE("empirical error sits below a non-vacuous p1 stochastic bound") {
  // two arms with a wide flat gap make 2 K^3 n exp(-n / (128 H_P1)) small
  const std::vector<double> means{0.9, 0.5};
  const GapProfile p = gaps_from_means(means);
  const long long n = 50000, R = 300;
  const BoundsReport b = theoretical_bounds(p, n);
  REQUIRE(b.p1_sto.has_value());
  REQUIRE(*b.p1_sto < 1.0);
  const long long errors =
      count_errors(LearnerKind::P1, bernoulli_source(means, n), n, 77, R, 2);
  const double rate = static_cast<double>(errors) / static_cast<double>(R);
  const double sigma = std::sqrt(*b.p1_sto * (1.0 - *b.p1_sto) / static_cast<double>(R));
  CHECK(rate <= *b.p1_sto + 3.0 * sigma + 1e-12);
}

TEST_CASE("monte carlo on a sure thing reports zero error") {
  ExperimentConfig cfg;
  cfg.setup = "custom";
  cfg.means = {1.0, 0.0, 0.0};
  cfg.learners = {LearnerKind::Rule, LearnerKind::StaticUniform};
  cfg.n = 20;
  cfg.repetitions = 1000;
  cfg.master_seed = 9;
  const ErrorRateReport report = monte_carlo(cfg);
  REQUIRE(report.rows.size() == 2);
  for (const ErrorRateRow& row : report.rows) {
    CHECK(row.errors == 0);
    CHECK(row.error_rate == 0.0);
    CHECK(row.ci_low == 0.0);
  }
}

TEST_CASE("worker count does not change the report") {
  ExperimentConfig cfg;
  cfg.setup = "D";
  cfg.learners = {LearnerKind::Rule, LearnerKind::P1, LearnerKind::SR};
  cfg.n = 400;
  cfg.repetitions = 300;
  cfg.master_seed = 31;
  std::string texts[3];
  int i = 0;
  for (int workers : {1, 4, 16}) {
    cfg.workers = workers;
    texts[i++] = csv_text(monte_carlo(cfg));
  }
  CHECK(texts[0] == texts[1]);
  CHECK(texts[1] == texts[2]);
}

TEST_CASE("csv emission") {
  ErrorRateReport empty;
  const std::string header =
      "setup,learner,n,repetitions,errors,error_rate,ci_low,ci_high,theory_bound,vacuous,seed\n";
  CHECK(csv_text(empty) == header);

  ErrorRateRow row;
  row.setup = "D";
  row.learner = "rule";
  row.n = 100;
  row.repetitions = 10;
  row.errors = 3;
  row.error_rate = 0.3;
  row.ci_low = 0.1;
  row.ci_high = 0.6;
  row.theory_bound = 0.1945994454;
  row.vacuous = false;
  row.seed = 7;
  ErrorRateReport one{{row}};
  const std::string text = csv_text(one);
  CHECK(text == header + "D,rule,100,10,3,0.3,0.1,0.6,0.1945994454,0,7\n");

  const std::filesystem::path path = std::filesystem::temp_directory_path() / "bai_report.csv";
  emit_csv(one, path.string());
  emit_csv(one, path.string());  // rerun: byte-identical
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == text);
  std::filesystem::remove(path);
}

TEST_CASE("undefined bounds serialize as nan") {
  ErrorRateRow row;
  row.setup = "x";
  row.learner = "sr";
  row.n = 1;
  row.repetitions = 1;
  ErrorRateReport rep{{row}};
  CHECK(csv_text(rep).find(",nan,0,0\n") != std::string::npos);
}

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_config_text(
      "# comment\n"
      "setup = D\n"
      "learners = rule, p1, uniform\n"
      "n = 600\n"
      "repetitions = 50\n"
      "master_seed = 17\n"
      "workers = 2\n"
      "out = /tmp/x.csv\n"
      "setup_e_mode = table\n"
      "setup_c_gaps = rounded3\n");
  CHECK(cfg.setup == "D");
  REQUIRE(cfg.learners.size() == 3);
  CHECK(cfg.learners[2] == LearnerKind::StaticUniform);
  CHECK(cfg.n == 600);
  CHECK(cfg.repetitions == 50);
  CHECK(cfg.master_seed == 17);
  CHECK(cfg.workers == 2);
  CHECK(cfg.out == "/tmp/x.csv");
  CHECK(cfg.setup_c_gaps == CGaps::Rounded3);
  CHECK_NOTHROW(validate_config(cfg));

  CHECK_THROWS_AS(parse_config_text("bogus_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("n 600\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("learners = warp\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("n = twelve\n"), ConfigError);

  ExperimentConfig bad = cfg;
  bad.repetitions = 0;
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = cfg;
  bad.n = 3;  // < K
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = cfg;
  bad.learners = {LearnerKind::SR};
  bad.n = 10;  // < K(K+1)/2
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = cfg;
  bad.setup = "Q";
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  // means-based config
  const ExperimentConfig custom = parse_config_text("means = 0.9, 0.1\nlearners = rule\nn = 10\n");
  CHECK(custom.setup == "custom");
  REQUIRE(custom.means.size() == 2);
  CHECK_NOTHROW(validate_config(custom));
}

TEST_CASE("omitted horizon defaults to round(H1)") {
  const ExperimentConfig cfg =
      parse_config_text("setup = D\nlearners = rule\nrepetitions = 5\nmaster_seed = 3\n");
  CHECK(cfg.n == 0);
  const ErrorRateReport report = monte_carlo(cfg);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].n == 601);  // H1 of setup D is 601.39
}

TEST_CASE("BAI_WORKERS overrides the configured worker count") {
  setenv("BAI_WORKERS", "3", 1);
  CHECK(resolve_workers(8) == 3);
  setenv("BAI_WORKERS", "zebra", 1);
  CHECK_THROWS_AS(resolve_workers(8), ConfigError);
  unsetenv("BAI_WORKERS");
  CHECK(resolve_workers(8) == 8);
  CHECK(resolve_workers(0) >= 1);
}

TEST_CASE("table1 reproduction and flags") {
  const Table1 exact = table1();
  REQUIRE(exact.rows.size() == 8);
  for (const Table1Row& row : exact.rows) {
    if (row.setup == 'A') {
      CHECK(row.r_sr == 2000);
      CHECK(row.r_bob == 2000);
      CHECK(row.r_unif == 2000);
      CHECK(row.match_sr);
      CHECK(row.match_bob);
      CHECK(row.match_unif);
    }
    if (row.setup == 'G') {
      CHECK(row.r_sr == 4082);
      CHECK(row.r_bob == 5714);
      CHECK(row.r_unif == 12000);
      CHECK((row.match_sr && row.match_bob && row.match_unif));
    }
    if (row.setup == 'C') {
      // exact arithmetic disagrees with the published row and must say so
      CHECK(row.r_sr == 5694);
      CHECK(row.r_bob == 5694);
      CHECK(row.r_unif == 11388);
      CHECK_FALSE(row.match_sr);
      CHECK_FALSE(row.match_unif);
    }
    if (row.setup == 'E') CHECK((row.match_sr && row.match_bob && row.match_unif));
  }
  CHECK(table1_text(exact).find("setup C uses exact gap arithmetic") != std::string::npos);

  const Table1 rounded = table1(EMode::Table, CGaps::Rounded3);
  for (const Table1Row& row : rounded.rows)
    if (row.setup == 'C') {
      CHECK(row.r_sr == 5540);
      CHECK(row.r_bob == 5540);
      CHECK(row.r_unif == 11080);
      CHECK((row.match_sr && row.match_bob && row.match_unif));
    }

  const Table1 printed = table1(EMode::Printed);
  for (const Table1Row& row : printed.rows)
    if (row.setup == 'E') {
      CHECK(row.r_sr == 800);
      CHECK_FALSE(row.match_sr);
    }
  CHECK(table1_text(printed).find("printed") != std::string::npos);
}

TEST_CASE("adversarial episodes score against the realized tensor") {
  const GapProfile flat = gaps_from_means({0.5, 0.4, 0.4, 0.4});
  // no switch (round n): the realized best arm is arm 1 w.h.p. at this n
  const RewardSource adv = switch_adversary_at(flat, 2, 2000, 2000);
  const EpisodeResult res = run_episode(LearnerKind::Rule, adv, 2000, RngStream{8, 1});
  CHECK(res.ground_truth == 1);
}
