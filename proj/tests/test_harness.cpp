#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "wsbm/harness.hpp"
#include "wsbm/svg.hpp"

using namespace wsbm;
namespace fs = std::filesystem;

namespace {

bool records_equal(const TrialRecord& x, const TrialRecord& y) {
  return x.recovered == y.recovered &&
         x.certificate_found == y.certificate_found && x.hamming == y.hamming &&
         x.score_gap == y.score_gap;
}

TrialConfig weak_family_config(long n) {
  TrialConfig cfg = config_from_family({{0.8}, {0.7}, n}, 2);
  cfg.solver = SolverKind::exact;
  cfg.base_seed = 99;
  return cfg;
}

struct EnvGuard {
  std::string name;
  std::string old_value;
  bool had_value = false;
  EnvGuard(const std::string& var, const std::string& value) : name(var) {
    if (const char* old = getenv(name.c_str())) {
      old_value = old;
      had_value = true;
    }
    setenv(name.c_str(), value.c_str(), 1);
  }
  ~EnvGuard() {
    if (had_value)
      setenv(name.c_str(), old_value.c_str(), 1);
    else
      unsetenv(name.c_str());
  }
};

}  // namespace

TEST_CASE("solver names") {
  CHECK(to_string(SolverKind::exact) == "exact");
  CHECK(to_string(SolverKind::local_search) == "local_search");
  CHECK(to_string(SolverKind::certificate_only) == "certificate_only");
}

TEST_CASE("config builders wire the metadata") {
  const TrialConfig fam = config_from_family({{9.0}, {1.0}, 50}, 2);
  CHECK(fam.spec.K == 2);
  CHECK(fam.spec.n == 50);
  CHECK(fam.a == std::vector<double>{9.0});
  CHECK(fam.b == std::vector<double>{1.0});
  const auto [p, q] = make_scaled_discrete({{9.0}, {1.0}, 50});
  CHECK(fam.spec.within == p);
  CHECK(fam.spec.between == q);

  const TrialConfig cens = config_from_censored(100, 0.5, 0.25, 0.75);
  CHECK(cens.spec == censored_model(100, 0.5, 0.25, 0.75));
  REQUIRE(cens.a.size() == 2);
  // induced intensities reproduce the censored statistic exactly
  CHECK(std::abs(threshold_statistic(cens.a, cens.b) -
                 censored_stat(100, 0.5, 0.25, 0.75)) < 1e-12);
  CHECK_THROWS_AS(config_from_censored(1, 0.5, 0.25, 0.75), validation_error);

  const TrialConfig gauss = config_from_gaussian(50, 2, 1.5, 2.0);
  CHECK(gauss.spec == submatrix_model(50, 2, 1.5, 2.0));
  CHECK(gauss.a == std::vector<double>{1.5, 4.0});
  CHECK(gauss.b == std::vector<double>{0.0, 4.0});
}

TEST_CASE("config validation") {
  TrialConfig cfg = weak_family_config(4);
  CHECK_NOTHROW(cfg.validate());
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), validation_error);
  cfg.trials = 1;

  cfg.solver = SolverKind::local_search;
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), validation_error);
  cfg.solver = SolverKind::certificate_only;
  CHECK_NOTHROW(cfg.validate());  // restarts only matter for local search

  TrialConfig big = weak_family_config(20);
  big.solver = SolverKind::exact;
  CHECK_THROWS_AS(big.validate(), validation_error);  // > 1e7 classes
  big.solver = SolverKind::local_search;
  big.restarts = 1;
  CHECK_NOTHROW(big.validate());
}

TEST_CASE("wilson interval") {
  const WilsonInterval half = wilson_interval(50, 100);
  CHECK(std::abs(half.low - 0.4038315303659956) < 1e-12);
  CHECK(std::abs(half.high - 0.5961684696340044) < 1e-12);

  const WilsonInterval none = wilson_interval(0, 50);
  CHECK(none.low == 0.0);
  CHECK(none.high > 0.0);
  CHECK(none.high < 0.1);

  const WilsonInterval all = wilson_interval(50, 50);
  CHECK(all.high == 1.0);
  CHECK(all.low < 1.0);
  CHECK(all.low > 0.9);

  // wider z makes a wider interval
  const WilsonInterval z99 = wilson_interval(50, 100, 2.5758293035489004);
  CHECK(z99.low < half.low);
  CHECK(z99.high > half.high);

  CHECK_THROWS_AS(wilson_interval(1, 0), validation_error);
  CHECK_THROWS_AS(wilson_interval(-1, 10), validation_error);
  CHECK_THROWS_AS(wilson_interval(11, 10), validation_error);
  CHECK_THROWS_AS(wilson_interval(5, 10, 0.0), validation_error);
}

TEST_CASE("trials are pure functions of config and index") {
  TrialConfig cfg = weak_family_config(4);
  cfg.trials = 3;
  const TrialRecord a = run_trial(cfg, 1);
  const TrialRecord b = run_trial(cfg, 1);
  CHECK(records_equal(a, b));

  CHECK_THROWS_AS(run_trial(cfg, -1), validation_error);
  CHECK_THROWS_AS(run_trial(cfg, 3), validation_error);
}

TEST_CASE("doubling the trial budget keeps the first half unchanged") {
  TrialConfig cfg = weak_family_config(4);
  cfg.trials = 6;
  TrialConfig twice = cfg;
  twice.trials = 12;
  for (long t = 0; t < 6; ++t)
    CHECK(records_equal(run_trial(cfg, t), run_trial(twice, t)));
}

TEST_CASE("a certificate means exact search leaves the truth") {
  TrialConfig cfg = weak_family_config(4);
  cfg.trials = 300;
  long certs = 0;
  for (long t = 0; t < cfg.trials; ++t) {
    const TrialRecord rec = run_trial(cfg, t);
    if (!rec.certificate_found) continue;
    ++certs;
    CHECK(!rec.recovered);
    CHECK(rec.hamming > 0);
    CHECK(rec.score_gap > 0.0);
  }
  CHECK(certs > 0);  // weak signal at n = 4: certificates must show up
}

TEST_CASE("certificate only trials skip the solver") {
  // deep below the threshold (stat ~ 0.09): certificates are plentiful
  TrialConfig cfg = config_from_censored(150, 0.3, 0.45, 0.55);
  cfg.solver = SolverKind::certificate_only;
  cfg.trials = 20;
  cfg.base_seed = 5;
  long certs = 0;
  for (long t = 0; t < cfg.trials; ++t) {
    const TrialRecord rec = run_trial(cfg, t);
    CHECK(rec.hamming == -1);  // no estimate is ever computed
    CHECK(rec.recovered == !rec.certificate_found);
    if (rec.certificate_found) {
      ++certs;
      CHECK(rec.score_gap > 0.0);  // the certified improvement
    } else {
      CHECK(rec.score_gap == 0.0);
    }
  }
  CHECK(certs > 0);
}

TEST_CASE("deterministic instances recover exactly") {
  // p = 1, q1 = 0, q2 = 1: within pairs always read 1, between always 2,
  // so the truth is the unique assignment without impossible within pairs
  TrialConfig cfg = config_from_censored(3, 1.0, 0.0, 1.0);
  cfg.solver = SolverKind::exact;
  const TrialRecord rec = run_trial(cfg, 0);
  CHECK(rec.recovered);
  CHECK(rec.hamming == 0);
  CHECK(!rec.certificate_found);  // infinite weights: certificate skipped
  CHECK(rec.score_gap == 0.0);
}

TEST_CASE("trial errors carry the trial index") {
  TrialConfig cfg = config_from_censored(3, 1.0, 0.0, 1.0);
  cfg.solver = SolverKind::local_search;  // needs finite weights
  try {
    run_trial(cfg, 0);
    FAIL("expected the solver to reject infinite weights");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("trial 0:") == 0);
  }
}

TEST_CASE("failure estimation aggregates wilson style") {
  TrialConfig cfg = weak_family_config(4);
  cfg.trials = 60;
  const FailureEstimate est = estimate_failure(cfg);
  CHECK(est.trials == 60);
  CHECK(est.failures >= 0);
  CHECK(est.failures <= 60);
  CHECK(est.failure_rate ==
        static_cast<double>(est.failures) / static_cast<double>(est.trials));
  const WilsonInterval want = wilson_interval(est.failures, est.trials);
  CHECK(est.ci.low == want.low);
  CHECK(est.ci.high == want.high);
  CHECK(est.ci.low <= est.failure_rate);
  CHECK(est.failure_rate <= est.ci.high);
  // exact solver: a certificate is a proof of failure, never the reverse
  CHECK(est.certificates <= est.failures);
}

TEST_CASE("estimates are independent of the thread count") {
  TrialConfig cfg = config_from_censored(30, 0.4, 0.2, 0.8);
  cfg.solver = SolverKind::certificate_only;
  cfg.trials = 24;
  cfg.base_seed = 17;

  FailureEstimate serial, wide;
  {
    EnvGuard guard("WSBM_THREADS", "1");
    serial = estimate_failure(cfg);
  }
  {
    EnvGuard guard("WSBM_THREADS", "8");
    wide = estimate_failure(cfg);
  }
  CHECK(serial.trials == wide.trials);
  CHECK(serial.failures == wide.failures);
  CHECK(serial.certificates == wide.certificates);
  CHECK(serial.failure_rate == wide.failure_rate);
  CHECK(serial.ci.low == wide.ci.low);
  CHECK(serial.ci.high == wide.ci.high);
}

TEST_CASE("sweep rows compose the per-config quantities") {
  TrialConfig cfg = weak_family_config(4);
  cfg.trials = 40;
  const std::vector<SweepRow> rows = sweep({cfg});
  REQUIRE(rows.size() == 1);
  const SweepRow& row = rows.front();
  CHECK(row.error.empty());
  CHECK(row.n == 4);
  CHECK(row.K == 2);
  CHECK(row.L == 1);
  CHECK(row.a == cfg.a);
  CHECK(row.b == cfg.b);
  CHECK(row.solver == "exact");
  CHECK(row.base_seed == 99);
  CHECK(row.trials == 40);
  CHECK(row.C == threshold_statistic(cfg.a, cfg.b));
  CHECK(row.I == renyi_half(cfg.spec.within, cfg.spec.between));
  CHECK(row.n_I_over_log_n == 4.0 * row.I / std::log(4.0));
  CHECK(row.thm_bound == ml_failure_bound_k2(4, row.I));
  const FailureEstimate est = estimate_failure(cfg);
  CHECK(row.failures == est.failures);
  CHECK(row.failure_rate == est.failure_rate);
  CHECK(row.ci_low == est.ci.low);
  CHECK(row.ci_high == est.ci.high);
  CHECK(row.certificate_rate ==
        static_cast<double>(est.certificates) / static_cast<double>(est.trials));
}

TEST_CASE("sweep covers the other solver and model kinds") {
  TrialConfig local = weak_family_config(4);
  local.solver = SolverKind::local_search;
  local.restarts = 7;
  local.trials = 5;

  TrialConfig gauss = config_from_gaussian(5, 3, 1.0, 1.0);
  gauss.solver = SolverKind::local_search;
  gauss.restarts = 3;
  gauss.trials = 5;

  TrialConfig disjoint = config_from_censored(6, 1.0, 0.0, 1.0);
  disjoint.solver = SolverKind::exact;
  disjoint.trials = 2;

  const std::vector<SweepRow> rows = sweep({local, gauss, disjoint});
  REQUIRE(rows.size() == 3);

  CHECK(rows[0].solver == "local_search:7");

  CHECK(rows[1].L == 0);
  CHECK(std::isnan(rows[1].C));  // no scaled-family statistic for gaussian
  CHECK(std::abs(rows[1].I - 0.25) < 1e-12);  // mu^2 / (4 sigma^2)
  CHECK(rows[1].thm_bound == ml_failure_bound_kcomm(5, 3, rows[1].I));

  CHECK(std::isinf(rows[2].I));  // disjoint supports
  CHECK(rows[2].failure_rate == 0.0);  // deterministic recovery
}

TEST_CASE("sweep isolates failing rows") {
  TrialConfig bad = weak_family_config(20);
  bad.solver = SolverKind::exact;  // infeasible, rejected at validation
  TrialConfig good = weak_family_config(4);
  good.trials = 5;
  const std::vector<SweepRow> rows = sweep({bad, good});
  REQUIRE(rows.size() == 2);
  CHECK(!rows[0].error.empty());
  CHECK(std::isnan(rows[0].failure_rate));
  CHECK(rows[1].error.empty());
  CHECK(rows[1].trials == 5);

  CHECK_THROWS_AS(sweep({}), validation_error);
}

TEST_CASE("csv rendering is stable") {
  SweepRow row;
  row.n = 100;
  row.K = 2;
  row.L = 2;
  row.a = {0.375, 0.125};
  row.b = {1.0, 2.0};
  row.C = 0.5;
  row.I = 0.25;
  row.n_I_over_log_n = 2.0;
  row.thm_bound = 0.75;
  row.trials = 10;
  row.failures = 5;
  row.failure_rate = 0.5;
  row.ci_low = 0.25;
  row.ci_high = 0.75;
  row.certificate_rate = 0.2;
  row.solver = "exact";
  row.base_seed = 77;

  const std::string csv = sweep_csv({row});
  const std::string want =
      "n,K,L,a,b,C,I,n_I_over_log_n,thm_bound,trials,failures,failure_rate,"
      "ci_low,ci_high,certificate_rate,solver,base_seed\n"
      "100,2,2,0.375;0.125,1;2,0.5,0.25,2,0.75,10,5,0.5,0.25,0.75,0.2,"
      "exact,77\n";
  CHECK(csv == want);

  // nine significant digits, never more
  row.C = 0.123456789123456;
  CHECK(sweep_csv({row}).find("0.123456789,") != std::string::npos);

  const fs::path path =
      fs::temp_directory_path() / "wsbm_harness_tests" / "rows.csv";
  fs::create_directories(path.parent_path());
  write_sweep_csv(path.string(), {row});
  std::ifstream is(path, std::ios::binary);
  const std::string back((std::istreambuf_iterator<char>(is)), {});
  CHECK(back == sweep_csv({row}));

  CHECK_THROWS(write_sweep_csv("/nonexistent_dir_xyz/rows.csv", {row}));
}

TEST_CASE("failure plot svg") {
  TrialConfig cfg = weak_family_config(4);
  cfg.trials = 5;
  TrialConfig stronger = config_from_family({{2.0}, {0.2}, 4}, 2);
  stronger.solver = SolverKind::exact;
  stronger.trials = 5;
  TrialConfig gauss = config_from_gaussian(5, 2, 1.0, 1.0);
  gauss.solver = SolverKind::local_search;
  gauss.trials = 2;
  const std::vector<SweepRow> rows = sweep({cfg, stronger, gauss});

  const std::string svg = failure_plot_svg(rows);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.rfind("</svg>\n") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("C = 1") != std::string::npos);  // threshold marker
  CHECK(svg.find("failure rate") != std::string::npos);

  const fs::path path =
      fs::temp_directory_path() / "wsbm_harness_tests" / "plot.svg";
  fs::create_directories(path.parent_path());
  write_failure_plot(path.string(), rows);
  CHECK(fs::file_size(path) > 100);
}
