#include "wsbm/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "wsbm/parallel.hpp"
#include "wsbm/rng.hpp"

namespace wsbm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// local-search seed stream; the index is far outside any upper-triangle
// pair index so it can never collide with an edge stream of the same trial
constexpr std::uint64_t kSolverStream = ~0ULL;

std::string fmt_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string join_g9(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += fmt_g9(xs[i]);
  }
  return out;
}

}  // namespace

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::exact: return "exact";
    case SolverKind::local_search: return "local_search";
    case SolverKind::certificate_only: return "certificate_only";
  }
  return "local_search";
}

void TrialConfig::validate() const {
  spec.validate();
  if (trials < 1) throw validation_error("experiment needs trials >= 1");
  if (solver == SolverKind::local_search && restarts < 1)
    throw validation_error("local search needs restarts >= 1");
  if (solver == SolverKind::exact &&
      num_balanced_classes(spec.K, spec.n) > 1e7)
    throw validation_error(
        "exact solver infeasible here (more than 1e7 assignment classes); "
        "pick local_search or certificate_only");
}

TrialConfig config_from_family(const ScaledFamily& fam, int K) {
  const auto [within, between] = make_scaled_discrete(fam);
  TrialConfig cfg;
  cfg.spec.K = K;
  cfg.spec.n = fam.n;
  cfg.spec.within = within;
  cfg.spec.between = between;
  cfg.a = fam.a;
  cfg.b = fam.b;
  cfg.spec.validate();
  return cfg;
}

TrialConfig config_from_censored(long n, double p, double q1, double q2) {
  if (n < 2) throw validation_error("censored experiment needs n >= 2");
  TrialConfig cfg;
  cfg.spec = censored_model(n, p, q1, q2);
  // induced intensities: mass(l) * n / log n, so C matches censored_stat
  const double scale =
      static_cast<double>(n) / std::log(static_cast<double>(n));
  for (std::size_t l = 1; l < 3; ++l) {
    cfg.a.push_back(cfg.spec.within.probs()[l] * scale);
    cfg.b.push_back(cfg.spec.between.probs()[l] * scale);
  }
  return cfg;
}

TrialConfig config_from_gaussian(long n, int K, double mu, double sigma) {
  TrialConfig cfg;
  cfg.spec = submatrix_model(n, K, mu, sigma);
  cfg.a = {cfg.spec.within.mean(), cfg.spec.within.variance()};
  cfg.b = {cfg.spec.between.mean(), cfg.spec.between.variance()};
  return cfg;
}

namespace {

TrialRecord run_trial_impl(const TrialConfig& config, long trial_index) {
  const std::uint64_t trial_seed =
      derive_stream(config.base_seed, static_cast<std::uint64_t>(trial_index));
  auto [graph, truth] = generate_wsbm(config.spec, trial_seed);
  const LlrMatrix m =
      config.spec.within.is_discrete()
          ? LlrMatrix(graph, llr_table(config.spec.within, config.spec.between))
          : LlrMatrix(graph, config.spec.within, config.spec.between);

  TrialRecord rec;
  std::optional<std::pair<long, long>> cert;
  if (m.all_finite()) {
    cert = swap_certificate(m, truth);
    rec.certificate_found = cert.has_value();
  }

  if (config.solver == SolverKind::certificate_only) {
    rec.recovered = !rec.certificate_found;
    if (cert) {
      Assignment swapped = truth;
      std::swap(swapped.classes[static_cast<std::size_t>(cert->first)],
                swapped.classes[static_cast<std::size_t>(cert->second)]);
      rec.score_gap = score(m, swapped) - score(m, truth);
    }
    return rec;
  }

  MLResult res;
  if (config.solver == SolverKind::exact) {
    res = exact_ml(m, config.spec.K, config.spec.n);
  } else {
    res = local_search_ml(m, config.spec.K, config.spec.n, config.restarts,
                          derive_stream(trial_seed, kSolverStream));
  }
  rec.hamming = hamming_mod_perm(res.assignment, truth, config.spec.K);
  rec.recovered = rec.hamming == 0;
  // equal scores (including matching infinities on degenerate models) mean
  // no gap; plain subtraction would turn inf - inf into nan
  const double truth_score = score(m, truth);
  rec.score_gap = res.score == truth_score ? 0.0 : res.score - truth_score;
  return rec;
}

}  // namespace

TrialRecord run_trial(const TrialConfig& config, long trial_index) {
  config.validate();
  if (trial_index < 0 || trial_index >= config.trials)
    throw validation_error("trial index out of range");
  try {
    return run_trial_impl(config, trial_index);
  } catch (const std::exception& e) {
    throw std::runtime_error("trial " + std::to_string(trial_index) + ": " +
                             e.what());
  }
}

WilsonInterval wilson_interval(long successes, long trials, double z) {
  if (trials < 1) throw validation_error("interval needs trials >= 1");
  if (successes < 0 || successes > trials)
    throw validation_error("successes must lie in 0..trials");
  if (!(z > 0.0)) throw validation_error("z must be positive");
  const double nt = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = phat + z2 / (2.0 * nt);
  const double spread =
      z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt));
  // the endpoints are exact at degenerate counts; sqrt roundoff would
  // otherwise leave them off by an ulp
  const double low =
      successes == 0 ? 0.0 : std::max(0.0, (center - spread) / denom);
  const double high =
      successes == trials ? 1.0 : std::min(1.0, (center + spread) / denom);
  return {low, high};
}

FailureEstimate estimate_failure(const TrialConfig& config) {
  config.validate();
  std::vector<TrialRecord> records(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, [&](long t) {
    records[static_cast<std::size_t>(t)] = run_trial(config, t);
  });
  FailureEstimate est;
  est.trials = config.trials;
  for (const TrialRecord& rec : records) {
    if (!rec.recovered) ++est.failures;
    if (rec.certificate_found) ++est.certificates;
  }
  est.failure_rate =
      static_cast<double>(est.failures) / static_cast<double>(est.trials);
  est.ci = wilson_interval(est.failures, est.trials);
  return est;
}

std::vector<SweepRow> sweep(const std::vector<TrialConfig>& grid) {
  if (grid.empty()) throw validation_error("sweep grid is empty");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const TrialConfig& cfg : grid) {
    SweepRow row;
    row.n = cfg.spec.n;
    row.K = cfg.spec.K;
    row.L = cfg.spec.within.is_discrete()
                ? static_cast<int>(cfg.spec.within.support_size()) - 1
                : 0;
    row.a = cfg.a;
    row.b = cfg.b;
    row.trials = cfg.trials;
    row.solver = to_string(cfg.solver);
    if (cfg.solver == SolverKind::local_search)
      row.solver += ":" + std::to_string(cfg.restarts);
    row.base_seed = cfg.base_seed;
    try {
      row.C = cfg.spec.within.is_discrete() && !cfg.a.empty()
                  ? threshold_statistic(cfg.a, cfg.b)
                  : kNan;
      try {
        row.I = renyi_half(cfg.spec.within, cfg.spec.between);
      } catch (const infinite_divergence&) {
        row.I = std::numeric_limits<double>::infinity();
      }
      row.n_I_over_log_n =
          cfg.spec.n >= 2 ? static_cast<double>(cfg.spec.n) * row.I /
                                std::log(static_cast<double>(cfg.spec.n))
                          : kNan;
      row.thm_bound = cfg.spec.K == 2
                          ? ml_failure_bound_k2(cfg.spec.n, row.I)
                          : ml_failure_bound_kcomm(cfg.spec.n, cfg.spec.K,
                                                   row.I);
      const FailureEstimate est = estimate_failure(cfg);
      row.failures = est.failures;
      row.failure_rate = est.failure_rate;
      row.ci_low = est.ci.low;
      row.ci_high = est.ci.high;
      row.certificate_rate = static_cast<double>(est.certificates) /
                             static_cast<double>(est.trials);
    } catch (const std::exception& e) {
      row.error = e.what();
      row.C = row.I = row.n_I_over_log_n = row.thm_bound = kNan;
      row.failures = 0;
      row.failure_rate = row.ci_low = row.ci_high = row.certificate_rate =
          kNan;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "n,K,L,a,b,C,I,n_I_over_log_n,thm_bound,trials,failures,failure_rate,"
      "ci_low,ci_high,certificate_rate,solver,base_seed\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.n) + ',' + std::to_string(r.K) + ',' +
           std::to_string(r.L) + ',';
    out += join_g9(r.a) + ',' + join_g9(r.b) + ',';
    out += fmt_g9(r.C) + ',' + fmt_g9(r.I) + ',' + fmt_g9(r.n_I_over_log_n) +
           ',' + fmt_g9(r.thm_bound) + ',';
    out += std::to_string(r.trials) + ',' + std::to_string(r.failures) + ',';
    out += fmt_g9(r.failure_rate) + ',' + fmt_g9(r.ci_low) + ',' +
           fmt_g9(r.ci_high) + ',' + fmt_g9(r.certificate_rate) + ',';
    out += r.solver + ',' + std::to_string(r.base_seed) + '\n';
  }
  return out;
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << sweep_csv(rows);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace wsbm
