#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsbm/bounds.hpp"
#include "wsbm/estimator.hpp"
#include "wsbm/graph.hpp"

namespace wsbm {

enum class SolverKind { exact, local_search, certificate_only };

std::string to_string(SolverKind s);

// One experiment: `trials` independent graphs from `spec`, each solved
// and compared against its planted assignment.
struct TrialConfig {
  ModelSpec spec;
  // intensity metadata for reporting: nonzero-label intensities for
  // discrete models, {mean, variance} per distribution for gaussian ones
  std::vector<double> a;
  std::vector<double> b;
  SolverKind solver = SolverKind::local_search;
  int restarts = 10;
  long trials = 1;
  std::uint64_t base_seed = 0;

  void validate() const;
};

// builders populating the reporting metadata consistently
TrialConfig config_from_family(const ScaledFamily& fam, int K);
TrialConfig config_from_censored(long n, double p, double q1, double q2);
TrialConfig config_from_gaussian(long n, int K, double mu, double sigma);

struct TrialRecord {
  bool recovered = false;          // hamming_mod_perm == 0 (see below)
  bool certificate_found = false;  // a strictly improving swap exists
  long hamming = -1;               // -1 when no estimate was computed
  double score_gap = 0.0;          // score(estimate) - score(truth)
};

// Run trial `trial_index` of the experiment. The trial seed is
// derive_stream(base_seed, trial_index), so records are reproducible
// individually and in any order. With solver == certificate_only no
// estimate is computed and `recovered` means "no certificate found"
// (exact ML provably fails whenever one exists; score_gap then reports
// the certified improvement). Errors carry the trial index.
TrialRecord run_trial(const TrialConfig& config, long trial_index);

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval for `successes` out of `trials` at z (default
// two-sided 95%).
WilsonInterval wilson_interval(long successes, long trials,
                               double z = 1.959963984540054);

struct FailureEstimate {
  long trials = 0;
  long failures = 0;        // trials with recovered == false
  long certificates = 0;    // trials with certificate_found == true
  double failure_rate = 0.0;
  WilsonInterval ci;
};

// All trials of one config, parallelized over trials; aggregation is
// order-independent, so the result is identical for any WSBM_THREADS.
FailureEstimate estimate_failure(const TrialConfig& config);

// One CSV row of a parameter sweep.
struct SweepRow {
  long n = 0;
  int K = 0;
  int L = 0;  // nonzero labels for discrete rows, 0 for gaussian
  std::vector<double> a;
  std::vector<double> b;
  double C = 0.0;
  double I = 0.0;
  double n_I_over_log_n = 0.0;
  double thm_bound = 0.0;
  long trials = 0;
  long failures = 0;
  double failure_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double certificate_rate = 0.0;
  std::string solver;
  std::uint64_t base_seed = 0;
  std::string error;  // non-empty if this row failed; numeric fields NaN
};

// Evaluate every config. A failing row is reported in its `error` field
// rather than aborting the sweep; an empty grid is an error.
std::vector<SweepRow> sweep(const std::vector<TrialConfig>& grid);

// Render rows in the fixed CSV schema
//   n,K,L,a,b,C,I,n_I_over_log_n,thm_bound,trials,failures,failure_rate,
//   ci_low,ci_high,certificate_rate,solver,base_seed
// with floats at 9 significant digits and vector fields joined by ';'.
std::string sweep_csv(const std::vector<SweepRow>& rows);

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows);

}  // namespace wsbm
