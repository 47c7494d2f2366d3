#include "wsbm/bounds.hpp"

#include <cmath>
#include <vector>

#include "wsbm/logsumexp.hpp"

namespace wsbm {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::achievable: return "achievable";
    case Verdict::impossible: return "impossible";
    case Verdict::boundary: return "boundary";
  }
  return "boundary";
}

Verdict verdict_from_stat(double stat, double margin) {
  if (std::isnan(stat)) throw validation_error("threshold statistic is NaN");
  if (stat > 1.0 + margin) return Verdict::achievable;
  if (stat < 1.0 - margin) return Verdict::impossible;
  return Verdict::boundary;
}

double ml_failure_bound_k2(long n, double I) {
  if (n < 2) throw validation_error("failure bound needs n >= 2");
  if (!(I >= 0.0)) throw validation_error("divergence must be >= 0");
  const double nd = static_cast<double>(n);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n / 2));
  for (long k = 1; k <= n / 2; ++k) {
    const double kd = static_cast<double>(k);
    terms.push_back(2.0 * kd * (std::log(nd / kd) + 1.0) -
                    2.0 * kd * (nd - kd) * I);
  }
  return std::exp(log_sum_exp(terms));
}

double ml_failure_bound_kcomm(long n, int K, double I) {
  if (n < 2) throw validation_error("failure bound needs n >= 2");
  if (K < 2) throw validation_error("failure bound needs K >= 2");
  if (!(I >= 0.0)) throw validation_error("divergence must be >= 0");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(K);
  const long total = n * static_cast<long>(K);
  const double log_cap = nd * kd * std::log(kd);  // log K^(nK)
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(total));
  for (long m = 1; m <= total; ++m) {
    const double md = static_cast<double>(m);
    const double log_count =
        std::min(md * (1.0 + std::log(nd * kd * kd / md)), log_cap);
    const double log_decay = m <= n / 2 ? (-nd * md + md * md) * I
                                        : -2.0 * md * nd * I / 9.0;
    terms.push_back(log_count + log_decay);
  }
  return std::exp(log_sum_exp(terms));
}

double threshold_statistic(std::span<const double> a,
                           std::span<const double> b) {
  if (a.empty() || a.size() != b.size())
    throw validation_error(
        "threshold statistic needs non-empty intensity vectors of equal "
        "length");
  double c = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (!(a[l] >= 0.0) || !(b[l] >= 0.0))
      throw validation_error("intensities must be >= 0");
    const double d = std::sqrt(a[l]) - std::sqrt(b[l]);
    c += d * d;
  }
  return c;
}

double censored_stat(long n, double p, double q1, double q2) {
  if (n < 2) throw validation_error("censored statistic needs n >= 2");
  if (!(p >= 0.0 && p <= 1.0))
    throw validation_error("censored statistic needs p in [0,1]");
  if (!(q1 >= 0.0 && q1 <= 1.0) || !(q2 >= 0.0 && q2 <= 1.0))
    throw validation_error("censored statistic needs q1, q2 in [0,1]");
  const double d_obs = std::sqrt(1.0 - q1) - std::sqrt(1.0 - q2);
  const double d_flip = std::sqrt(q1) - std::sqrt(q2);
  return p * static_cast<double>(n) / std::log(static_cast<double>(n)) *
         (d_obs * d_obs + d_flip * d_flip);
}

RegimeReport recovery_regime(double I, long n, double margin) {
  if (n < 2) throw validation_error("recovery regime needs n >= 2");
  if (!(I >= 0.0)) throw validation_error("divergence must be >= 0");
  RegimeReport rep;
  rep.ratio = static_cast<double>(n) * I / std::log(static_cast<double>(n));
  rep.verdict = verdict_from_stat(rep.ratio, margin);
  return rep;
}

ThresholdReport threshold_report(const ScaledFamily& fam, double margin) {
  if (fam.n < 2)
    throw validation_error("threshold report needs n >= 2");
  const auto [within, between] = make_scaled_discrete(fam);
  ThresholdReport rep;
  rep.C = threshold_statistic(fam.a, fam.b);
  rep.I = renyi_half(within, between);
  rep.n_I_over_log_n = static_cast<double>(fam.n) * rep.I /
                       std::log(static_cast<double>(fam.n));
  rep.verdict = verdict_from_stat(rep.C, margin);
  return rep;
}

}  // namespace wsbm
