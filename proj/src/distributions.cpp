#include "wsbm/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include "wsbm/logsumexp.hpp"

namespace wsbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSumTol = 1e-12;

// log of the Bhattacharyya coefficient, computed in log space so that
// very small masses don't underflow. nullopt means BC = 0 exactly
// (no label carries mass under both distributions).
std::optional<double> log_bc_discrete(const std::vector<double>& p,
                                      const std::vector<double>& q) {
  std::vector<double> terms;
  terms.reserve(p.size());
  for (std::size_t l = 0; l < p.size(); ++l) {
    if (p[l] > 0.0 && q[l] > 0.0)
      terms.push_back(0.5 * (std::log(p[l]) + std::log(q[l])));
  }
  if (terms.empty()) return std::nullopt;
  return log_sum_exp(terms);
}

// Gaussian pair in closed form:
//   BC = sqrt(sigma1 sigma2 / vbar) * exp(-(mu1-mu2)^2 / (8 vbar)),
// vbar = (sigma1^2 + sigma2^2) / 2. Always positive.
double log_bc_gaussian(const LabelDistribution& p, const LabelDistribution& q) {
  const double vbar = 0.5 * (p.variance() + q.variance());
  const double dmu = p.mean() - q.mean();
  return 0.25 * (std::log(p.variance()) + std::log(q.variance())) -
         0.5 * std::log(vbar) - dmu * dmu / (8.0 * vbar);
}

std::optional<double> log_bc(const LabelDistribution& p,
                             const LabelDistribution& q) {
  if (p.kind() != q.kind())
    throw validation_error("cannot mix discrete and gaussian distributions");
  if (p.is_discrete()) {
    if (p.support_size() != q.support_size())
      throw validation_error("discrete distributions differ in support size");
    return log_bc_discrete(p.probs(), q.probs());
  }
  return log_bc_gaussian(p, q);
}

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double m, double b, double fa,
                        double fm, double fb, double whole, double tol,
                        int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol,
                          depth - 1) +
         adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol,
                          depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  return adaptive_simpson(f, a, m, b, fa, fm, fb, simpson(fa, fm, fb, b - a),
                          tol, 48);
}

}  // namespace

LabelDistribution LabelDistribution::discrete(std::vector<double> probs) {
  if (probs.empty())
    throw validation_error("discrete distribution needs at least one label");
  double sum = 0.0;
  for (double pr : probs) {
    if (!(pr >= 0.0))  // also rejects NaN
      throw validation_error("label probability must be >= 0, got " +
                             std::to_string(pr));
    sum += pr;
  }
  if (std::abs(sum - 1.0) > kSumTol)
    throw validation_error("label probabilities sum to " +
                           std::to_string(sum) + ", expected 1");
  LabelDistribution d;
  d.kind_ = DistKind::discrete;
  d.probs_ = std::move(probs);
  return d;
}

LabelDistribution LabelDistribution::gaussian(double mean, double variance) {
  if (!std::isfinite(mean) || !std::isfinite(variance))
    throw validation_error("gaussian parameters must be finite");
  if (variance <= 0.0)
    throw validation_error("gaussian variance must be positive, got " +
                           std::to_string(variance));
  LabelDistribution d;
  d.kind_ = DistKind::gaussian;
  d.mean_ = mean;
  d.variance_ = variance;
  return d;
}

const std::vector<double>& LabelDistribution::probs() const {
  if (!is_discrete())
    throw validation_error("probs() called on a gaussian distribution");
  return probs_;
}

std::size_t LabelDistribution::support_size() const {
  if (!is_discrete())
    throw validation_error("support_size() called on a gaussian distribution");
  return probs_.size();
}

double LabelDistribution::mean() const {
  if (is_discrete())
    throw validation_error("mean() called on a discrete distribution");
  return mean_;
}

double LabelDistribution::variance() const {
  if (is_discrete())
    throw validation_error("variance() called on a discrete distribution");
  return variance_;
}

double LabelDistribution::log_pdf(double x) const {
  if (is_discrete())
    throw validation_error("log_pdf() called on a discrete distribution");
  const double d = x - mean_;
  return -0.5 * std::log(2.0 * std::numbers::pi * variance_) -
         d * d / (2.0 * variance_);
}

double ScaledFamily::u() const {
  return std::accumulate(a.begin(), a.end(), 0.0);
}

double ScaledFamily::v() const {
  return std::accumulate(b.begin(), b.end(), 0.0);
}

void ScaledFamily::validate() const {
  if (a.empty()) throw validation_error("scaled family needs at least one nonzero label");
  if (a.size() != b.size())
    throw validation_error("scaled family intensity vectors differ in length");
  for (double x : a)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw validation_error("within intensity must be finite and >= 0");
  for (double x : b)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw validation_error("between intensity must be finite and >= 0");
  if (n < 1) throw validation_error("scaled family needs n >= 1");
  const double s = std::log(static_cast<double>(n)) / static_cast<double>(n);
  if (u() * s > 1.0)
    throw validation_error("within masses exceed 1: u*log(n)/n = " +
                           std::to_string(u() * s));
  if (v() * s > 1.0)
    throw validation_error("between masses exceed 1: v*log(n)/n = " +
                           std::to_string(v() * s));
}

bool WeightTable::all_finite() const {
  return std::all_of(weights.begin(), weights.end(),
                     [](double w) { return std::isfinite(w); });
}

std::pair<LabelDistribution, LabelDistribution> make_scaled_discrete(
    const ScaledFamily& fam) {
  fam.validate();
  const double s =
      std::log(static_cast<double>(fam.n)) / static_cast<double>(fam.n);
  auto build = [&](const std::vector<double>& intens) {
    std::vector<double> probs(intens.size() + 1);
    double mass = 0.0;
    for (std::size_t l = 0; l < intens.size(); ++l) {
      probs[l + 1] = intens[l] * s;
      mass += probs[l + 1];
    }
    probs[0] = std::max(0.0, 1.0 - mass);  // guard the u*s == 1 boundary
    return LabelDistribution::discrete(std::move(probs));
  };
  return {build(fam.a), build(fam.b)};
}

double bhattacharyya(const LabelDistribution& p, const LabelDistribution& q) {
  const auto lb = log_bc(p, q);
  if (!lb) return 0.0;
  return std::min(1.0, std::exp(*lb));
}

double renyi_half(const LabelDistribution& p, const LabelDistribution& q) {
  const auto lb = log_bc(p, q);
  if (!lb) throw infinite_divergence();
  return std::max(0.0, -2.0 * *lb);
}

double renyi_half_quadrature(const LabelDistribution& p,
                             const LabelDistribution& q, double abs_tol) {
  if (p.is_discrete() || q.is_discrete())
    throw validation_error("quadrature route only applies to gaussian pairs");
  const double smax = std::sqrt(std::max(p.variance(), q.variance()));
  const double lo = std::min(p.mean(), q.mean()) - 12.0 * smax;
  const double hi = std::max(p.mean(), q.mean()) + 12.0 * smax;
  const auto integrand = [&](double x) {
    return std::exp(0.5 * (p.log_pdf(x) + q.log_pdf(x)));
  };
  const double bc = integrate(integrand, lo, hi, abs_tol);
  if (!(bc > 0.0)) throw infinite_divergence();
  return std::max(0.0, -2.0 * std::log(std::min(1.0, bc)));
}

double renyi_asymptotic(const ScaledFamily& fam) {
  fam.validate();
  double c = 0.0;
  for (std::size_t l = 0; l < fam.a.size(); ++l) {
    const double d = std::sqrt(fam.a[l]) - std::sqrt(fam.b[l]);
    c += d * d;
  }
  return c * std::log(static_cast<double>(fam.n)) / static_cast<double>(fam.n);
}

WeightTable llr_table(const LabelDistribution& p, const LabelDistribution& q) {
  if (!p.is_discrete() || !q.is_discrete())
    throw validation_error("llr_table needs discrete distributions");
  if (p.support_size() != q.support_size())
    throw validation_error("discrete distributions differ in support size");
  WeightTable t;
  t.weights.resize(p.support_size());
  for (std::size_t l = 0; l < t.weights.size(); ++l) {
    const double pl = p.probs()[l];
    const double ql = q.probs()[l];
    if (pl > 0.0 && ql > 0.0)
      t.weights[l] = std::log(pl) - std::log(ql);
    else if (pl > 0.0)
      t.weights[l] = kInf;
    else if (ql > 0.0)
      t.weights[l] = -kInf;
    else
      t.weights[l] = 0.0;  // label unreachable under either distribution
  }
  return t;
}

double mgf(const LabelDistribution& p, const LabelDistribution& q, double t) {
  if (!p.is_discrete() || !q.is_discrete())
    throw validation_error("mgf needs discrete distributions");
  if (p.support_size() != q.support_size())
    throw validation_error("discrete distributions differ in support size");
  if (!(t > 0.0 && t < 1.0))
    throw validation_error("mgf order t must lie in (0,1), got " +
                           std::to_string(t));
  std::vector<double> fwd, bwd;  // t-tilted and (1-t)-tilted log terms
  fwd.reserve(p.support_size());
  bwd.reserve(p.support_size());
  for (std::size_t l = 0; l < p.support_size(); ++l) {
    const double pl = p.probs()[l];
    const double ql = q.probs()[l];
    if (pl == 0.0 && ql == 0.0) continue;
    if (pl == 0.0 || ql == 0.0)
      throw validation_error(
          "mgf requires mutual absolute continuity; label " +
          std::to_string(l) + " has mass under only one distribution");
    const double llr = std::log(pl) - std::log(ql);
    fwd.push_back(t * llr + std::log(ql));
    bwd.push_back(-t * llr + std::log(pl));
  }
  return std::exp(log_sum_exp(fwd) + log_sum_exp(bwd));
}

}  // namespace wsbm
