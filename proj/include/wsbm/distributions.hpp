#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wsbm/errors.hpp"

namespace wsbm {

enum class DistKind { discrete, gaussian };

// An edge-weight distribution: either a pmf over the finite label set
// {0, 1, ..., L} or a Gaussian density. Immutable after construction.
class LabelDistribution {
 public:
  // probs must be non-negative and sum to 1 within 1e-12
  static LabelDistribution discrete(std::vector<double> probs);
  static LabelDistribution gaussian(double mean, double variance);

  DistKind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == DistKind::discrete; }

  // discrete accessors
  const std::vector<double>& probs() const;
  std::size_t support_size() const;  // L + 1

  // gaussian accessors
  double mean() const;
  double variance() const;
  double log_pdf(double x) const;

  friend bool operator==(const LabelDistribution&,
                         const LabelDistribution&) = default;

 private:
  LabelDistribution() = default;
  DistKind kind_ = DistKind::discrete;
  std::vector<double> probs_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

// Sparse two-distribution family scaled by log(n)/n: the zero label gets
// the leftover mass 1 - u*log(n)/n (within) or 1 - v*log(n)/n (between),
// and label l >= 1 gets a_l*log(n)/n resp. b_l*log(n)/n.
struct ScaledFamily {
  std::vector<double> a;  // within intensities, one per nonzero label
  std::vector<double> b;  // between intensities, same length
  long n = 0;             // community size the scaling refers to

  std::size_t num_labels() const { return a.size(); }  // L
  double u() const;                                    // sum of a
  double v() const;                                    // sum of b
  void validate() const;  // throws validation_error
};

// Log-likelihood-ratio weights d(l) = log(p(l)/q(l)), one per label.
// Entries are +inf where q(l) = 0 < p(l), -inf where p(l) = 0 < q(l),
// and 0 where both vanish; no clamping to finite stand-ins.
struct WeightTable {
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t l) const { return weights[l]; }
  bool all_finite() const;
};

// (within, between) pmfs of the scaled family at its n.
std::pair<LabelDistribution, LabelDistribution> make_scaled_discrete(
    const ScaledFamily& fam);

// Bhattacharyya coefficient sum_l sqrt(p(l) q(l)), or the analogous
// integral for a Gaussian pair (closed form). In [0, 1].
double bhattacharyya(const LabelDistribution& p, const LabelDistribution& q);

// Order-1/2 Renyi divergence I = -2 log BC(p, q), >= 0. Throws
// infinite_divergence when the supports are disjoint (BC = 0).
double renyi_half(const LabelDistribution& p, const LabelDistribution& q);

// Same divergence for a Gaussian pair via adaptive Simpson quadrature of
// sqrt(p(x) q(x)) over [min mean - 12 sigma_max, max mean + 12 sigma_max].
// Independent route used to cross-check the closed form.
double renyi_half_quadrature(const LabelDistribution& p,
                             const LabelDistribution& q,
                             double abs_tol = 1e-10);

// Leading-order divergence of the scaled family:
// sum_l (sqrt(a_l) - sqrt(b_l))^2 * log(n)/n.
double renyi_asymptotic(const ScaledFamily& fam);

// d(l) = log(p(l)/q(l)) per label, with the +-inf conventions above.
WeightTable llr_table(const LabelDistribution& p, const LabelDistribution& q);

// M(t) = (sum_l (p/q)^t q) * (sum_l (p/q)^(-t) p) for t in (0,1). Requires
// mutual absolute continuity (p(l) > 0 iff q(l) > 0) and discrete inputs.
// Convex in t, minimized at t = 1/2 where M = exp(-renyi_half).
double mgf(const LabelDistribution& p, const LabelDistribution& q, double t);

}  // namespace wsbm
