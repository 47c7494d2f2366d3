#include "wsbm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsbm/rng.hpp"

namespace wsbm {

void ModelSpec::validate() const {
  if (K < 2) throw validation_error("model needs K >= 2 communities");
  if (n < 1) throw validation_error("model needs community size n >= 1");
  if (within.kind() != between.kind())
    throw validation_error("within/between distributions must share a kind");
  if (within.is_discrete() &&
      within.support_size() != between.support_size())
    throw validation_error("within/between label sets differ in size");
  if (within.is_discrete() && within.support_size() > 65536)
    throw validation_error("label set too large for u16 storage");
  if (node_cap < 1) throw validation_error("node cap must be positive");
  if (total_nodes() > node_cap)
    throw validation_error("graph of " + std::to_string(total_nodes()) +
                           " nodes exceeds cap " + std::to_string(node_cap));
}

Assignment ground_truth(int K, long n) {
  Assignment sigma;
  sigma.classes.resize(static_cast<std::size_t>(K) * n);
  for (long i = 0; i < static_cast<long>(sigma.classes.size()); ++i)
    sigma.classes[static_cast<std::size_t>(i)] = static_cast<int>(i / n) + 1;
  return sigma;
}

bool is_balanced(const Assignment& sigma, int K) {
  if (K < 1 || sigma.size() % K != 0) return false;
  std::vector<long> counts(static_cast<std::size_t>(K), 0);
  for (int c : sigma.classes) {
    if (c < 1 || c > K) return false;
    ++counts[static_cast<std::size_t>(c - 1)];
  }
  const long n = sigma.size() / K;
  return std::all_of(counts.begin(), counts.end(),
                     [n](long c) { return c == n; });
}

Assignment canonicalize(const Assignment& sigma) {
  std::vector<int> rename(sigma.classes.size() + 1, 0);
  Assignment out;
  out.classes.resize(sigma.classes.size());
  int next = 0;
  for (std::size_t i = 0; i < sigma.classes.size(); ++i) {
    const int c = sigma.classes[i];
    if (rename[static_cast<std::size_t>(c)] == 0)
      rename[static_cast<std::size_t>(c)] = ++next;
    out.classes[i] = rename[static_cast<std::size_t>(c)];
  }
  return out;
}

WeightedGraph::WeightedGraph(DistKind kind, long num_nodes, int num_labels)
    : kind_(kind), num_nodes_(num_nodes), num_labels_(num_labels) {
  if (num_nodes < 1) throw validation_error("graph needs at least one node");
  const std::size_t pairs =
      static_cast<std::size_t>(num_nodes) * (num_nodes - 1) / 2;
  if (kind == DistKind::discrete) {
    if (num_labels < 1 || num_labels > 65536)
      throw validation_error("discrete graph needs 1..65536 labels");
    labels_.assign(pairs, 0);
  } else {
    num_labels_ = 0;
    weights_.assign(pairs, 0.0);
  }
}

std::size_t WeightedGraph::tri_index(long i, long j, long num_nodes) {
  if (i > j) std::swap(i, j);
  // row i of the strict upper triangle starts after i rows of lengths
  // (num_nodes-1), (num_nodes-2), ...
  return static_cast<std::size_t>(i) * (2 * num_nodes - i - 1) / 2 +
         static_cast<std::size_t>(j - i - 1);
}

void WeightedGraph::check_pair(long i, long j) const {
  if (i == j) throw validation_error("self-loops are not represented");
  if (i < 0 || j < 0 || i >= num_nodes_ || j >= num_nodes_)
    throw validation_error("node index out of range");
}

int WeightedGraph::label(long i, long j) const {
  check_pair(i, j);
  if (kind_ != DistKind::discrete)
    throw validation_error("label() called on a gaussian graph");
  return labels_[tri_index(i, j, num_nodes_)];
}

double WeightedGraph::weight(long i, long j) const {
  check_pair(i, j);
  if (kind_ == DistKind::discrete)
    return static_cast<double>(labels_[tri_index(i, j, num_nodes_)]);
  return weights_[tri_index(i, j, num_nodes_)];
}

void WeightedGraph::set_label(long i, long j, int value) {
  check_pair(i, j);
  if (kind_ != DistKind::discrete)
    throw validation_error("set_label() called on a gaussian graph");
  if (value < 0 || value >= num_labels_)
    throw validation_error("label out of range");
  labels_[tri_index(i, j, num_nodes_)] = static_cast<std::uint16_t>(value);
}

void WeightedGraph::set_weight(long i, long j, double value) {
  check_pair(i, j);
  if (kind_ == DistKind::discrete)
    throw validation_error("set_weight() called on a discrete graph");
  weights_[tri_index(i, j, num_nodes_)] = value;
}

namespace {

// inverse-cdf draw; the final label absorbs any rounding slack
int draw_label(const std::vector<double>& cum, double unif) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), unif);
  const std::size_t idx = static_cast<std::size_t>(it - cum.begin());
  return static_cast<int>(std::min(idx, cum.size() - 1));
}

std::vector<double> cumulative(const std::vector<double>& probs) {
  std::vector<double> cum(probs.size());
  double acc = 0.0;
  for (std::size_t l = 0; l < probs.size(); ++l) {
    acc += probs[l];
    cum[l] = acc;
  }
  cum.back() = 1.0;  // close the rounding gap so draw_label never overruns
  return cum;
}

}  // namespace

std::pair<WeightedGraph, Assignment> generate_wsbm(const ModelSpec& spec,
                                                   std::uint64_t seed) {
  spec.validate();
  const long N = spec.total_nodes();
  const Assignment truth = ground_truth(spec.K, spec.n);

  if (spec.within.is_discrete()) {
    WeightedGraph g(DistKind::discrete, N,
                    static_cast<int>(spec.within.support_size()));
    const std::vector<double> cum_within = cumulative(spec.within.probs());
    const std::vector<double> cum_between = cumulative(spec.between.probs());
    for (long i = 0; i < N; ++i) {
      for (long j = i + 1; j < N; ++j) {
        CounterRng rng(seed, WeightedGraph::tri_index(i, j, N));
        const auto& cum = truth[i] == truth[j] ? cum_within : cum_between;
        g.set_label(i, j, draw_label(cum, rng.next_double()));
      }
    }
    return {std::move(g), truth};
  }

  WeightedGraph g(DistKind::gaussian, N, 0);
  const double sd_within = std::sqrt(spec.within.variance());
  const double sd_between = std::sqrt(spec.between.variance());
  for (long i = 0; i < N; ++i) {
    for (long j = i + 1; j < N; ++j) {
      CounterRng rng(seed, WeightedGraph::tri_index(i, j, N));
      const bool within = truth[i] == truth[j];
      const double mean = within ? spec.within.mean() : spec.between.mean();
      const double sd = within ? sd_within : sd_between;
      g.set_weight(i, j, mean + sd * rng.next_gaussian());
    }
  }
  return {std::move(g), truth};
}

ModelSpec censored_model(long n, double p, double q1, double q2) {
  if (!(p >= 0.0 && p <= 1.0))
    throw validation_error("censored model needs observation rate p in [0,1]");
  if (!(q1 >= 0.0 && q1 <= 1.0) || !(q2 >= 0.0 && q2 <= 1.0))
    throw validation_error("censored model needs flip rates q1, q2 in [0,1]");
  ModelSpec spec;
  spec.K = 2;
  spec.n = n;
  spec.within = LabelDistribution::discrete({1.0 - p, p * (1.0 - q1), p * q1});
  spec.between = LabelDistribution::discrete({1.0 - p, p * (1.0 - q2), p * q2});
  spec.validate();
  return spec;
}

ModelSpec submatrix_model(long n, int K, double mu, double sigma) {
  if (!(sigma > 0.0))
    throw validation_error("submatrix model needs sigma > 0");
  ModelSpec spec;
  spec.K = K;
  spec.n = n;
  spec.within = LabelDistribution::gaussian(mu, sigma * sigma);
  spec.between = LabelDistribution::gaussian(0.0, sigma * sigma);
  spec.validate();
  return spec;
}

}  // namespace wsbm
