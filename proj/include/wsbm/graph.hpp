#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wsbm/distributions.hpp"

namespace wsbm {

// Model parameters: K equal communities of n nodes each, every node pair
// draws its edge weight from `within` when the endpoints share a community
// and from `between` otherwise.
struct ModelSpec {
  int K = 2;
  long n = 0;
  LabelDistribution within = LabelDistribution::discrete({1.0});
  LabelDistribution between = LabelDistribution::discrete({1.0});
  long node_cap = 20000;  // refuse graphs whose O(N^2) storage would explode

  long total_nodes() const { return static_cast<long>(K) * n; }
  void validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Community assignment: classes[i] in 1..K.
struct Assignment {
  std::vector<int> classes;

  long size() const { return static_cast<long>(classes.size()); }
  int operator[](long i) const { return classes[static_cast<std::size_t>(i)]; }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Nodes 0..n-1 in class 1, n..2n-1 in class 2, and so on.
Assignment ground_truth(int K, long n);

bool is_balanced(const Assignment& sigma, int K);

// Relabel classes by order of first appearance (node 0 gets class 1, the
// first node in a different class gets 2, ...). Canonical representative
// of the relabeling orbit, so equality after canonicalize() is equality
// mod permutation of class names.
Assignment canonicalize(const Assignment& sigma);

// Symmetric weight matrix with no self-loops, stored as the strict upper
// triangle: u16 labels for discrete models, f64 weights for gaussian.
class WeightedGraph {
 public:
  WeightedGraph(DistKind kind, long num_nodes, int num_labels);

  DistKind kind() const { return kind_; }
  long size() const { return num_nodes_; }
  int num_labels() const { return num_labels_; }  // L + 1; 0 for gaussian

  int label(long i, long j) const;     // discrete only
  double weight(long i, long j) const; // either kind; labels cast to double

  void set_label(long i, long j, int value);
  void set_weight(long i, long j, double value);

  // flat upper-triangle storage, for serialization
  const std::vector<std::uint16_t>& labels_flat() const { return labels_; }
  const std::vector<double>& weights_flat() const { return weights_; }
  std::vector<std::uint16_t>& labels_flat() { return labels_; }
  std::vector<double>& weights_flat() { return weights_; }

  static std::size_t tri_index(long i, long j, long num_nodes);

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  void check_pair(long i, long j) const;

  DistKind kind_ = DistKind::discrete;
  long num_nodes_ = 0;
  int num_labels_ = 0;
  std::vector<std::uint16_t> labels_;
  std::vector<double> weights_;
};

// Sample a graph and its planted assignment. Every node pair has its own
// counter RNG stream keyed by (seed, upper-triangle index), so the output
// is a pure function of (spec, seed): bit-identical across runs, platforms
// and thread counts, and unchanged if pairs were sampled in another order.
std::pair<WeightedGraph, Assignment> generate_wsbm(const ModelSpec& spec,
                                                   std::uint64_t seed);

// Censored two-community model on labels {0=unobserved, 1, 2}:
//   within  = (1-p, p(1-q1), p q1)
//   between = (1-p, p(1-q2), p q2)
ModelSpec censored_model(long n, double p, double q1, double q2);

// Submatrix-localization analogue (square blocks): within N(mu, sigma^2),
// between N(0, sigma^2).
ModelSpec submatrix_model(long n, int K, double mu, double sigma);

}  // namespace wsbm
