#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "wsbm/graph.hpp"

namespace wsbm {

// Pairwise log-likelihood-ratio weights w(i,j) = log(p(w_ij)/q(w_ij)) for
// one graph: the table lookup for discrete weights, the density ratio for
// gaussian ones. +-inf entries mark labels impossible under q resp. p.
class LlrMatrix {
 public:
  LlrMatrix(const WeightedGraph& g, const WeightTable& table);
  LlrMatrix(const WeightedGraph& g, const LabelDistribution& p,
            const LabelDistribution& q);

  long size() const { return num_nodes_; }
  bool all_finite() const { return all_finite_; }
  double at(long i, long j) const {
    return values_[WeightedGraph::tri_index(i, j, num_nodes_)];
  }

 private:
  long num_nodes_ = 0;
  bool all_finite_ = true;
  std::vector<double> values_;
};

// Likelihood score of an assignment with exact +-inf bookkeeping: a single
// -inf within-pair makes the assignment impossible (ranks below everything
// finite); otherwise +inf within-pairs dominate, then the finite part.
struct ScoreValue {
  bool impossible = false;
  long long plus_inf = 0;
  double finite = 0.0;

  double as_real() const;

  // worse-than ordering; impossible scores compare equal to each other
  friend bool operator<(const ScoreValue& x, const ScoreValue& y) {
    if (x.impossible != y.impossible) return x.impossible;
    if (x.impossible) return false;
    if (x.plus_inf != y.plus_inf) return x.plus_inf < y.plus_inf;
    return x.finite < y.finite;
  }
  friend bool operator==(const ScoreValue&, const ScoreValue&) = default;
};

ScoreValue score_value(const LlrMatrix& m, const Assignment& sigma);

// T(sigma) = sum of w(i,j) over within pairs, as a double (+-inf possible).
double score(const WeightedGraph& g, const WeightTable& table,
             const Assignment& sigma);
double score(const LlrMatrix& m, const Assignment& sigma);

struct MLResult {
  Assignment assignment;  // canonical form (see canonicalize)
  double score = 0.0;
  int restarts_used = 0;  // 0 for the exact solver
};

// Number of balanced assignments mod class relabeling:
// (nK)! / ((n!)^K K!), evaluated in floating point via lgamma.
double num_balanced_classes(int K, long n);

// Exhaustive maximizer of T over balanced assignments, one representative
// per relabeling class (canonical enumeration seeded on the least
// unassigned node). Ties go to the lexicographically smallest canonical
// assignment. Refuses instances with more than 1e7 classes; use
// local_search_ml for those.
MLResult exact_ml(const LlrMatrix& m, int K, long n);
MLResult exact_ml(const WeightedGraph& g, const WeightTable& table, int K,
                  long n);

// Randomized hill climb: from a uniformly shuffled balanced start, apply
// the best score-improving swap of two cross-class nodes until none
// improves; best of `restarts` independent starts. Deterministic given
// (m, K, n, restarts, seed). Requires a fully finite LlrMatrix.
MLResult local_search_ml(const LlrMatrix& m, int K, long n, int restarts,
                         std::uint64_t seed);
MLResult local_search_ml(const WeightedGraph& g, const WeightTable& table,
                         int K, long n, int restarts, std::uint64_t seed);

// Nodes misclassified by sigma relative to truth, minimized over the K!
// relabelings of sigma's classes.
long hamming_mod_perm(const Assignment& sigma, const Assignment& truth, int K);

// Searches for nodes i, j in different true communities with
//   S(i,A\{i}) + S(j,B\{j}) < S(i,B\{j}) + S(j,A\{i}),
// where S(i,H) sums w(i,k) over k in H. Swapping such a pair strictly
// raises the score, so the truth is not a maximizer and exact ML must
// land outside its relabeling orbit.
// Scans class pairs and node indices in increasing order and returns the
// first witness, or nullopt. Requires a fully finite LlrMatrix.
std::optional<std::pair<long, long>> swap_certificate(const LlrMatrix& m,
                                                      const Assignment& truth);
std::optional<std::pair<long, long>> swap_certificate(const WeightedGraph& g,
                                                      const WeightTable& table,
                                                      const Assignment& truth);

}  // namespace wsbm
