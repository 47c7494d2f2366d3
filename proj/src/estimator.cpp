#include "wsbm/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wsbm/rng.hpp"

namespace wsbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// swaps with gain below this are treated as ties; keeps accumulated
// floating-point drift in the maintained row sums from cycling the climb
constexpr double kSwapGainTol = 1e-12;

void check_assignment(long num_nodes, const Assignment& sigma, int K) {
  if (sigma.size() != num_nodes)
    throw validation_error("assignment length does not match graph");
  for (int c : sigma.classes)
    if (c < 1 || c > K)
      throw validation_error("assignment class out of range 1..K");
}

// per-node per-class sums R[i][c] = sum of w(i,k) over k != i in class c
std::vector<double> class_row_sums(const LlrMatrix& m, const Assignment& sigma,
                                   int K) {
  const long N = m.size();
  std::vector<double> r(static_cast<std::size_t>(N) * K, 0.0);
  for (long i = 0; i < N; ++i) {
    for (long j = i + 1; j < N; ++j) {
      const double w = m.at(i, j);
      r[static_cast<std::size_t>(i) * K + (sigma[j] - 1)] += w;
      r[static_cast<std::size_t>(j) * K + (sigma[i] - 1)] += w;
    }
  }
  return r;
}

}  // namespace

LlrMatrix::LlrMatrix(const WeightedGraph& g, const WeightTable& table) {
  if (g.kind() != DistKind::discrete)
    throw validation_error("weight table requires a discrete graph");
  if (static_cast<std::size_t>(g.num_labels()) != table.size())
    throw validation_error("weight table size does not match label set");
  num_nodes_ = g.size();
  values_.resize(g.labels_flat().size());
  for (std::size_t k = 0; k < values_.size(); ++k) {
    values_[k] = table.weights[g.labels_flat()[k]];
    if (!std::isfinite(values_[k])) all_finite_ = false;
  }
}

LlrMatrix::LlrMatrix(const WeightedGraph& g, const LabelDistribution& p,
                     const LabelDistribution& q) {
  if (g.kind() != DistKind::gaussian || p.is_discrete() || q.is_discrete())
    throw validation_error(
        "density-ratio weights require a gaussian graph and distributions");
  num_nodes_ = g.size();
  values_.resize(g.weights_flat().size());
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double x = g.weights_flat()[k];
    values_[k] = p.log_pdf(x) - q.log_pdf(x);
    if (!std::isfinite(values_[k])) all_finite_ = false;
  }
}

double ScoreValue::as_real() const {
  if (impossible) return -kInf;
  if (plus_inf > 0) return kInf;
  return finite;
}

ScoreValue score_value(const LlrMatrix& m, const Assignment& sigma) {
  const long N = m.size();
  if (sigma.size() != N)
    throw validation_error("assignment length does not match graph");
  ScoreValue sv;
  for (long i = 0; i < N; ++i) {
    for (long j = i + 1; j < N; ++j) {
      if (sigma[i] != sigma[j]) continue;
      const double w = m.at(i, j);
      if (w == kInf)
        ++sv.plus_inf;
      else if (w == -kInf)
        sv.impossible = true;
      else
        sv.finite += w;
    }
  }
  return sv;
}

double score(const LlrMatrix& m, const Assignment& sigma) {
  return score_value(m, sigma).as_real();
}

double score(const WeightedGraph& g, const WeightTable& table,
             const Assignment& sigma) {
  return score(LlrMatrix(g, table), sigma);
}

double num_balanced_classes(int K, long n) {
  if (K < 1 || n < 1) throw validation_error("need K >= 1 and n >= 1");
  const double nd = static_cast<double>(n);
  const double lg = std::lgamma(nd * K + 1.0) - K * std::lgamma(nd + 1.0) -
                    std::lgamma(static_cast<double>(K) + 1.0);
  return std::exp(lg);
}

namespace {

struct ExactSearch {
  const LlrMatrix& m;
  int K;
  long n;
  std::vector<int> cls;        // 0 = unassigned, else 1..K
  std::vector<long> chosen;    // scratch for the current class
  ScoreValue best;
  Assignment best_sigma;
  bool have_best = false;

  void leaf() {
    Assignment sigma;
    sigma.classes.assign(cls.begin(), cls.end());
    ScoreValue sv = score_value(m, sigma);
    // strict improvement keeps the first (lexicographically smallest)
    // maximizer, since classes are enumerated in lex order
    if (!have_best || best < sv) {
      best = sv;
      best_sigma = std::move(sigma);
      have_best = true;
    }
  }

  // fill class c with the least unassigned node plus n-1 companions,
  // chosen in lexicographic order
  void fill_class(int c) {
    if (c > K) {
      leaf();
      return;
    }
    std::vector<long> free;
    for (long i = 0; i < static_cast<long>(cls.size()); ++i)
      if (cls[static_cast<std::size_t>(i)] == 0) free.push_back(i);
    const long seed_node = free.front();
    cls[static_cast<std::size_t>(seed_node)] = c;
    chosen.clear();
    pick(c, free, 1, n - 1);
    cls[static_cast<std::size_t>(seed_node)] = 0;
  }

  void pick(int c, const std::vector<long>& free, std::size_t from,
            long remaining) {
    if (remaining == 0) {
      fill_class(c + 1);
      return;
    }
    for (std::size_t k = from;
         k + static_cast<std::size_t>(remaining) <= free.size(); ++k) {
      cls[static_cast<std::size_t>(free[k])] = c;
      pick(c, free, k + 1, remaining - 1);
      cls[static_cast<std::size_t>(free[k])] = 0;
    }
  }
};

}  // namespace

MLResult exact_ml(const LlrMatrix& m, int K, long n) {
  if (K < 2) throw validation_error("exact search needs K >= 2");
  if (n < 1) throw validation_error("exact search needs n >= 1");
  if (m.size() != static_cast<long>(K) * n)
    throw validation_error("graph size is not K*n");
  const double classes = num_balanced_classes(K, n);
  if (classes > 1e7)
    throw validation_error(
        "instance has about " + std::to_string(classes) +
        " assignment classes; exhaustive search is capped at 1e7, use "
        "local_search_ml");
  ExactSearch search{m, K, n,
                     std::vector<int>(static_cast<std::size_t>(m.size()), 0),
                     {}, {}, {}, false};
  search.fill_class(1);
  return MLResult{std::move(search.best_sigma), search.best.as_real(), 0};
}

MLResult exact_ml(const WeightedGraph& g, const WeightTable& table, int K,
                  long n) {
  return exact_ml(LlrMatrix(g, table), K, n);
}

namespace {

double finite_total(const LlrMatrix& m, const Assignment& sigma) {
  const long N = m.size();
  double t = 0.0;
  for (long i = 0; i < N; ++i)
    for (long j = i + 1; j < N; ++j)
      if (sigma[i] == sigma[j]) t += m.at(i, j);
  return t;
}

// one hill climb from `sigma`, mutating it in place; returns final score,
// never below the start's independently recomputed score
double climb(const LlrMatrix& m, Assignment& sigma, int K) {
  const long N = m.size();
  const Assignment start = sigma;
  const double start_t = finite_total(m, sigma);
  std::vector<double> r = class_row_sums(m, sigma, K);
  const auto row = [&](long i, int c) -> double& {
    return r[static_cast<std::size_t>(i) * K + (c - 1)];
  };
  for (;;) {
    double best_gain = kSwapGainTol;
    long bi = -1, bj = -1;
    for (long i = 0; i < N; ++i) {
      for (long j = i + 1; j < N; ++j) {
        const int ci = sigma[i], cj = sigma[j];
        if (ci == cj) continue;
        const double gain = row(i, cj) + row(j, ci) - row(i, ci) -
                            row(j, cj) - 2.0 * m.at(i, j);
        if (gain > best_gain) {
          best_gain = gain;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    const int ci = sigma[bi], cj = sigma[bj];
    for (long k = 0; k < N; ++k) {
      if (k == bi || k == bj) continue;
      const double wi = m.at(k, bi), wj = m.at(k, bj);
      row(k, ci) += wj - wi;
      row(k, cj) += wi - wj;
    }
    const double wij = m.at(bi, bj);
    row(bi, ci) += wij;  // j joined i's old class
    row(bi, cj) -= wij;
    row(bj, cj) += wij;
    row(bj, ci) -= wij;
    std::swap(sigma.classes[static_cast<std::size_t>(bi)],
              sigma.classes[static_cast<std::size_t>(bj)]);
  }
  // recompute; the maintained sums only guided the search. If their drift
  // ever let a non-improving swap through, fall back to the start.
  const double t = finite_total(m, sigma);
  if (t < start_t) {
    sigma = start;
    return start_t;
  }
  return t;
}

}  // namespace

MLResult local_search_ml(const LlrMatrix& m, int K, long n, int restarts,
                         std::uint64_t seed) {
  if (K < 2) throw validation_error("local search needs K >= 2");
  if (n < 1) throw validation_error("local search needs n >= 1");
  if (m.size() != static_cast<long>(K) * n)
    throw validation_error("graph size is not K*n");
  if (restarts < 1) throw validation_error("local search needs restarts >= 1");
  if (!m.all_finite())
    throw validation_error(
        "local search requires finite weights (mutually absolutely "
        "continuous distributions); use exact_ml");

  MLResult best;
  bool have_best = false;
  for (int rs = 0; rs < restarts; ++rs) {
    CounterRng rng(seed, static_cast<std::uint64_t>(rs));
    Assignment sigma = ground_truth(K, n);
    for (long i = sigma.size() - 1; i > 0; --i) {  // Fisher-Yates
      const long j = static_cast<long>(rng.next_u64() %
                                       static_cast<std::uint64_t>(i + 1));
      std::swap(sigma.classes[static_cast<std::size_t>(i)],
                sigma.classes[static_cast<std::size_t>(j)]);
    }
    const double t = climb(m, sigma, K);
    if (!have_best || t > best.score) {  // ties keep the earliest restart
      best = MLResult{canonicalize(sigma), t, restarts};
      have_best = true;
    }
  }
  return best;
}

MLResult local_search_ml(const WeightedGraph& g, const WeightTable& table,
                         int K, long n, int restarts, std::uint64_t seed) {
  return local_search_ml(LlrMatrix(g, table), K, n, restarts, seed);
}

long hamming_mod_perm(const Assignment& sigma, const Assignment& truth,
                      int K) {
  if (sigma.size() != truth.size())
    throw validation_error("assignments differ in length");
  if (K < 1 || K > 10)
    throw validation_error("relabeling search supports K in 1..10");
  check_assignment(sigma.size(), sigma, K);
  check_assignment(truth.size(), truth, K);
  std::vector<long> confusion(static_cast<std::size_t>(K) * K, 0);
  for (long i = 0; i < sigma.size(); ++i)
    ++confusion[static_cast<std::size_t>(sigma[i] - 1) * K + (truth[i] - 1)];
  std::vector<int> perm(static_cast<std::size_t>(K));
  std::iota(perm.begin(), perm.end(), 0);
  long best_match = -1;
  do {
    long match = 0;
    for (int c = 0; c < K; ++c)
      match += confusion[static_cast<std::size_t>(c) * K +
                         static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])];
    best_match = std::max(best_match, match);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sigma.size() - best_match;
}

std::optional<std::pair<long, long>> swap_certificate(
    const LlrMatrix& m, const Assignment& truth) {
  const long N = m.size();
  if (truth.size() != N)
    throw validation_error("assignment length does not match graph");
  if (!m.all_finite())
    throw validation_error(
        "swap certificate requires finite weights (mutually absolutely "
        "continuous distributions)");
  int K = 0;
  for (int c : truth.classes) {
    if (c < 1) throw validation_error("assignment class out of range");
    K = std::max(K, c);
  }
  const std::vector<double> r = class_row_sums(m, truth, K);
  const auto row = [&](long i, int c) {
    return r[static_cast<std::size_t>(i) * K + (c - 1)];
  };
  std::vector<std::vector<long>> members(static_cast<std::size_t>(K) + 1);
  for (long i = 0; i < N; ++i)
    members[static_cast<std::size_t>(truth[i])].push_back(i);
  for (int ca = 1; ca <= K; ++ca) {
    for (int cb = ca + 1; cb <= K; ++cb) {
      for (long i : members[static_cast<std::size_t>(ca)]) {
        for (long j : members[static_cast<std::size_t>(cb)]) {
          // S(i,A\{i}) = row(i,ca); S(i,B\{j}) = row(i,cb) - w(i,j); etc.
          // Discrete weights tie frequently, and a tie evaluated through
          // two differently-ordered sums can differ by ulps. Demanding the
          // same margin the hill climber uses keeps certificates sound: a
          // reported swap always survives a full rescore.
          const double lhs = row(i, ca) + row(j, cb);
          const double rhs = row(i, cb) + row(j, ca) - 2.0 * m.at(i, j);
          if (rhs - lhs > kSwapGainTol) return std::make_pair(i, j);
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::pair<long, long>> swap_certificate(
    const WeightedGraph& g, const WeightTable& table,
    const Assignment& truth) {
  return swap_certificate(LlrMatrix(g, table), truth);
}

}  // namespace wsbm
