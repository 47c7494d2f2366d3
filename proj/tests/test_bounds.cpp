#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "wsbm/bounds.hpp"
#include "wsbm/rng.hpp"

using namespace wsbm;

namespace {

std::vector<double> random_intensities(CounterRng& rng, std::size_t size) {
  std::vector<double> v(size);
  for (double& x : v) x = 5.0 * rng.next_double();
  return v;
}

}  // namespace

TEST_CASE("two community failure bound") {
  // n = 2 has the single term k = 1: exp(2 (log 2 + 1) - 2 I) = 4 e^2 e^-2I
  const double base = 4.0 * std::exp(2.0);
  CHECK(std::abs(ml_failure_bound_k2(2, 0.0) - base) < 1e-12 * base);
  CHECK(std::abs(ml_failure_bound_k2(2, 0.0) - 29.556224395722598) < 1e-10);
  for (double I : {0.3, 1.0, 5.0}) {
    const double want = base * std::exp(-2.0 * I);
    CHECK(std::abs(ml_failure_bound_k2(2, I) - want) < 1e-12 * want);
  }
  CHECK(std::abs(ml_failure_bound_k2(2, 0.3) - 16.220799867378698) < 1e-12);

  SUBCASE("decreasing in the divergence") {
    double prev = std::numeric_limits<double>::infinity();
    for (double I = 0.0; I <= 2.0; I += 0.2) {
      const double value = ml_failure_bound_k2(10, I);
      CHECK(value < prev);
      CHECK(value > 0.0);
      prev = value;
    }
  }

  SUBCASE("strong divergence drives the bound to zero") {
    CHECK(ml_failure_bound_k2(50, 10.0) < 1e-300);
  }

  SUBCASE("preconditions") {
    CHECK_THROWS_AS(ml_failure_bound_k2(1, 0.5), validation_error);
    CHECK_THROWS_AS(ml_failure_bound_k2(10, -0.1), validation_error);
    CHECK_THROWS_AS(
        ml_failure_bound_k2(10, std::numeric_limits<double>::quiet_NaN()),
        validation_error);
  }
}

TEST_CASE("general K failure bound") {
  // n = 2, K = 2, I = 0: every m in 1..4 contributes min((8e/m)^m, 16) = 16
  CHECK(std::abs(ml_failure_bound_kcomm(2, 2, 0.0) - 64.0) < 1e-12 * 64.0);

  SUBCASE("decreasing in the divergence") {
    double prev = std::numeric_limits<double>::infinity();
    for (double I = 0.1; I <= 1.5; I += 0.2) {
      const double value = ml_failure_bound_kcomm(6, 3, I);
      CHECK(value < prev);
      prev = value;
    }
  }

  SUBCASE("strong divergence drives the bound to zero") {
    CHECK(ml_failure_bound_kcomm(10, 2, 100.0) < 1e-300);
  }

  SUBCASE("preconditions") {
    CHECK_THROWS_AS(ml_failure_bound_kcomm(1, 2, 0.5), validation_error);
    CHECK_THROWS_AS(ml_failure_bound_kcomm(10, 1, 0.5), validation_error);
    CHECK_THROWS_AS(ml_failure_bound_kcomm(10, 2, -1.0), validation_error);
  }
}

TEST_CASE("threshold statistic") {
  const std::vector<double> nine = {9.0}, one = {1.0};
  CHECK(threshold_statistic(nine, one) == 4.0);  // (3 - 1)^2
  CHECK(threshold_statistic(one, one) == 0.0);
  const std::vector<double> ab = {4.0, 1.0}, ba = {1.0, 4.0};
  CHECK(threshold_statistic(ab, ba) == 2.0);

  CHECK_THROWS_AS(threshold_statistic({}, {}), validation_error);
  CHECK_THROWS_AS(threshold_statistic(ab, one), validation_error);
  const std::vector<double> neg = {-1.0};
  CHECK_THROWS_AS(threshold_statistic(neg, one), validation_error);

  SUBCASE("dominates the single label collapse") {
    // Cauchy-Schwarz: collapsing all labels into one can only shrink it
    CounterRng rng(0xb0u, 1);
    for (int it = 0; it < 1000; ++it) {
      const std::size_t size = 1 + it % 4;
      const auto a = random_intensities(rng, size);
      const auto b = random_intensities(rng, size);
      double ua = 0.0, ub = 0.0;
      for (double x : a) ua += x;
      for (double x : b) ub += x;
      const double collapsed =
          (std::sqrt(ua) - std::sqrt(ub)) * (std::sqrt(ua) - std::sqrt(ub));
      CHECK(threshold_statistic(a, b) >= collapsed - 1e-12);
    }
  }

  SUBCASE("appending labels never shrinks it") {
    CounterRng rng(0xb0u, 2);
    for (int it = 0; it < 1000; ++it) {
      auto a = random_intensities(rng, 1 + it % 3);
      auto b = random_intensities(rng, a.size());
      const double before = threshold_statistic(a, b);
      const auto extra_a = random_intensities(rng, 2);
      const auto extra_b = random_intensities(rng, 2);
      a.insert(a.end(), extra_a.begin(), extra_a.end());
      b.insert(b.end(), extra_b.begin(), extra_b.end());
      CHECK(threshold_statistic(a, b) >= before - 1e-12);
    }
  }
}

TEST_CASE("censored observation statistic") {
  const long n = 100;
  const double p = std::log(100.0) / 100.0;

  CHECK(censored_stat(n, p, 0.4, 0.4) == 0.0);
  CHECK(std::abs(censored_stat(n, p, 0.0, 1.0) - 2.0) < 1e-15);
  // 2 (sqrt(3)/2 - 1/2)^2 = 2 - sqrt(3)
  CHECK(std::abs(censored_stat(n, p, 0.25, 0.75) - 0.2679491924311227) <
        1e-14);
  CHECK(std::abs(censored_stat(n, p, 0.25, 0.75) -
                 (2.0 - std::sqrt(3.0))) < 1e-14);
  // linear in the observation probability
  CHECK(std::abs(censored_stat(n, 2.0 * p, 0.25, 0.75) -
                 2.0 * censored_stat(n, p, 0.25, 0.75)) < 1e-15);

  SUBCASE("matches the scaled family statistic of the induced intensities") {
    CounterRng rng(0xce0u, 3);
    for (int it = 0; it < 100; ++it) {
      const long nn = 10 + static_cast<long>(rng.next_u64() % 500);
      const double pp = rng.next_double();
      const double q1 = rng.next_double();
      const double q2 = rng.next_double();
      const double scale =
          pp * static_cast<double>(nn) / std::log(static_cast<double>(nn));
      const std::vector<double> a = {scale * (1.0 - q1), scale * q1};
      const std::vector<double> b = {scale * (1.0 - q2), scale * q2};
      CHECK(std::abs(censored_stat(nn, pp, q1, q2) -
                     threshold_statistic(a, b)) < 1e-12);
    }
  }

  SUBCASE("preconditions") {
    CHECK_THROWS_AS(censored_stat(1, 0.5, 0.1, 0.9), validation_error);
    CHECK_THROWS_AS(censored_stat(100, -0.1, 0.1, 0.9), validation_error);
    CHECK_THROWS_AS(censored_stat(100, 1.1, 0.1, 0.9), validation_error);
    CHECK_THROWS_AS(censored_stat(100, 0.5, -0.1, 0.9), validation_error);
    CHECK_THROWS_AS(censored_stat(100, 0.5, 0.1, 1.9), validation_error);
  }
}

TEST_CASE("verdict classification") {
  CHECK(verdict_from_stat(1.0 + 1e-8) == Verdict::achievable);
  CHECK(verdict_from_stat(1.0 - 1e-8) == Verdict::impossible);
  CHECK(verdict_from_stat(1.0) == Verdict::boundary);
  CHECK(verdict_from_stat(1.0 + 1e-10) == Verdict::boundary);
  CHECK(verdict_from_stat(1.0 - 1e-10) == Verdict::boundary);
  CHECK(verdict_from_stat(1.05, 0.1) == Verdict::boundary);
  CHECK(verdict_from_stat(1.2, 0.1) == Verdict::achievable);
  CHECK_THROWS_AS(
      verdict_from_stat(std::numeric_limits<double>::quiet_NaN()),
      validation_error);

  CHECK(to_string(Verdict::achievable) == "achievable");
  CHECK(to_string(Verdict::impossible) == "impossible");
  CHECK(to_string(Verdict::boundary) == "boundary");
}

TEST_CASE("recovery regime ratio") {
  const double s = std::log(500.0) / 500.0;
  const RegimeReport at = recovery_regime(s, 500);
  CHECK(std::abs(at.ratio - 1.0) < 1e-12);
  CHECK(at.verdict == Verdict::boundary);

  const RegimeReport above = recovery_regime(2.0 * s, 500);
  CHECK(std::abs(above.ratio - 2.0) < 1e-12);
  CHECK(above.verdict == Verdict::achievable);

  const RegimeReport below = recovery_regime(0.5 * s, 500);
  CHECK(below.verdict == Verdict::impossible);

  // gaussian blocks with mu = 0.2, sigma = 1 at n = 1000: I = 0.01
  const RegimeReport gauss = recovery_regime(0.01, 1000);
  CHECK(std::abs(gauss.ratio - 10.0 / std::log(1000.0)) < 1e-12);
  CHECK(std::abs(gauss.ratio - 1.4476482730108393) < 1e-12);
  CHECK(gauss.verdict == Verdict::achievable);

  CHECK_THROWS_AS(recovery_regime(0.5, 1), validation_error);
  CHECK_THROWS_AS(recovery_regime(-0.5, 100), validation_error);
}

TEST_CASE("threshold report for a scaled family") {
  const ThresholdReport strong = threshold_report({{9.0}, {1.0}, 100});
  CHECK(strong.C == 4.0);
  CHECK(strong.verdict == Verdict::achievable);
  CHECK(strong.I > 0.0);
  // the finite-n ratio tracks C to first order; at n = 100 the next-order
  // term still contributes about 1.3, and it fades as n grows
  CHECK(std::abs(strong.n_I_over_log_n - 4.0) < 1.5);
  const ThresholdReport wide = threshold_report({{9.0}, {1.0}, 100000});
  CHECK(std::abs(wide.n_I_over_log_n - 4.0) < 0.05);

  // (sqrt 4 - sqrt 1)^2 = 1: exactly critical
  const ThresholdReport critical = threshold_report({{4.0}, {1.0}, 100});
  CHECK(critical.C == 1.0);
  CHECK(critical.verdict == Verdict::boundary);

  const ThresholdReport weak = threshold_report({{1.2}, {0.6}, 100});
  CHECK(std::abs(weak.C - 0.10294372515228594) < 1e-15);
  CHECK(weak.verdict == Verdict::impossible);

  CHECK_THROWS_AS(threshold_report({{9.0}, {1.0}, 1}), validation_error);
}
