#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace wsbm {

// log(sum_i exp(x_i)) without overflow; -inf for an empty list.
inline double log_sum_exp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;  // empty, or all -inf
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

}  // namespace wsbm
