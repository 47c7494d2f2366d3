#pragma once

#include <stdexcept>
#include <string>

namespace wsbm {

// Bad arguments or malformed input (probabilities that don't sum to one,
// mismatched vector lengths, out-of-range parameters, unparseable files).
// The CLI maps this to exit code 1.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The order-1/2 Renyi divergence is genuinely +infinity because the two
// distributions share no mass. Distinct from a finite value that merely
// overflows double range.
class infinite_divergence : public std::domain_error {
 public:
  infinite_divergence()
      : std::domain_error(
            "Renyi divergence is infinite: distributions have disjoint "
            "support") {}
};

}  // namespace wsbm
