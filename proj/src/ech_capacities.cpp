#include "pfh/ech_capacities.hpp"

#include <cmath>

namespace pfh::ech {

std::int64_t ball_index(std::int64_t k) {
  require(k >= 0, ErrorKind::validation, "k must be nonnegative");
  require(k <= kMaxBallK, ErrorKind::validation, "k too large for 64-bit index inversion");
  // d is the largest integer with d^2 + d <= 2k; start from the float guess and fix it up
  auto guess = static_cast<std::int64_t>((std::sqrt(1.0 + 8.0 * static_cast<double>(k)) - 1.0) / 2.0);
  while (guess > 0 && guess * guess + guess > 2 * k) --guess;
  while ((guess + 1) * (guess + 1) + (guess + 1) <= 2 * k) ++guess;
  require(guess * guess + guess <= 2 * k && 2 * k <= guess * guess + 3 * guess, ErrorKind::evaluation,
          "ball index inversion failed");
  return guess;
}

}  // namespace pfh::ech
