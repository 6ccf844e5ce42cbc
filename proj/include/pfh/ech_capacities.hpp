// ECH capacities of balls and disjoint unions of balls.
//
// c_k(B(r)) = d r with d the unique integer with d^2 + d <= 2k <= d^2 + 3d;
// for a disjoint union, c_k is the max over splittings k = k_1 + ... + k_n of
// sum_i c_{k_i}(B(r_i)). Scalars are either exact rationals or doubles.
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "pfh/common.hpp"

namespace pfh::ech {

/// Keeps (d + 1)^2 + (d + 1) inside int64 during the inversion.
inline constexpr std::int64_t kMaxBallK = 4'000'000'000'000'000'000;

/// The staircase index d for k, integer arithmetic only.
std::int64_t ball_index(std::int64_t k);

template <class T>
T ball_capacity(std::int64_t k, const T& r) {
  return T(ball_index(k)) * r;
}

template <class T>
struct BallUnion {
  std::vector<T> radii;

  void validate() const {
    require(!radii.empty(), ErrorKind::validation, "ball union needs at least one ball");
    for (const T& r : radii) require(r > T(0), ErrorKind::validation, "ball radii must be positive");
  }
  T volume() const {
    T v(0);
    for (const T& r : radii) v += r * r / T(2);
    return v;
  }
  T max_radius() const { return *std::max_element(radii.begin(), radii.end()); }
};

/// c_0..c_kmax of the union, folding in one ball at a time (O(n k^2)).
template <class T>
std::vector<T> union_capacities(const BallUnion<T>& x, std::int64_t kmax) {
  x.validate();
  require(kmax >= 0, ErrorKind::validation, "k must be nonnegative");
  const auto n = static_cast<std::size_t>(kmax) + 1;
  std::vector<T> best(n);
  for (std::size_t j = 0; j < n; ++j) best[j] = ball_capacity(static_cast<std::int64_t>(j), x.radii.front());
  std::vector<T> next(n);
  for (std::size_t b = 1; b < x.radii.size(); ++b) {
    std::vector<T> ball(n);
    for (std::size_t j = 0; j < n; ++j) ball[j] = ball_capacity(static_cast<std::int64_t>(j), x.radii[b]);
    for (std::size_t j = 0; j < n; ++j) {
      T m = best[j] + ball[0];
      for (std::size_t i = 1; i <= j; ++i) m = std::max(m, best[j - i] + ball[i]);
      next[j] = m;
    }
    best.swap(next);
  }
  return best;
}

template <class T>
T union_capacity(const BallUnion<T>& x, std::int64_t k) {
  return union_capacities(x, k).back();
}

/// c_k^2 / k, which tends to 4 vol(X).
template <class T>
T weyl_ratio(const BallUnion<T>& x, std::int64_t k) {
  require(k >= 1, ErrorKind::validation, "weyl ratio needs k >= 1");
  const T c = x.radii.size() == 1 ? ball_capacity(k, x.radii.front()) : union_capacity(x, k);
  return c * c / T(k);
}

/// Ball parameter that fits in the polydisk P(a, delta l) of the graph cobordism.
template <class T>
T gap_ball_radius(const T& a, const T& l, const T& delta) {
  require(a > T(0) && l > T(0) && delta >= T(0), ErrorKind::validation, "gap ball needs a, l > 0 and delta >= 0");
  return std::min(delta * l, a);
}

/// Unions with more than one ball are limited to this k (DP cost grows like k^2).
inline constexpr std::int64_t kMaxUnionK = 5000;

}  // namespace pfh::ech
