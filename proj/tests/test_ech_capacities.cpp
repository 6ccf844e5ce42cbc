#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pfh/ech_capacities.hpp"

using namespace pfh;
using namespace pfh::ech;

TEST_SUITE("ech_capacities") {
  TEST_CASE("ball staircase against the m + n enumeration") {
    const auto ref = oracle::ball_staircase(2000);
    for (std::int64_t k = 0; k <= 2000; ++k) CHECK(ball_index(k) == ref[static_cast<std::size_t>(k)]);
    CHECK(ball_capacity(0, Rational(5)) == Rational(0));
    CHECK(ball_capacity(3, Rational(1)) == Rational(2));
    CHECK(ball_capacity(4, Rational(3, 2)) == Rational(3));
    CHECK_THROWS_AS(ball_index(-1), Error);
    CHECK_THROWS_AS(ball_index(kMaxBallK + 1), Error);
  }

  TEST_CASE("index inversion near int64 extremes uses integer checks") {
    for (std::int64_t d : {1000000LL, 2000000000LL, 2800000000LL}) {
      const std::int64_t lo = (d * d + d) / 2, hi = (d * d + 3 * d) / 2;
      CHECK(ball_index(lo) == d);
      CHECK(ball_index(hi) == d);
      CHECK(ball_index(hi + 1) == d + 1);
    }
  }

  TEST_CASE("staircase monotone with jumps of 0 or r") {
    const Rational r(7, 3);
    for (std::int64_t k = 0; k < 500; ++k) {
      const Rational step = ball_capacity(k + 1, r) - ball_capacity(k, r);
      CHECK((step == Rational(0) || step == r));
    }
  }

  TEST_CASE("union examples") {
    CHECK(union_capacity(BallUnion<Rational>{{Rational(1), Rational(1)}}, 3) == Rational(2));
    CHECK(union_capacity(BallUnion<Rational>{{Rational(1), Rational(2)}}, 1) == Rational(2));
    const BallUnion<Rational> single{{Rational(3, 2)}};
    for (std::int64_t k = 0; k < 50; ++k) CHECK(union_capacity(single, k) == ball_capacity(k, Rational(3, 2)));
    CHECK_THROWS_AS(BallUnion<Rational>{}.validate(), Error);
    CHECK_THROWS_AS((BallUnion<Rational>{{Rational(1), Rational(0)}}.validate()), Error);
  }

  TEST_CASE("union DP equals composition enumeration") {
    const std::vector<Rational> radii{Rational(1), Rational(5, 2), Rational(2, 3)};
    for (std::size_t n = 1; n <= 3; ++n) {
      const BallUnion<Rational> x{{radii.begin(), radii.begin() + static_cast<long>(n)}};
      const auto dp = union_capacities(x, 25);
      for (std::int64_t k = 0; k <= 25; ++k) CHECK(dp[static_cast<std::size_t>(k)] == oracle::union_capacity_bruteforce(x.radii, k));
    }
  }

  TEST_CASE("superadditivity across a disjoint union and sublinearity") {
    const BallUnion<Rational> x{{Rational(1), Rational(1, 2)}};
    const BallUnion<Rational> y{{Rational(2)}};
    const BallUnion<Rational> xy{{Rational(1), Rational(1, 2), Rational(2)}};
    const auto cx = union_capacities(x, 30);
    const auto cy = union_capacities(y, 30);
    const auto cxy = union_capacities(xy, 60);
    for (std::size_t j = 0; j <= 30; ++j) {
      for (std::size_t k = 0; k <= 30; ++k) {
        CHECK(cxy[j + k] >= cx[j] + cy[k]);
        CHECK(cxy[j + k] <= cxy[j] + cxy[k]);
      }
    }
  }

  TEST_CASE("double scalars agree with rationals") {
    const BallUnion<double> xd{{1.0, 2.5, 0.75}};
    const BallUnion<Rational> xr{{Rational(1), Rational(5, 2), Rational(3, 4)}};
    const auto d = union_capacities(xd, 100);
    const auto r = union_capacities(xr, 100);
    for (std::size_t k = 0; k <= 100; ++k) CHECK(d[k] == doctest::Approx(to_double(r[k])).epsilon(1e-12));
  }

  TEST_CASE("Weyl ratio") {
    const BallUnion<Rational> b1{{Rational(1)}};
    CHECK(weyl_ratio(b1, 1) == Rational(1));
    const double r10k = to_double(weyl_ratio(b1, 10000));
    CHECK(std::abs(r10k - 2.0) <= 5.0 / 100.0);
    const BallUnion<Rational> b3{{Rational(3)}};
    for (std::int64_t k : {1, 7, 100, 999}) CHECK(weyl_ratio(b3, k) == Rational(9) * weyl_ratio(b1, k));
    CHECK_THROWS_AS(weyl_ratio(b1, 0), Error);
  }

  TEST_CASE("empirical Weyl envelope for unions") {
    // |c_k^2 / k - 4 vol| <= 6 max(r) sqrt(sum r^2) / sqrt(k) for k >= 100
    const std::vector<std::vector<double>> sets{{1.0}, {1.0, 1.0}, {1.0, 2.0}, {0.5, 1.0, 1.5}, {3.0, 0.2}};
    for (const auto& radii : sets) {
      const BallUnion<double> x{radii};
      const auto c = union_capacities(x, 3000);
      double s2 = 0.0;
      for (double r : radii) s2 += r * r;
      const double cx = 6.0 * x.max_radius() * std::sqrt(s2);
      for (std::int64_t k = 100; k <= 3000; ++k) {
        const double ratio = c[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(k)] / static_cast<double>(k);
        CHECK(std::abs(ratio - 4.0 * x.volume()) <= cx / std::sqrt(static_cast<double>(k)));
      }
    }
  }

  TEST_CASE("gap ball radius") {
    CHECK(gap_ball_radius(Rational(1, 10), Rational(1, 2), Rational(1, 5)) == Rational(1, 10));
    CHECK(gap_ball_radius(Rational(1), Rational(1, 2), Rational(4)) == Rational(1));
    CHECK(gap_ball_radius(Rational(1), Rational(1, 2), Rational(0)) == Rational(0));
    CHECK(gap_ball_radius(0.3, 0.5, 0.2) <= gap_ball_radius(0.3, 0.5, 0.3));
    CHECK(gap_ball_radius(0.05, 0.5, 0.2) <= gap_ball_radius(0.3, 0.5, 0.2));
  }
}
