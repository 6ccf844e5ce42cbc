#include <doctest.h>

#include "pfh/closing_bounds.hpp"

using namespace pfh;

namespace {

BoundInput input(Rational area, std::int64_t g, std::int64_t d0, Rational a, Rational l, Rational delta) {
  BoundInput in;
  in.area = area;
  in.genus = g;
  in.d0 = d0;
  in.a = a;
  in.l = l;
  in.delta = delta;
  return in;
}

Rational r(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

}  // namespace

TEST_SUITE("closing_bounds") {
  TEST_CASE("worked values") {
    const auto s = bound_sphere(input(r(1), 0, 1, r(1, 10), r(1, 2), r(1, 5)));
    CHECK(s.d == 10);
    CHECK(s.tau_bound == Rational(2, 11));
    CHECK(s.tau_bound <= r(1, 5));
    const auto t = bound_torus(input(r(1), 1, 1, r(1, 10), r(1, 2), r(1, 5)));
    CHECK(t.d == 11);
    const auto g = bound_general(input(r(2), 2, 3, r(1, 4), r(1, 2), r(1, 2)));
    CHECK(g.k == 4);
    CHECK(g.d == 12);
    // A / (d0 l delta) = 5 exactly
    const auto t5 = bound_torus(input(r(3), 1, 3, r(1, 2), r(1, 2), r(2, 5)));
    CHECK(t5.d == 6 * 3);
    // A = l delta n
    CHECK(bound_sphere(input(r(7, 2), 0, 1, r(1, 2), r(1, 2), r(1))).d == 7);
  }

  TEST_CASE("extreme delta meets the sharpness value") {
    // delta = a / l, A / a not an integer
    const auto s = bound_sphere(input(r(1), 0, 1, r(3, 10), r(1, 2), r(3, 5)));
    CHECK(s.d == 3);
  }

  TEST_CASE("hypothesis guards") {
    CHECK_THROWS_AS(bound_sphere(input(r(1), 0, 1, r(1, 10), r(1, 2), r(1, 4))), Error);
    try {
      bound_torus(input(r(1), 1, 1, r(1, 10), r(1, 2), r(1)));
      FAIL("expected a hypothesis error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::hypothesis);
    }
    CHECK_THROWS_AS(bound_sphere(input(r(1), 1, 1, r(1, 10), r(1, 2), r(1, 5))), Error);
    CHECK_THROWS_AS(bound_torus(input(r(1), 0, 1, r(1, 10), r(1, 2), r(1, 5))), Error);
    CHECK_THROWS_AS(bound_general(input(r(1), 0, 1, r(1, 10), r(1), r(1, 5))), Error);
    CHECK_THROWS_AS(bound_general(input(r(1), 0, 0, r(1, 10), r(1, 2), r(1, 5))), Error);
    CHECK_NOTHROW(bound_sphere(input(r(1), 0, 1, r(1, 10), r(1, 2), r(1, 5))));  // delta l = a accepted
  }

  TEST_CASE("monotonicity on a grid") {
    for (std::int64_t an = 1; an <= 6; ++an) {
      for (std::int64_t dn = 1; dn <= 6; ++dn) {
        const Rational a(an, 10), l(1, 3), delta(dn, 20);
        if (delta * l > a) continue;
        const auto base = bound_general(input(r(2), 1, 2, a, l, delta));
        if (delta + r(1, 20) <= a / l) CHECK(bound_general(input(r(2), 1, 2, a, l, delta + r(1, 20))).d <= base.d);
        CHECK(bound_general(input(r(3), 1, 2, a, l, delta)).d >= base.d);
        CHECK(bound_general(input(r(2), 2, 2, a, l, delta)).d >= base.d);
        CHECK(bound_general(input(r(2), 1, 2, a, l, delta)).k >= bound_general(input(r(2), 1, 4, a, l, delta)).k);
        CHECK(bound_general(input(r(2), 1, 2, a, r(1, 4), delta)).d >= base.d);
      }
    }
  }

  TEST_CASE("tau bound") {
    CHECK(tau_bound(Rational(0), Rational(1, 2)) == Rational(0));
    CHECK(tau_bound(Rational(1, 4), Rational(1, 2)) == Rational(1, 2));
    CHECK(tau_bound(0.3, 0.999999) == doctest::Approx(0.3).epsilon(1e-5));
    const auto b = bound_sphere(input(r(1), 0, 1, r(1, 10), r(1, 2), r(1, 5)));
    // gap <= A / (d - g + 1) composed with l^-1
    CHECK(tau_bound(Rational(1, b.d + 1), Rational(1, 2)) == b.tau_bound);
    CHECK_THROWS_AS(tau_bound(-1.0, 0.5), Error);
  }

  TEST_CASE("sharpness witness") {
    const auto w = sharpness_witness(r(1), r(3, 10));
    CHECK(w.n == 3);
    CHECK(w.disjoint);
    CHECK(w.area_u > 0.3);
    CHECK(w.samples == 10000);
    const auto one = sharpness_witness(r(1), r(3, 5));
    CHECK(one.n == 1);
    CHECK(one.disjoint);
    CHECK(sharpness_witness(r(1), r(1, 4) - r(1, 1000)).n == 4);
    CHECK_THROWS_AS(sharpness_witness(r(1), r(1)), Error);
    CHECK_THROWS_AS(sharpness_witness(r(1), r(1, 4)), Error);
  }
}
