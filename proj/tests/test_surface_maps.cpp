#include <doctest.h>

#include <numbers>
#include <random>

#include "pfh/surface_maps.hpp"

using namespace pfh;

namespace {

Mat2i mat(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  Mat2i m;
  m << a, b, c, d;
  return m;
}

// central differences of a chart map
Mat2 fd_jacobian(const std::function<Vec2(const Vec2&)>& f, const Vec2& x, double h = 1e-6) {
  Mat2 j;
  for (int c = 0; c < 2; ++c) {
    Vec2 e = Vec2::Zero();
    e[c] = h;
    j.col(c) = (f(x + e) - f(x - e)) / (2 * h);
  }
  return j;
}

std::shared_ptr<const AdmissibleHamiltonian> torus_bump(double a = 0.05, double l = 0.5) {
  return std::make_shared<AdmissibleHamiltonian>(
      build_admissible(SurfaceSpec::torus(), Region::disk(Vec2(0.5, 0.5), 0.25), a, l));
}

}  // namespace

TEST_SUITE("surface_maps") {
  TEST_CASE("surface specs validate genus and area") {
    CHECK_THROWS_AS(SurfaceSpec::sphere(-1.0), Error);
    SurfaceSpec bad{0, 1.0, SurfaceKind::torus};
    CHECK_THROWS_AS(bad.validate(), Error);
    const auto t = SurfaceSpec::torus();
    CHECK(t.reduce(Vec2(1.25, -0.25)).isApprox(Vec2(0.25, 0.75)));
    CHECK(t.distance(Vec2(0.05, 0.95), Vec2(0.95, 0.05)) == doctest::Approx(std::sqrt(0.02)));
    const auto s = SurfaceSpec::sphere(2.0);
    CHECK(s.in_chart(Vec2(0.9, 3.7)));
    CHECK_FALSE(s.in_chart(Vec2(1.1, 0.0)));
  }

  TEST_CASE("vector field follows omega(X, .) = dH") {
    const ConstantHamiltonian c(3.0);
    CHECK(hamiltonian_vector_field(c, 0.2, Vec2(0.1, 0.4)).isZero());
    const LinearHamiltonian x2(0.0, 1.0);
    CHECK(hamiltonian_vector_field(x2, 0.0, Vec2(0.3, 0.3)).isApprox(Vec2(1.0, 0.0)));
    // omega(X, v) = X1 v2 - X2 v1 must equal dH(v)
    const FunctionHamiltonian f([](double, const Vec2& x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]); }, true);
    const Vec2 p(0.3, 0.7), v(0.6, -0.2);
    const Vec2 X = hamiltonian_vector_field(f, 0.0, p);
    const double h = 1e-6;
    const double dh = (f.value(0, p + h * v) - f.value(0, p - h * v)) / (2 * h);
    CHECK(X[0] * v[1] - X[1] * v[0] == doctest::Approx(dh).epsilon(1e-7));
  }

  TEST_CASE("bump gradient and hessian agree with finite differences") {
    const auto h = torus_bump();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.25, 0.75), t(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double tt = t(rng);
      const Vec2 x(u(rng), u(rng));
      const double step = 1e-5;
      Vec2 g;
      for (int c = 0; c < 2; ++c) {
        Vec2 e = Vec2::Zero();
        e[c] = step;
        g[c] = (h->value(tt, x + e) - h->value(tt, x - e)) / (2 * step);
      }
      CHECK((h->gradient(tt, x) - g).norm() < 1e-5);
      const Mat2 hess = fd_jacobian([&](const Vec2& y) { return h->gradient(tt, y); }, x, 1e-6);
      CHECK((h->hessian(tt, x) - hess).norm() < 1e-4);
    }
  }

  TEST_CASE("build_admissible enforces the parameter ranges") {
    const auto t = SurfaceSpec::torus();
    const Region u = Region::disk(Vec2(0.5, 0.5), std::sqrt(0.2 / std::numbers::pi));
    const auto h = build_admissible(t, u, 0.1, 0.5);
    const auto rep = h.validate();
    CHECK(rep.ok());
    CHECK(h.value(0.0, Vec2(0.5, 0.5)) == 0.0);
    CHECK(h.value(0.5, Vec2(0.5, 0.5)) >= 1.0);
    CHECK_THROWS_AS(build_admissible(t, u, 0.2, 0.5), Error);   // a = area(U)
    CHECK_THROWS_AS(build_admissible(t, u, 0.1, 1.0), Error);   // l = 1
    CHECK_THROWS_AS(build_admissible(t, u, -0.1, 0.5), Error);
    CHECK(h.disk().area() == doctest::Approx(0.1));
    CHECK(h.interval().second - h.interval().first == doctest::Approx(0.5));
  }

  TEST_CASE("time-one flows") {
    const auto t = SurfaceSpec::torus();
    const auto lin = std::make_shared<LinearHamiltonian>(0.0, 1.0);
    const auto zero = time_one_flow(t, lin, 0.0);
    CHECK(zero.lift(Vec2(0.2, 0.3)).isApprox(Vec2(0.2, 0.3)));
    const auto shift = time_one_flow(t, lin, 0.3);
    CHECK((shift.lift(Vec2(0.2, 0.3)) - Vec2(0.5, 0.3)).norm() < 1e-12);

    const auto h = torus_bump();
    const auto flow = time_one_flow(t, h, 0.05);
    const Vec2 outside(0.05, 0.1);
    CHECK(flow.lift(outside) == outside);
    // H is constant on the plateau, so only the annulus moves
    const Vec2 plateau(0.55, 0.5);
    CHECK((flow.lift(plateau) - plateau).norm() < 1e-14);
    const double r_mid = 0.5 * (h->radial().r_plateau + h->radial().r_support);
    const Vec2 annulus(0.5 + r_mid, 0.5);
    CHECK((flow.lift(annulus) - annulus).norm() > 1e-6);
  }

  TEST_CASE("flow composition for an autonomous bump") {
    const auto t = SurfaceSpec::torus();
    auto bump = std::make_shared<BumpHamiltonian>(t, Vec2(0.5, 0.5), RadialProfile{0.1, 0.25, 1.0}, TimeProfile::constant());
    FlowSettings fs;
    const auto f12 = time_one_flow(t, bump, 0.05, fs);
    const auto f1 = time_one_flow(t, bump, 0.02, fs);
    const auto f2 = time_one_flow(t, bump, 0.03, fs);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.3, 0.7);
    for (int i = 0; i < 50; ++i) {
      const Vec2 x(u(rng), u(rng));
      const double err = (f12.lift(x) - f2.lift(f1.lift(x))).norm();
      CHECK(err <= 10 * fs.step * fs.step);
    }
  }

  TEST_CASE("perturbed maps are area preserving") {
    const auto base = std::make_shared<AffineTorusMap>(AffineTorusMap::cat_map());
    const auto phi = compose_phi_H(base, torus_bump(), 0.08);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      const Vec2 x(u(rng), u(rng));
      worst = std::max(worst, std::abs(jacobian(phi, x, 1).determinant() - 1.0));
      const Mat2 fd = fd_jacobian([&](const Vec2& y) { return phi.lift(y); }, x, 1e-6);
      CHECK((fd - jacobian(phi, x, 1)).norm() < 1e-5);
    }
    CHECK(worst <= 1e-8);
    const auto same = compose_phi_H(base, torus_bump(), 0.0);
    CHECK(same.lift(Vec2(0.3, 0.6)).isApprox(base->lift(Vec2(0.3, 0.6))));
  }

  TEST_CASE("support locality for a rotated orbit") {
    const auto base = std::make_shared<AffineTorusMap>(Mat2i::Identity(), Vec2(0.5, 0.0));
    const auto h = std::make_shared<AdmissibleHamiltonian>(
        build_admissible(SurfaceSpec::torus(), Region::disk(Vec2(0.5, 0.5), 0.1), 0.01, 0.5));
    const auto phi = compose_phi_H(base, h, 0.05);
    const Vec2 p(0.1, 0.1);
    CHECK(phi(p).isApprox(Vec2(0.6, 0.1)));
    CHECK(phi(phi(p)).isApprox(p));
  }

  TEST_CASE("jacobians and classification") {
    const auto cat = AffineTorusMap::cat_map();
    CHECK(jacobian(cat, Vec2(0.3, 0.1), 1) == cat.matrix().cast<double>());
    CHECK(jacobian(cat, Vec2(0.3, 0.1), 2) == mat(5, 3, 3, 2).cast<double>());
    CHECK(jacobian(AffineTorusMap::identity(), Vec2(0.4, 0.4), 7) == Mat2::Identity());
    CHECK_THROWS_AS(AffineTorusMap(mat(2, 0, 0, 1), Vec2::Zero()), Error);

    const auto c = classify_periodic_point(cat, Vec2::Zero(), 1);
    CHECK(c.nondegenerate);
    CHECK(c.hyperbolic);
    CHECK(c.eigenvalues[1].real() == doctest::Approx((3 + std::sqrt(5.0)) / 2));
    CHECK(c.eigenvalues[0].real() == doctest::Approx((3 - std::sqrt(5.0)) / 2));
    CHECK_FALSE(classify_periodic_point(AffineTorusMap::identity(), Vec2(0.2, 0.2), 1).nondegenerate);
    const auto quarter = classify_matrix(mat(0, -1, 1, 0).cast<double>());
    CHECK(quarter.nondegenerate);
    CHECK_FALSE(quarter.hyperbolic);
    CHECK(std::abs(quarter.eigenvalues[1].imag()) == doctest::Approx(1.0));
    CHECK_THROWS_AS(classify_periodic_point(cat, Vec2(0.3, 0.1), 1), Error);

    // agreement with exact eigenvalues of A^k
    for (int k = 1; k <= 4; ++k) {
      Mat2i p = Mat2i::Identity();
      for (int i = 0; i < k; ++i) p = p * cat.matrix();
      const double tr = static_cast<double>(p.trace());
      const auto ck = classify_periodic_point(cat, Vec2::Zero(), k);
      CHECK(ck.eigenvalues[1].real() == doctest::Approx((tr + std::sqrt(tr * tr - 4)) / 2));
    }
  }

  TEST_CASE("lifted iterates keep the deck action") {
    const auto cat = AffineTorusMap::cat_map();
    const Vec2 x(0.7, 0.9);
    const Vec2 y = iterate_lift(cat, x, 3);
    const Mat2 a3 = (cat.matrix() * cat.matrix() * cat.matrix()).cast<double>();
    CHECK((y - a3 * x).norm() < 1e-12);
  }

  TEST_CASE("sphere rotation and cap charts") {
    const SphereRotation rot(2.0, 0.25);
    CHECK(rot(Vec2(0.3, 0.9)).isApprox(Vec2(0.3, 0.15)));
    CHECK(rot.pole_derivative().isApprox(mat(0, -1, 1, 0).cast<double>()));
    const auto s = rot.surface();
    for (bool north : {true, false}) {
      const Vec2 p(north ? 0.6 : -0.6, 0.3);
      const Vec2 uv = to_cap_chart(s, p, north);
      CHECK(from_cap_chart(s, uv, north).isApprox(p));
      const Mat2 j = fd_jacobian([&](const Vec2& q) { return to_cap_chart(s, q, north); }, p);
      CHECK(j.determinant() == doctest::Approx(1.0).epsilon(1e-6));
      // the rotation acts by the pole derivative in the cap chart
      const Vec2 moved = to_cap_chart(s, rot(p), north);
      CHECK((rot.pole_derivative(north) * uv - moved).norm() < 1e-12);
    }
  }

  TEST_CASE("integrals over reference loops and the mapping torus") {
    const ConstantHamiltonian zero(0.0), c(2.5), one(1.0);
    std::vector<VerticalLoop> loops{{Vec2(0.1, 0.1), 1}, {Vec2(0.4, 0.2), 2}};
    CHECK(integral_over_gamma(zero, loops) == 0.0);
    CHECK(integral_over_gamma(c, loops) == doctest::Approx(7.5));
    const auto h = torus_bump();
    std::vector<VerticalLoop> far{{Vec2(0.05, 0.05), 1}};
    CHECK(integral_over_gamma(*h, far) == 0.0);
    CHECK(integral_over_mapping_torus(one, SurfaceSpec::sphere(2.0)) == doctest::Approx(2.0));
    CHECK(integral_over_mapping_torus(zero, SurfaceSpec::torus()) == 0.0);
    const double fubini = h->time_profile().integral() * h->radial().integral();
    CHECK(integral_over_mapping_torus(*h, SurfaceSpec::torus()) == doctest::Approx(fubini).epsilon(1e-8));
    CHECK(gluing_defect(*h, AffineTorusMap::cat_map()) < 1e-12);
  }
}
