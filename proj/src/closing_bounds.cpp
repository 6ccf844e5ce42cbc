#include "pfh/closing_bounds.hpp"

#include <random>

#include "pfh/surface_maps.hpp"

namespace pfh {

void BoundInput::validate() const {
  require(area > Rational(0), ErrorKind::validation, "A must be positive");
  require(genus >= 0, ErrorKind::validation, "g must be nonnegative");
  require(d0 >= 1, ErrorKind::validation, "d0 must be a positive integer");
  require(a > Rational(0), ErrorKind::validation, "a must be positive");
  require(l > Rational(0) && l < Rational(1), ErrorKind::validation, "l must lie in (0,1)");
  require(delta > Rational(0), ErrorKind::validation, "delta must be positive");
  require(delta * l <= a, ErrorKind::hypothesis,
          "hypothesis violated: delta = " + to_decimal_string(delta) + " exceeds a/l = " + to_decimal_string(a / l));
  require(a < area, ErrorKind::hypothesis, "hypothesis violated: a must be smaller than area(U) <= A");
}

namespace {

BoundResult finish(const BoundInput& in, std::int64_t k, std::string theorem) {
  BoundResult r;
  r.k = k;
  r.d = in.d0 * k;
  require(r.d > in.genus, ErrorKind::hypothesis, "period bound does not exceed the genus");
  r.tau_bound = in.area / (in.l * Rational(r.d - in.genus + 1));
  r.theorem = std::move(theorem);
  return r;
}

}  // namespace

BoundResult bound_sphere(const BoundInput& in) {
  in.validate();
  require(in.genus == 0 && in.d0 == 1, ErrorKind::validation, "sphere bound needs g = 0 and d0 = 1");
  const std::int64_t d = floor_div(in.area / (in.l * in.delta));
  return finish(in, d, "sphere-closing-bound: d <= floor(A / (l delta))");
}

BoundResult bound_torus(const BoundInput& in) {
  in.validate();
  require(in.genus == 1, ErrorKind::validation, "torus bound needs g = 1");
  const std::int64_t k = floor_div(in.area / (Rational(in.d0) * in.l * in.delta)) + 1;
  return finish(in, k, "torus-closing-bound: d <= d0 (floor(A / (d0 l delta)) + 1)");
}

BoundResult bound_general(const BoundInput& in) {
  in.validate();
  const Rational x = in.area / (in.delta * in.l) + Rational(in.genus - 1);
  const std::int64_t k = floor_div(x / Rational(in.d0)) + 1;
  return finish(in, k, "general-closing-bound: d <= d0 (floor((A / (delta l) + g - 1) / d0) + 1)");
}

Rational tau_bound(const Rational& gap, const Rational& l) {
  require(gap >= Rational(0) && l > Rational(0), ErrorKind::validation, "tau bound needs gap >= 0 and l > 0");
  return gap / l;
}

double tau_bound(double gap, double l) {
  require(gap >= 0.0 && l > 0.0, ErrorKind::validation, "tau bound needs gap >= 0 and l > 0");
  return gap / l;
}

SharpnessWitness sharpness_witness(const Rational& area, const Rational& a, std::size_t samples) {
  require(a > Rational(0), ErrorKind::validation, "a must be positive");
  require(a < area, ErrorKind::validation, "sharpness witness needs a < A");
  const Rational ratio = area / a;
  require(ratio.denominator() != 1, ErrorKind::hypothesis, "sharpness needs A/a to be a non-integer");

  SharpnessWitness w;
  w.n = floor_div(ratio);
  w.area = to_double(area);
  // strictly between a and A/n, so U is a bit larger than a and n copies still fit
  w.area_u = 0.5 * (to_double(a) + w.area / static_cast<double>(w.n));
  w.sector_width = w.area_u / w.area;
  w.rotation = 1.0 / static_cast<double>(w.n);
  w.samples = samples;

  const SurfaceSpec sphere = SurfaceSpec::sphere(w.area);
  const Region u = Region::rectangle(Vec2(-0.5 * w.area, 0.0), Vec2(0.5 * w.area, w.sector_width));
  std::vector<SphereRotation> inverse_powers;
  for (std::int64_t i = 0; i < w.n; ++i) inverse_powers.emplace_back(w.area, -w.rotation * static_cast<double>(i));

  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> z(-0.5 * w.area, 0.5 * w.area), arg(0.0, 1.0);
  w.disjoint = true;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec2 p(z(rng), arg(rng));
    int hits = 0;
    for (const auto& inv : inverse_powers) hits += u.contains(sphere, inv(p)) ? 1 : 0;
    if (hits > 1) w.disjoint = false;
  }
  return w;
}

}  // namespace pfh
