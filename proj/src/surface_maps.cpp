#include "pfh/surface_maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pfh {

namespace {

double wrap_unit(double v) {
  double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

double wrap_centered(double v) { return v - std::round(v); }

}  // namespace

// ---------------------------------------------------------------------------
// SurfaceSpec

SurfaceSpec SurfaceSpec::sphere(double area) {
  SurfaceSpec s{0, area, SurfaceKind::sphere};
  s.validate();
  return s;
}

void SurfaceSpec::validate() const {
  require(std::isfinite(area) && area > 0.0, ErrorKind::validation, "surface area must be positive");
  if (kind == SurfaceKind::torus) {
    require(genus == 1, ErrorKind::validation, "torus must have genus 1");
    require(area == 1.0, ErrorKind::validation, "torus chart R^2/Z^2 has area 1");
  } else {
    require(genus == 0, ErrorKind::validation, "sphere must have genus 0");
  }
}

Vec2 SurfaceSpec::reduce(const Vec2& x) const {
  if (kind == SurfaceKind::torus) return {wrap_unit(x[0]), wrap_unit(x[1])};
  return {x[0], wrap_unit(x[1])};
}

Vec2 SurfaceSpec::displacement(const Vec2& from, const Vec2& to) const {
  Vec2 d = to - from;
  if (kind == SurfaceKind::torus) d[0] = wrap_centered(d[0]);
  d[1] = wrap_centered(d[1]);
  return d;
}

bool SurfaceSpec::in_chart(const Vec2& x) const {
  if (!x.allFinite()) return false;
  if (kind == SurfaceKind::torus) return true;
  return std::abs(x[0]) <= 0.5 * area;
}

Vec2 SurfaceSpec::domain_origin() const {
  return kind == SurfaceKind::torus ? Vec2(0.0, 0.0) : Vec2(-0.5 * area, 0.0);
}

Vec2 SurfaceSpec::domain_extent() const {
  return kind == SurfaceKind::torus ? Vec2(1.0, 1.0) : Vec2(area, 1.0);
}

// ---------------------------------------------------------------------------
// Region

Region Region::disk(const Vec2& center, double radius) {
  require(radius > 0.0, ErrorKind::validation, "disk radius must be positive");
  Region r;
  r.shape = Shape::disk;
  r.center = center;
  r.radius = radius;
  return r;
}

Region Region::rectangle(const Vec2& lo, const Vec2& hi) {
  require(hi[0] > lo[0] && hi[1] > lo[1], ErrorKind::validation, "rectangle must have positive extent");
  Region r;
  r.shape = Shape::rectangle;
  r.lo = lo;
  r.hi = hi;
  r.center = 0.5 * (lo + hi);
  return r;
}

double Region::area() const {
  if (shape == Shape::disk) return std::numbers::pi * radius * radius;
  return (hi[0] - lo[0]) * (hi[1] - lo[1]);
}

bool Region::contains(const SurfaceSpec& surface, const Vec2& x) const {
  if (shape == Shape::disk) return surface.distance(center, x) < radius;
  for (int i = 0; i < 2; ++i) {
    const double width = hi[i] - lo[i];
    double offset = x[i] - lo[i];
    const bool periodic = i == 1 || surface.periodic_x1();
    if (periodic && width < 1.0) offset -= std::floor(offset);
    if (!(offset > 0.0 && offset < width)) return false;
  }
  return true;
}

double Region::inscribed_radius() const {
  if (shape == Shape::disk) return radius;
  return 0.5 * std::min(hi[0] - lo[0], hi[1] - lo[1]);
}

// ---------------------------------------------------------------------------
// Maps

AffineTorusMap::AffineTorusMap(const Mat2i& matrix, const Vec2& offset)
    : matrix_(matrix), matrix_real_(matrix.cast<double>()), offset_(offset) {
  const std::int64_t det = matrix(0, 0) * matrix(1, 1) - matrix(0, 1) * matrix(1, 0);
  require(det == 1, ErrorKind::validation, "affine torus map needs det(A) = 1, got " + std::to_string(det));
  require(offset.allFinite(), ErrorKind::validation, "offset must be finite");
}

AffineTorusMap AffineTorusMap::cat_map() {
  Mat2i a;
  a << 2, 1, 1, 1;
  return {a, Vec2::Zero()};
}

std::string AffineTorusMap::describe() const {
  std::ostringstream os;
  os << "affine torus map A=[[" << matrix_(0, 0) << "," << matrix_(0, 1) << "],[" << matrix_(1, 0) << ","
     << matrix_(1, 1) << "]] b=(" << to_decimal_string(offset_[0]) << "," << to_decimal_string(offset_[1]) << ")";
  return os.str();
}

SphereRotation::SphereRotation(double area, double angle) : surface_(SurfaceSpec::sphere(area)), angle_(angle) {
  require(std::isfinite(angle), ErrorKind::validation, "rotation angle must be finite");
}

Vec2 SphereRotation::lift(const Vec2& x) const { return {x[0], x[1] + angle_}; }

std::string SphereRotation::describe() const {
  return "sphere rotation area=" + to_decimal_string(surface_.area) + " angle=" + to_decimal_string(angle_);
}

Mat2 SphereRotation::pole_derivative(bool north) const {
  const double th = (north ? -2.0 : 2.0) * std::numbers::pi * angle_;
  Mat2 r;
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return r;
}

Vec2 to_cap_chart(const SurfaceSpec& sphere, const Vec2& z_arg, bool north) {
  require(sphere.kind == SurfaceKind::sphere, ErrorKind::validation, "cap charts exist on the sphere only");
  const double cap_area = north ? 0.5 * sphere.area - z_arg[0] : 0.5 * sphere.area + z_arg[0];
  require(cap_area >= 0.0, ErrorKind::validation, "point outside sphere chart");
  const double r = std::sqrt(cap_area / std::numbers::pi);
  const double phi = 2.0 * std::numbers::pi * z_arg[1];
  return north ? Vec2(r * std::cos(phi), -r * std::sin(phi)) : Vec2(r * std::cos(phi), r * std::sin(phi));
}

Vec2 from_cap_chart(const SurfaceSpec& sphere, const Vec2& uv, bool north) {
  const double cap_area = std::numbers::pi * uv.squaredNorm();
  const double z = north ? 0.5 * sphere.area - cap_area : cap_area - 0.5 * sphere.area;
  const double phi = std::atan2(north ? -uv[1] : uv[1], uv[0]);
  return {z, wrap_unit(phi / (2.0 * std::numbers::pi))};
}

// ---------------------------------------------------------------------------
// Derivatives and classification

Vec2 iterate_lift(const SurfaceMap& map, const Vec2& x, int k) {
  // lifts compose directly on the covering chart; reducing in between would lose the deck action
  Vec2 y = x;
  const auto& surface = map.surface();
  for (int i = 0; i < k; ++i) {
    y = map.lift(y);
    require(surface.in_chart(y), ErrorKind::validation, "orbit left the chart at step " + std::to_string(i + 1));
  }
  return y;
}

Mat2 jacobian(const SurfaceMap& map, const Vec2& x, int k) {
  require(k >= 1, ErrorKind::validation, "jacobian needs k >= 1");
  const auto& surface = map.surface();
  require(surface.in_chart(x), ErrorKind::validation, "point outside the chart");
  Mat2 total = Mat2::Identity();
  Vec2 y = surface.reduce(x);
  for (int i = 0; i < k; ++i) {
    MapStep s = map.step(y);
    require(surface.in_chart(s.image), ErrorKind::validation, "orbit left the chart at step " + std::to_string(i + 1));
    total = s.jacobian * total;
    y = surface.reduce(s.image);
  }
  return total;
}

PeriodicPointClass classify_matrix(const Mat2& m, double tol) {
  PeriodicPointClass c;
  c.trace = m.trace();
  c.determinant = m.determinant();
  const double disc = c.trace * c.trace - 4.0 * c.determinant;
  const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
  c.eigenvalues[0] = 0.5 * (c.trace - root);
  c.eigenvalues[1] = 0.5 * (c.trace + root);
  c.nondegenerate = std::abs(c.eigenvalues[0] - 1.0) > tol && std::abs(c.eigenvalues[1] - 1.0) > tol;
  c.hyperbolic = c.nondegenerate && disc >= tol;
  return c;
}

PeriodicPointClass classify_periodic_point(const SurfaceMap& map, const Vec2& x, int k, double residual_tol,
                                           double tol) {
  const auto& surface = map.surface();
  const Vec2 image = surface.reduce(iterate_lift(map, x, k));
  const double residual = surface.distance(image, x);
  if (!(residual <= residual_tol)) {
    fail(ErrorKind::not_periodic, "point is not a period-" + std::to_string(k) + " point (residual " +
                                      to_decimal_string(residual) + ")");
  }
  PeriodicPointClass c = classify_matrix(jacobian(map, x, k), tol);
  c.residual = residual;
  return c;
}

// ---------------------------------------------------------------------------
// Integrals

namespace {

using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kMaxDepth = 10;
constexpr double kQuadTol = 1e-11;

/// Splits [lo, hi] at the given interior points and sums the pieces.
template <class F>
double piecewise(F&& f, double lo, double hi, std::vector<double> cuts) {
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  double prev = lo;
  for (double c : cuts) {
    if (c <= prev || c > hi) continue;
    total += Quadrature::integrate(f, prev, c, kMaxDepth, kQuadTol);
    prev = c;
  }
  return total;
}

std::vector<double> time_cuts(const SupportHint& hint) {
  if (!hint.time) return {};
  return {hint.time->first, hint.time->second};
}

/// Chart-coordinate cuts of the support region along axis i, folded into the domain.
std::vector<double> space_cuts(const SupportHint& hint, const SurfaceSpec& surface, int axis) {
  if (!hint.space) return {};
  const Region& r = *hint.space;
  double a = r.shape == Region::Shape::disk ? r.center[axis] - r.radius : r.lo[axis];
  double b = r.shape == Region::Shape::disk ? r.center[axis] + r.radius : r.hi[axis];
  std::vector<double> cuts{a, b};
  const bool periodic = axis == 1 || surface.periodic_x1();
  if (periodic) {
    for (double& c : cuts) c = wrap_unit(c);
  }
  return cuts;
}

}  // namespace

double integral_over_gamma(const Hamiltonian& h, std::span<const VerticalLoop> loops) {
  const SupportHint hint = h.support();
  double total = 0.0;
  for (const auto& loop : loops) {
    require(loop.multiplicity >= 1, ErrorKind::validation, "loop multiplicity must be positive");
    auto f = [&](double t) { return h.value(t, loop.base); };
    total += loop.multiplicity * piecewise(f, 0.0, 1.0, time_cuts(hint));
  }
  return total;
}

double integral_over_mapping_torus(const Hamiltonian& h, const SurfaceSpec& surface) {
  surface.validate();
  const SupportHint hint = h.support();
  const Vec2 o = surface.domain_origin();
  const Vec2 e = surface.domain_extent();
  const auto cuts1 = space_cuts(hint, surface, 0);
  const auto cuts2 = space_cuts(hint, surface, 1);

  auto over_surface = [&](double t) {
    auto inner = [&](double x1) {
      auto f = [&](double x2) { return h.value(t, Vec2(x1, x2)); };
      return piecewise(f, o[1], o[1] + e[1], cuts2);
    };
    return piecewise(inner, o[0], o[0] + e[0], cuts1);
  };
  if (h.autonomous()) return over_surface(0.5);
  return piecewise(over_surface, 0.0, 1.0, time_cuts(hint));
}

double gluing_defect(const Hamiltonian& h, const SurfaceMap& phi, int grid) {
  const auto& surface = phi.surface();
  const Vec2 o = surface.domain_origin();
  const Vec2 e = surface.domain_extent();
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Vec2 x = o + Vec2((i + 0.5) / grid * e[0], (j + 0.5) / grid * e[1]);
      worst = std::max(worst, std::abs(h.value(1.0, x) - h.value(0.0, phi(x))));
    }
  }
  return worst;
}

}  // namespace pfh
