#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pfh/surface_maps.hpp"

namespace pfh {

// ---------------------------------------------------------------------------
// Finite-difference defaults

Vec2 Hamiltonian::gradient(double t, const Vec2& x) const {
  const double h = fd_step();
  const Vec2 e1(h, 0.0), e2(0.0, h);
  return {(value(t, x + e1) - value(t, x - e1)) / (2 * h), (value(t, x + e2) - value(t, x - e2)) / (2 * h)};
}

Mat2 Hamiltonian::hessian(double t, const Vec2& x) const {
  const double h = fd_step();
  const Vec2 e1(h, 0.0), e2(0.0, h);
  const double f0 = value(t, x);
  Mat2 m;
  m(0, 0) = (value(t, x + e1) - 2 * f0 + value(t, x - e1)) / (h * h);
  m(1, 1) = (value(t, x + e2) - 2 * f0 + value(t, x - e2)) / (h * h);
  m(0, 1) = m(1, 0) =
      (value(t, x + e1 + e2) - value(t, x + e1 - e2) - value(t, x - e1 + e2) + value(t, x - e1 - e2)) / (4 * h * h);
  return m;
}

std::string ConstantHamiltonian::describe() const { return "constant " + to_decimal_string(c_); }

std::string LinearHamiltonian::describe() const {
  return "linear " + to_decimal_string(c_[0]) + "*x1 + " + to_decimal_string(c_[1]) + "*x2";
}

Vec2 hamiltonian_vector_field(const Hamiltonian& h, double t, const Vec2& x) {
  const Vec2 g = h.gradient(t, x);
  if (!g.allFinite()) fail(ErrorKind::evaluation, "non-finite gradient of " + h.describe());
  return {g[1], -g[0]};
}

// ---------------------------------------------------------------------------
// Profiles

namespace {

double psi(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double psi1(double s) { return s > 0.0 ? psi(s) / (s * s) : 0.0; }
double psi2(double s) { return s > 0.0 ? psi(s) * (1.0 / (s * s * s * s) - 2.0 / (s * s * s)) : 0.0; }

}  // namespace

double SmoothStep::value(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double f = psi(s), g = psi(1.0 - s);
  return f / (f + g);
}

double SmoothStep::d1(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double f = psi(s), g = psi(1.0 - s);
  const double f1 = psi1(s), g1 = -psi1(1.0 - s);
  const double sum = f + g;
  return (f1 * g - f * g1) / (sum * sum);
}

double SmoothStep::d2(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double f = psi(s), g = psi(1.0 - s);
  const double f1 = psi1(s), g1 = -psi1(1.0 - s);
  const double f2 = psi2(s), g2 = psi2(1.0 - s);
  const double sum = f + g;
  const double num = f1 * g - f * g1;
  const double num1 = f2 * g - f * g2;
  return num1 / (sum * sum) - 2.0 * num * (f1 + g1) / (sum * sum * sum);
}

TimeProfile TimeProfile::plateau(double start, double end, double ramp) {
  require(ramp > 0.0 && start - ramp >= 0.0 && end + ramp <= 1.0 && end > start, ErrorKind::validation,
          "time plateau must sit inside (0,1) with its ramps");
  return {false, start, end, ramp};
}

double TimeProfile::value(double t) const {
  if (always_on) return 1.0;
  if (t >= start && t <= end) return 1.0;
  if (t < start) return SmoothStep::value((t - (start - ramp)) / ramp);
  return SmoothStep::value((end + ramp - t) / ramp);
}

double TimeProfile::integral() const {
  // S(s) + S(1 - s) = 1, so each ramp contributes ramp / 2
  return always_on ? 1.0 : (end - start) + ramp;
}

double RadialProfile::value(double r) const {
  if (r <= r_plateau) return height;
  if (r >= r_support) return 0.0;
  return height * SmoothStep::value((r_support - r) / (r_support - r_plateau));
}

double RadialProfile::d1(double r) const {
  if (r <= r_plateau || r >= r_support) return 0.0;
  const double w = r_support - r_plateau;
  return -height * SmoothStep::d1((r_support - r) / w) / w;
}

double RadialProfile::d2(double r) const {
  if (r <= r_plateau || r >= r_support) return 0.0;
  const double w = r_support - r_plateau;
  return height * SmoothStep::d2((r_support - r) / w) / (w * w);
}

double RadialProfile::integral() const {
  using Q = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto f = [this](double r) { return value(r) * r; };
  const double ramp = Q::integrate(f, r_plateau, r_support, 12, 1e-13);
  return 2.0 * std::numbers::pi * (0.5 * height * r_plateau * r_plateau + ramp);
}

// ---------------------------------------------------------------------------
// Bumps

BumpHamiltonian::BumpHamiltonian(SurfaceSpec surface, Vec2 center, RadialProfile radial, TimeProfile time)
    : surface_(surface), center_(center), radial_(radial), time_(time) {
  surface_.validate();
  require(radial.r_plateau >= 0.0 && radial.r_support > radial.r_plateau, ErrorKind::validation,
          "bump needs 0 <= plateau radius < support radius");
  if (surface_.kind == SurfaceKind::torus) {
    require(radial.r_support < 0.5, ErrorKind::validation, "bump support must embed in the torus (radius < 1/2)");
  } else {
    require(std::abs(center[0]) + radial.r_support < 0.5 * surface_.area && radial.r_support < 0.5,
            ErrorKind::validation, "bump support must stay inside the cylinder chart, away from the poles");
  }
}

double BumpHamiltonian::value(double t, const Vec2& x) const {
  const double tf = time_.value(t);
  if (tf == 0.0) return 0.0;
  return tf * radial_.value(surface_.displacement(center_, x).norm());
}

Vec2 BumpHamiltonian::gradient(double t, const Vec2& x) const {
  const double tf = time_.value(t);
  const Vec2 d = surface_.displacement(center_, x);
  const double r = d.norm();
  if (tf == 0.0 || r <= radial_.r_plateau || r >= radial_.r_support) return Vec2::Zero();
  return tf * radial_.d1(r) / r * d;
}

Mat2 BumpHamiltonian::hessian(double t, const Vec2& x) const {
  const double tf = time_.value(t);
  const Vec2 d = surface_.displacement(center_, x);
  const double r = d.norm();
  if (tf == 0.0 || r <= radial_.r_plateau || r >= radial_.r_support) return Mat2::Zero();
  const Vec2 u = d / r;
  const Mat2 uu = u * u.transpose();
  return tf * (radial_.d2(r) * uu + radial_.d1(r) / r * (Mat2::Identity() - uu));
}

SupportHint BumpHamiltonian::support() const {
  SupportHint hint;
  if (!time_.always_on) hint.time = std::make_pair(time_.start - time_.ramp, time_.end + time_.ramp);
  hint.space = Region::disk(center_, radial_.r_support);
  return hint;
}

std::string BumpHamiltonian::describe() const {
  std::ostringstream os;
  os << "bump center=(" << to_decimal_string(center_[0]) << "," << to_decimal_string(center_[1])
     << ") plateau_r=" << to_decimal_string(radial_.r_plateau) << " support_r=" << to_decimal_string(radial_.r_support);
  if (!time_.always_on) os << " I=[" << to_decimal_string(time_.start) << "," << to_decimal_string(time_.end) << "]";
  return os.str();
}

AdmissibleHamiltonian::AdmissibleHamiltonian(SurfaceSpec surface, Region region, double disk_area,
                                             double interval_length, RadialProfile radial, TimeProfile time)
    : BumpHamiltonian(surface, region.mid(), radial, time), region_(region), a_(disk_area), l_(interval_length) {}

AdmissibilityReport AdmissibleHamiltonian::validate(int grid) const {
  AdmissibilityReport rep;
  rep.vanishes_near_time_ends = rep.vanishes_outside_region = rep.nonnegative = rep.at_least_one_on_plateau = true;
  const auto& s = surface();
  const Vec2 o = s.domain_origin();
  const Vec2 e = s.domain_extent();
  const auto [t0, t1] = interval();
  const double ramp = time_profile().ramp;

  // bullet 1: zero on [0, t0 - ramp] and [t1 + ramp, 1]
  const double early = t0 - ramp, late = t1 + ramp;
  for (int i = 0; i <= grid; ++i) {
    const double ta = early * i / grid;
    const double tb = late + (1.0 - late) * i / grid;
    for (int j = 0; j < grid; ++j) {
      const Vec2 x = region_.mid() + radial().r_support * Vec2(std::cos(2 * std::numbers::pi * j / grid),
                                                               std::sin(2 * std::numbers::pi * j / grid)) *
                                         (static_cast<double>(i) / grid);
      if (value(ta, x) != 0.0 || value(tb, x) != 0.0) rep.vanishes_near_time_ends = false;
      rep.samples += 2;
    }
  }
  // bullets 2 and 3 on a space-time grid
  for (int k = 0; k <= grid; ++k) {
    const double t = static_cast<double>(k) / grid;
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        const Vec2 x = o + Vec2((i + 0.5) / grid * e[0], (j + 0.5) / grid * e[1]);
        const double v = value(t, x);
        if (v < 0.0) rep.nonnegative = false;
        if (!region_.contains(s, x) && v != 0.0) rep.vanishes_outside_region = false;
        ++rep.samples;
      }
    }
  }
  // bullet 4: H >= 1 on I x D, including the boundary circle of D
  const Region d = disk();
  for (int k = 0; k <= grid; ++k) {
    const double t = t0 + (t1 - t0) * k / grid;
    for (int i = 0; i <= grid; ++i) {
      const double r = d.radius * i / grid;
      for (int j = 0; j < grid; ++j) {
        const double phi = 2 * std::numbers::pi * j / grid;
        const Vec2 x = d.center + r * Vec2(std::cos(phi), std::sin(phi));
        if (value(t, x) < 1.0) rep.at_least_one_on_plateau = false;
        ++rep.samples;
      }
    }
  }
  return rep;
}

AdmissibleHamiltonian build_admissible(const SurfaceSpec& surface, const Region& region, double a, double l) {
  surface.validate();
  require(a > 0.0, ErrorKind::validation, "invalid parameters: a must be positive");
  require(a < region.area(), ErrorKind::validation,
          "invalid parameters: a = " + to_decimal_string(a) + " must be < area(U) = " + to_decimal_string(region.area()));
  require(l > 0.0 && l < 1.0, ErrorKind::validation, "invalid parameters: l must lie in (0,1)");

  const double r_disk = std::sqrt(a / std::numbers::pi);
  const double r_room = region.inscribed_radius();
  require(r_disk < r_room, ErrorKind::validation,
          "invalid parameters: a disk of area a does not fit inside U around its center");
  RadialProfile radial;
  radial.r_plateau = r_disk;
  radial.r_support = r_disk + 0.9 * (r_room - r_disk);
  radial.height = 1.0 + kPlateauMargin;

  const double start = 0.5 * (1.0 - l);
  const TimeProfile time = TimeProfile::plateau(start, start + l, 0.5 * start);
  return AdmissibleHamiltonian(surface, region, a, l, radial, time);
}

}  // namespace pfh
