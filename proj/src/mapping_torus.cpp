#include "pfh/mapping_torus.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pfh {

std::string H2Class::label() const {
  if (kind == Kind::fiber) return "fiber";
  return "susp:" + std::to_string(v[0]) + "," + std::to_string(v[1]);
}

H2Class H2Class::parse(const std::string& label) {
  if (label == "fiber") return fiber();
  if (label.rfind("susp:", 0) == 0) {
    const auto comma = label.find(',', 5);
    require(comma != std::string::npos, ErrorKind::validation, "bad suspension label '" + label + "'");
    try {
      return suspension(IntVec2(std::stoll(label.substr(5, comma - 5)), std::stoll(label.substr(comma + 1))));
    } catch (const std::logic_error&) {
      fail(ErrorKind::validation, "bad suspension label '" + label + "'");
    }
  }
  fail(ErrorKind::validation, "unknown H2 basis label '" + label + "'");
}

MappingTorusModel MappingTorusModel::scaled(double c) const {
  require(c > 0.0, ErrorKind::validation, "omega can only be scaled by a positive constant");
  MappingTorusModel m = *this;
  m.area *= c;
  for (double& p : m.pairings) p *= c;
  return m;
}

std::vector<IntVec2> kernel_basis(const Mat2i& matrix) {
  const Mat2i k = matrix - Mat2i::Identity();
  if (k.isZero()) return {IntVec2(1, 0), IntVec2(0, 1)};
  const std::int64_t det = k(0, 0) * k(1, 1) - k(0, 1) * k(1, 0);
  if (det != 0) return {};
  // rank one: v is orthogonal to a nonzero row
  const int row = (k(0, 0) != 0 || k(0, 1) != 0) ? 0 : 1;
  IntVec2 v(k(row, 1), -k(row, 0));
  const std::int64_t g = std::gcd(v[0], v[1]);
  v /= g;
  if (v[0] < 0 || (v[0] == 0 && v[1] < 0)) v = -v;
  return {v};
}

namespace {

/// det(v, b) for an exactly-known offset; nullopt when provably irrational.
std::optional<Rational> exact_flux(const IntVec2& v, const std::array<ExactReal, 2>& b) {
  // det(v, b) = v0 b1 - v1 b0
  const std::array<std::int64_t, 2> coeff{-v[1], v[0]};
  Rational sum(0);
  int irrational_terms = 0;
  for (int i = 0; i < 2; ++i) {
    if (coeff[i] == 0) continue;
    switch (b[i].kind) {
      case ExactReal::Kind::rational: sum += Rational(coeff[i]) * b[i].value; break;
      case ExactReal::Kind::irrational: ++irrational_terms; break;
      case ExactReal::Kind::floating:
        fail(ErrorKind::undecidable, "rationality needs exact offsets; got a floating-point component");
    }
  }
  if (irrational_terms > 1)
    fail(ErrorKind::undecidable, "two irrational offset components may cancel; rationality undecidable");
  if (irrational_terms == 1) return std::nullopt;
  return sum;
}

double approx_flux(const IntVec2& v, const std::array<ExactReal, 2>& b) {
  return static_cast<double>(v[0]) * b[1].approx - static_cast<double>(v[1]) * b[0].approx;
}

}  // namespace

MappingTorusModel build_model(const Mat2i& matrix, const std::array<ExactReal, 2>& offset, double area) {
  require(area > 0.0, ErrorKind::validation, "area must be positive");
  AffineTorusMap check(matrix, Vec2(offset[0].approx, offset[1].approx));  // validates det = 1
  (void)check;
  MappingTorusModel m;
  m.base_kind = SurfaceKind::torus;
  m.matrix = matrix;
  m.offset = offset;
  m.area = area;
  m.basis.push_back(H2Class::fiber());
  m.pairings.push_back(area);
  m.exact_ratios.emplace_back(Rational(1));
  for (const IntVec2& v : kernel_basis(matrix)) {
    m.basis.push_back(H2Class::suspension(v));
    m.pairings.push_back(area * approx_flux(v, offset));
    std::optional<Rational> exact;
    const bool all_exact = (v[1] == 0 || offset[0].kind == ExactReal::Kind::rational) &&
                           (v[0] == 0 || offset[1].kind == ExactReal::Kind::rational);
    if (all_exact) exact = exact_flux(v, offset);
    m.exact_ratios.push_back(exact);
  }
  return m;
}

MappingTorusModel build_model(const AffineTorusMap& map) {
  return build_model(map.matrix(), {ExactReal::floating(map.offset()[0]), ExactReal::floating(map.offset()[1])});
}

MappingTorusModel build_model(const SphereRotation& map) {
  MappingTorusModel m;
  m.base_kind = SurfaceKind::sphere;
  m.area = map.surface().area;
  m.basis.push_back(H2Class::fiber());
  m.pairings.push_back(m.area);
  m.exact_ratios.emplace_back(Rational(1));
  return m;
}

double omega_pairing(const MappingTorusModel& model, const H2Class& cls) {
  for (std::size_t i = 0; i < model.basis.size(); ++i) {
    if (model.basis[i] == cls) return model.pairings[i];
  }
  fail(ErrorKind::validation, "class " + cls.label() + " is not in the H2 basis of this model");
}

double suspension_flux_by_quadrature(const AffineTorusMap& map, const IntVec2& v, const Vec2& start) {
  const Mat2 a = map.matrix().cast<double>();
  const Vec2 vd = v.cast<double>();
  require((a * vd - vd).norm() == 0.0, ErrorKind::validation, "v is not in Ker(A - I)");

  // endpoint chosen so that phi(c(1) + s v) = c(0) + s v
  const Vec2 delta = a.inverse() * (-(a - Mat2::Identity()) * start - map.offset());
  const Vec2 wiggle(0.1, -0.05);
  auto path_velocity = [&](double t) { return Vec2(delta + std::numbers::pi * std::cos(std::numbers::pi * t) * wiggle); };
  auto path = [&](double t) { return Vec2(start + t * delta + std::sin(std::numbers::pi * t) * wiggle); };

  for (int i = 0; i <= 8; ++i) {
    const double s = i / 8.0;
    const Vec2 glued = map.lift(path(1.0) + s * vd) - (path(0.0) + s * vd);
    const Vec2 frac = glued - glued.array().round().matrix();
    require(frac.norm() < 1e-9, ErrorKind::validation, "suspension surface does not close up under the map");
  }

  using Q = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto inner = [&](double t) {
    auto integrand = [&](double) {
      const Vec2 dt = path_velocity(t);
      return dt[0] * vd[1] - dt[1] * vd[0];
    };
    return Q::integrate(integrand, 0.0, 1.0, 8, 1e-13);
  };
  return Q::integrate(inner, 0.0, 1.0, 12, 1e-13);
}

RationalityResult rationality_test(const Mat2i& matrix, const std::array<ExactReal, 2>& offset) {
  RationalityResult res;
  std::vector<Rational> ratios{Rational(1)};
  for (const IntVec2& v : kernel_basis(matrix)) {
    auto flux = exact_flux(v, offset);
    if (!flux) return res;  // irrational
    ratios.push_back(*flux);
  }
  // clear denominators, then divide by the content; fiber entry is positive
  std::int64_t lcm = 1;
  for (const auto& r : ratios) lcm = std::lcm(lcm, r.denominator());
  std::int64_t content = 0;
  std::vector<std::int64_t> ints;
  for (const auto& r : ratios) {
    const std::int64_t n = r.numerator() * (lcm / r.denominator());
    ints.push_back(n);
    content = std::gcd(content, n);
  }
  res.rational = true;
  res.d0 = ints[0] / content;
  for (std::int64_t n : ints) res.primitive_class.emplace_back(n / content);
  return res;
}

RationalityResult rationality_test(const AffineTorusMap& map) {
  if (kernel_basis(map.matrix()).empty()) return rationality_test(map.matrix(), {ExactReal{}, ExactReal{}});
  fail(ErrorKind::undecidable, "rationality of a floating-point offset is undecidable; supply exact rationals");
}

std::int64_t intersection(const H1Class& gamma, const H2Class& cls) {
  if (cls.kind == H2Class::Kind::fiber) return gamma.degree;
  return gamma.winding[0] * cls.v[1] - gamma.winding[1] * cls.v[0];
}

bool monotone_test(const MappingTorusModel& model, const H1Class& gamma) {
  std::vector<std::int64_t> q;
  for (const auto& c : model.basis) q.push_back(2 * intersection(gamma, c));
  if (q[0] <= 0) return false;  // fiber pairing of omega is positive

  bool exact = true;
  for (const auto& r : model.exact_ratios) exact = exact && r.has_value();
  if (exact) {
    for (std::size_t i = 1; i < q.size(); ++i) {
      if (*model.exact_ratios[i] * q[0] != Rational(q[i])) return false;
    }
    return true;
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) scale = std::max(scale, std::abs(model.pairings[i]) * std::abs(double(q[0])));
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (std::abs(model.pairings[i] * q[0] - model.pairings[0] * q[i]) > 1e-12 * std::max(scale, 1.0)) return false;
  }
  return true;
}

void ReferenceCycle::validate(int genus) const {
  require(!loops.empty(), ErrorKind::validation, "reference cycle needs at least one loop");
  for (const auto& l : loops) require(l.multiplicity >= 1, ErrorKind::validation, "loop multiplicity must be >= 1");
  require(degree(*this) > genus, ErrorKind::hypothesis, "reference cycle degree must exceed the genus");
}

std::int64_t degree(const ReferenceCycle& gamma) {
  std::int64_t d = 0;
  for (const auto& l : gamma.loops) d += l.multiplicity;
  return d;
}

}  // namespace pfh
