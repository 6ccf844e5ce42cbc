// Homological bookkeeping for mapping tori of affine torus maps and sphere rotations.
//
// H_2(Y_phi) is modelled by the fiber class [Sigma] plus one suspension class T_v
// for each primitive v in a basis of Ker(A - I). T_v is swept by the loop
// s -> x + s v as x is carried once around the base circle; with the lift b of
// the offset fixed, <[omega_phi], T_v> = area * det(v, b).
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pfh/common.hpp"
#include "pfh/surface_maps.hpp"

namespace pfh {

using IntVec2 = Eigen::Matrix<std::int64_t, 2, 1>;

/// A real number together with what is known about it exactly.
struct ExactReal {
  enum class Kind { rational, irrational, floating };
  Kind kind = Kind::floating;
  Rational value{0};
  double approx = 0.0;

  static ExactReal rational(Rational r) { return {Kind::rational, r, to_double(r)}; }
  static ExactReal irrational(double approx) { return {Kind::irrational, Rational(0), approx}; }
  static ExactReal floating(double x) { return {Kind::floating, Rational(0), x}; }
};

struct H2Class {
  enum class Kind { fiber, suspension };
  Kind kind = Kind::fiber;
  IntVec2 v = IntVec2::Zero();

  static H2Class fiber() { return {}; }
  static H2Class suspension(const IntVec2& v) { return {Kind::suspension, v}; }
  std::string label() const;
  static H2Class parse(const std::string& label);
  bool operator==(const H2Class& o) const { return kind == o.kind && v == o.v; }
};

struct MappingTorusModel {
  SurfaceKind base_kind = SurfaceKind::torus;
  Mat2i matrix = Mat2i::Identity();
  std::array<ExactReal, 2> offset{};
  double area = 1.0;

  std::vector<H2Class> basis;
  std::vector<double> pairings;                     // <[omega_phi], basis[i]>
  std::vector<std::optional<Rational>> exact_ratios;  // pairings[i] / area when exactly known

  /// Same model with omega scaled by c > 0.
  MappingTorusModel scaled(double c) const;
};

/// Primitive integer basis of Ker(A - I), first nonzero entry positive.
std::vector<IntVec2> kernel_basis(const Mat2i& matrix);

MappingTorusModel build_model(const Mat2i& matrix, const std::array<ExactReal, 2>& offset, double area = 1.0);
MappingTorusModel build_model(const AffineTorusMap& map);
MappingTorusModel build_model(const SphereRotation& map);

double omega_pairing(const MappingTorusModel& model, const H2Class& cls);

/// Independent check of a suspension pairing: integrates dx1 ^ dx2 over an explicit
/// parameterized torus (t, s) -> (t, c(t) + s v) whose ends are glued by the map,
/// with c a deliberately curved path. Throws if the surface fails to close.
double suspension_flux_by_quadrature(const AffineTorusMap& map, const IntVec2& v, const Vec2& start = Vec2(0.3, 0.7));

struct RationalityResult {
  bool rational = false;
  std::optional<std::int64_t> d0;
  std::vector<Rational> primitive_class;  // Omega on the basis, when rational
};

/// Rationality of [omega_phi]. Offsets must be exact (rational or marked irrational).
RationalityResult rationality_test(const Mat2i& matrix, const std::array<ExactReal, 2>& offset);
/// Floating-point offsets are undecidable; this overload exists to reject them.
RationalityResult rationality_test(const AffineTorusMap& map);

/// H_1 class d [S^1] + w, w in H_1(T^2) (taken modulo Im(A - I)).
struct H1Class {
  std::int64_t degree = 0;
  IntVec2 winding = IntVec2::Zero();
};

/// Pairing of PD(Gamma) with a basis class: fiber -> d, T_v -> det(w, v).
std::int64_t intersection(const H1Class& gamma, const H2Class& cls);

/// [omega_phi] a positive multiple of 2 PD(Gamma), taking c_1(E) = 0.
bool monotone_test(const MappingTorusModel& model, const H1Class& gamma);

struct ReferenceCycle {
  std::vector<VerticalLoop> loops;
  void validate(int genus) const;
};

std::int64_t degree(const ReferenceCycle& gamma);

}  // namespace pfh
