// Period bounds of the quantitative closing lemmas, in exact arithmetic.
#pragma once

#include <cstdint>
#include <string>

#include "pfh/common.hpp"

namespace pfh {

struct BoundInput {
  Rational area{1};
  std::int64_t genus = 0;
  std::int64_t d0 = 1;
  Rational a{0};
  Rational l{0};
  Rational delta{0};

  /// Throws validation errors for malformed data and hypothesis errors for
  /// delta > a / l (the theorems require delta l <= a) or a >= A.
  void validate() const;
};

struct BoundResult {
  std::int64_t d = 0;         // period bound
  std::int64_t k = 0;         // d = d0 k
  Rational tau_bound{0};      // creation time bound A / (l (d - g + 1)) <= delta
  std::string theorem;
};

/// Sphere: d = floor(A / (l delta)).
BoundResult bound_sphere(const BoundInput& in);
/// Torus: d = d0 (floor(A / (d0 l delta)) + 1).
BoundResult bound_torus(const BoundInput& in);
/// Any genus, assuming U-cyclic elements in every degree d0 k > g:
/// k = floor((A / (delta l) + g - 1) / d0) + 1, d = d0 k.
BoundResult bound_general(const BoundInput& in);

/// l^{-1} gap: orbits appear for some tau in [0, tau_bound(gap, l)].
Rational tau_bound(const Rational& gap, const Rational& l);
double tau_bound(double gap, double l);

struct SharpnessWitness {
  std::int64_t n = 0;         // floor(A / a) translates
  double rotation = 0.0;      // sphere rotation, turns
  double sector_width = 0.0;  // U = {0 < arg < width}, full height
  double area_u = 0.0;
  double area = 0.0;
  std::size_t samples = 0;
  bool disjoint = false;      // no sample lies in two translates
};

/// Rotation plus open set U slightly larger than a whose first n iterates are disjoint.
SharpnessWitness sharpness_witness(const Rational& area, const Rational& a, std::size_t samples = 10000);

}  // namespace pfh
