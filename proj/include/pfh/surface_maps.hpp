// Explicit area-preserving maps of T^2 and S^2, Hamiltonians and their flows.
//
// Charts. Every surface is handled in a single area chart (x1, x2) with
// omega = dx1 ^ dx2:
//   torus   R^2/Z^2, both coordinates periodic, total area 1;
//   sphere  cylindrical coordinates x1 = z in [-A/2, A/2], x2 = arg in turns
//           (periodic). The poles z = +-A/2 are covered by the cap charts
//           below; Hamiltonians used here must be supported away from them.
#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfh/common.hpp"

namespace pfh {

enum class SurfaceKind { torus, sphere };

struct SurfaceSpec {
  int genus = 1;
  double area = 1.0;
  SurfaceKind kind = SurfaceKind::torus;

  static SurfaceSpec torus() { return {1, 1.0, SurfaceKind::torus}; }
  static SurfaceSpec sphere(double area);

  void validate() const;

  bool periodic_x1() const { return kind == SurfaceKind::torus; }
  /// Canonical representative of a covering-chart point.
  Vec2 reduce(const Vec2& x) const;
  /// Shortest chart displacement from `from` to `to`, respecting periodic directions.
  Vec2 displacement(const Vec2& from, const Vec2& to) const;
  double distance(const Vec2& a, const Vec2& b) const { return displacement(a, b).norm(); }
  bool in_chart(const Vec2& x) const;
  /// Lower-left corner and extent of the fundamental domain.
  Vec2 domain_origin() const;
  Vec2 domain_extent() const;
};

/// Open disk or open axis-aligned rectangle in chart coordinates.
struct Region {
  enum class Shape { disk, rectangle };
  Shape shape = Shape::disk;
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Zero();

  static Region disk(const Vec2& center, double radius);
  static Region rectangle(const Vec2& lo, const Vec2& hi);

  double area() const;
  bool contains(const SurfaceSpec& surface, const Vec2& x) const;
  /// Largest radius of a round disk centered at `center()` inside the region.
  double inscribed_radius() const;
  Vec2 mid() const { return shape == Shape::disk ? center : Vec2(0.5 * (lo + hi)); }
};

// ---------------------------------------------------------------------------
// Maps

struct MapStep {
  Vec2 image;  // in the covering chart, not reduced
  Mat2 jacobian;
};

class SurfaceMap {
 public:
  virtual ~SurfaceMap() = default;

  virtual const SurfaceSpec& surface() const = 0;
  /// Image of x in the covering chart (torus: R^2; sphere: arg unwrapped).
  virtual Vec2 lift(const Vec2& x) const = 0;
  virtual Mat2 derivative(const Vec2& x) const = 0;
  virtual MapStep step(const Vec2& x) const { return {lift(x), derivative(x)}; }
  virtual std::string describe() const = 0;

  Vec2 operator()(const Vec2& x) const { return surface().reduce(lift(x)); }
};

using MapPtr = std::shared_ptr<const SurfaceMap>;

/// x -> A x + b on R^2/Z^2 with A in SL(2, Z).
class AffineTorusMap final : public SurfaceMap {
 public:
  AffineTorusMap(const Mat2i& matrix, const Vec2& offset);
  static AffineTorusMap identity() { return {Mat2i::Identity(), Vec2::Zero()}; }
  static AffineTorusMap cat_map();

  const SurfaceSpec& surface() const override { return surface_; }
  Vec2 lift(const Vec2& x) const override { return matrix_real_ * x + offset_; }
  Mat2 derivative(const Vec2&) const override { return matrix_real_; }
  std::string describe() const override;

  const Mat2i& matrix() const { return matrix_; }
  const Vec2& offset() const { return offset_; }

 private:
  Mat2i matrix_;
  Mat2 matrix_real_;
  Vec2 offset_;
  SurfaceSpec surface_ = SurfaceSpec::torus();
};

/// Rotation of the sphere about the polar axis by `angle` turns.
class SphereRotation final : public SurfaceMap {
 public:
  SphereRotation(double area, double angle);

  const SurfaceSpec& surface() const override { return surface_; }
  Vec2 lift(const Vec2& x) const override;
  Mat2 derivative(const Vec2&) const override { return Mat2::Identity(); }
  std::string describe() const override;

  double angle() const { return angle_; }
  /// Derivative at a pole in its cap chart; the north chart reverses the sense of rotation.
  Mat2 pole_derivative(bool north = false) const;

 private:
  SurfaceSpec surface_;
  double angle_;
};

/// Area-preserving cap chart around a pole: (z, arg) -> (u, v) with
/// pi (u^2 + v^2) = A/2 -+ z. Orientation is chosen so du ^ dv = dz ^ darg.
Vec2 to_cap_chart(const SurfaceSpec& sphere, const Vec2& z_arg, bool north);
Vec2 from_cap_chart(const SurfaceSpec& sphere, const Vec2& uv, bool north);

// ---------------------------------------------------------------------------
// Hamiltonians

/// Where a Hamiltonian can be nonzero. Outside (time x region) the vector field vanishes.
struct SupportHint {
  std::optional<std::pair<double, double>> time;
  std::optional<Region> space;
};

class Hamiltonian {
 public:
  virtual ~Hamiltonian() = default;
  virtual double value(double t, const Vec2& x) const = 0;
  /// Default: central differences with step `fd_step()`.
  virtual Vec2 gradient(double t, const Vec2& x) const;
  virtual Mat2 hessian(double t, const Vec2& x) const;
  virtual bool autonomous() const { return false; }
  virtual SupportHint support() const { return {}; }
  virtual std::string describe() const = 0;

  static constexpr double fd_step() { return 1e-5; }
};

using HamiltonianPtr = std::shared_ptr<const Hamiltonian>;

class ConstantHamiltonian final : public Hamiltonian {
 public:
  explicit ConstantHamiltonian(double c) : c_(c) {}
  double value(double, const Vec2&) const override { return c_; }
  Vec2 gradient(double, const Vec2&) const override { return Vec2::Zero(); }
  Mat2 hessian(double, const Vec2&) const override { return Mat2::Zero(); }
  bool autonomous() const override { return true; }
  std::string describe() const override;

 private:
  double c_;
};

/// H = c1 x1 + c2 x2 in the chart; its flow is a translation.
class LinearHamiltonian final : public Hamiltonian {
 public:
  LinearHamiltonian(double c1, double c2) : c_(c1, c2) {}
  double value(double, const Vec2& x) const override { return c_.dot(x); }
  Vec2 gradient(double, const Vec2&) const override { return c_; }
  Mat2 hessian(double, const Vec2&) const override { return Mat2::Zero(); }
  bool autonomous() const override { return true; }
  std::string describe() const override;

 private:
  Vec2 c_;
};

/// Arbitrary evaluator; derivatives by finite differences.
class FunctionHamiltonian final : public Hamiltonian {
 public:
  using Fn = std::function<double(double, const Vec2&)>;
  FunctionHamiltonian(Fn fn, bool autonomous, std::string label = "function")
      : fn_(std::move(fn)), autonomous_(autonomous), label_(std::move(label)) {}
  double value(double t, const Vec2& x) const override { return fn_(t, x); }
  bool autonomous() const override { return autonomous_; }
  std::string describe() const override { return label_; }

 private:
  Fn fn_;
  bool autonomous_;
  std::string label_;
};

/// C-infinity step: 0 for s <= 0, 1 for s >= 1, built from exp(-1/s).
struct SmoothStep {
  static double value(double s);
  static double d1(double s);
  static double d2(double s);
};

/// Time factor: 1 on [start, end], smooth ramps of width `ramp` on either side,
/// 0 elsewhere. `always_on` makes it identically 1.
struct TimeProfile {
  bool always_on = true;
  double start = 0.0;
  double end = 1.0;
  double ramp = 0.0;

  static TimeProfile constant() { return {}; }
  static TimeProfile plateau(double start, double end, double ramp);
  double value(double t) const;
  double integral() const;
};

/// Radial plateau bump: `height` for r <= r_plateau, smooth decay to 0 at r_support.
struct RadialProfile {
  double r_plateau = 0.0;
  double r_support = 0.0;
  double height = 1.0;

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  /// integral of value over the plane, i.e. 2 pi int_0^R value(r) r dr.
  double integral() const;
};

/// H(t, x) = profile(t) * radial(|x - center|), with periodic chart distance.
class BumpHamiltonian : public Hamiltonian {
 public:
  BumpHamiltonian(SurfaceSpec surface, Vec2 center, RadialProfile radial, TimeProfile time);

  double value(double t, const Vec2& x) const override;
  Vec2 gradient(double t, const Vec2& x) const override;
  Mat2 hessian(double t, const Vec2& x) const override;
  bool autonomous() const override { return time_.always_on; }
  SupportHint support() const override;
  std::string describe() const override;

  const SurfaceSpec& surface() const { return surface_; }
  const Vec2& center() const { return center_; }
  const RadialProfile& radial() const { return radial_; }
  const TimeProfile& time_profile() const { return time_; }

 private:
  SurfaceSpec surface_;
  Vec2 center_;
  RadialProfile radial_;
  TimeProfile time_;
};

/// Results of checking the four admissibility bullets on a sample grid.
struct AdmissibilityReport {
  bool vanishes_near_time_ends = false;
  bool vanishes_outside_region = false;
  bool nonnegative = false;
  bool at_least_one_on_plateau = false;
  std::size_t samples = 0;

  bool ok() const {
    return vanishes_near_time_ends && vanishes_outside_region && nonnegative && at_least_one_on_plateau;
  }
};

/// (U, a, l)-admissible bump: >= 1 on I x D with |I| = l and area(D) = a.
class AdmissibleHamiltonian final : public BumpHamiltonian {
 public:
  AdmissibleHamiltonian(SurfaceSpec surface, Region region, double disk_area, double interval_length,
                        RadialProfile radial, TimeProfile time);

  const Region& region() const { return region_; }
  double disk_area() const { return a_; }
  double interval_length() const { return l_; }
  Region disk() const { return Region::disk(center(), radial().r_plateau); }
  std::pair<double, double> interval() const { return {time_profile().start, time_profile().end}; }

  AdmissibilityReport validate(int grid = 48) const;

 private:
  Region region_;
  double a_;
  double l_;
};

/// Plateau value exceeds 1 by this margin so "H >= 1" survives round-off.
inline constexpr double kPlateauMargin = 1e-6;

AdmissibleHamiltonian build_admissible(const SurfaceSpec& surface, const Region& region, double a, double l);

/// X with omega(X, .) = dH_t, i.e. X = (dH/dx2, -dH/dx1).
Vec2 hamiltonian_vector_field(const Hamiltonian& h, double t, const Vec2& x);

// ---------------------------------------------------------------------------
// Flows and perturbed maps

struct FlowSettings {
  double step = 1e-3;
  double newton_tol = 1e-12;
  int newton_max = 50;
};

/// Time-one map of the flow of scale * H, integrated with the implicit midpoint rule.
/// The Jacobian is the exact derivative of the discrete map (a product of Cayley
/// transforms), so its determinant is 1 up to round-off.
class HamiltonianFlow final : public SurfaceMap {
 public:
  HamiltonianFlow(SurfaceSpec surface, HamiltonianPtr h, double scale, FlowSettings settings);

  const SurfaceSpec& surface() const override { return surface_; }
  Vec2 lift(const Vec2& x) const override { return step(x).image; }
  Mat2 derivative(const Vec2& x) const override { return step(x).jacobian; }
  MapStep step(const Vec2& x) const override;
  std::string describe() const override;

  double scale() const { return scale_; }
  const HamiltonianPtr& hamiltonian() const { return h_; }

 private:
  bool outside_support(const Vec2& x) const;

  SurfaceSpec surface_;
  HamiltonianPtr h_;
  double scale_;
  FlowSettings settings_;
};

HamiltonianFlow time_one_flow(const SurfaceSpec& surface, HamiltonianPtr h, double tau,
                              const FlowSettings& settings = {});

struct Perturbation {
  double tau = 0.0;
  HamiltonianPtr h;
};

/// base o flow_n o ... o flow_1 for the listed perturbations (applied in list order).
class PerturbedMap final : public SurfaceMap {
 public:
  PerturbedMap(MapPtr base, std::vector<Perturbation> perturbations, FlowSettings settings = {});

  const SurfaceSpec& surface() const override { return base_->surface(); }
  Vec2 lift(const Vec2& x) const override { return step(x).image; }
  Mat2 derivative(const Vec2& x) const override { return step(x).jacobian; }
  MapStep step(const Vec2& x) const override;
  std::string describe() const override;

  const MapPtr& base() const { return base_; }
  const std::vector<Perturbation>& perturbations() const { return perturbations_; }
  const FlowSettings& settings() const { return settings_; }

 private:
  MapPtr base_;
  std::vector<Perturbation> perturbations_;
  std::vector<HamiltonianFlow> flows_;
  FlowSettings settings_;
};

/// phi_H = phi o (time-one flow of tau H).
PerturbedMap compose_phi_H(MapPtr base, HamiltonianPtr h, double tau, const FlowSettings& settings = {});

// ---------------------------------------------------------------------------
// Derivatives and periodic-point classification

/// d(phi^k) at x by the chain rule along the forward orbit.
Mat2 jacobian(const SurfaceMap& map, const Vec2& x, int k);

/// phi^k(x) in the covering chart, starting from x itself (not reduced).
Vec2 iterate_lift(const SurfaceMap& map, const Vec2& x, int k);

struct PeriodicPointClass {
  bool nondegenerate = false;
  bool hyperbolic = false;
  std::complex<double> eigenvalues[2];
  double trace = 0.0;
  double determinant = 0.0;
  double residual = 0.0;
};

inline constexpr double kDegenerateTolerance = 1e-8;

PeriodicPointClass classify_matrix(const Mat2& m, double tol = kDegenerateTolerance);
PeriodicPointClass classify_periodic_point(const SurfaceMap& map, const Vec2& x, int k,
                                           double residual_tol = 1e-9, double tol = kDegenerateTolerance);

// ---------------------------------------------------------------------------
// Integrals

struct VerticalLoop {
  Vec2 base = Vec2::Zero();
  int multiplicity = 1;
};

/// sum over loops of multiplicity * int_0^1 H(t, base) dt.
double integral_over_gamma(const Hamiltonian& h, std::span<const VerticalLoop> loops);

/// int over [0,1] x Sigma of H omega ^ dt, by nested adaptive quadrature.
double integral_over_mapping_torus(const Hamiltonian& h, const SurfaceSpec& surface);

/// max |H(1, x) - H(0, phi(x))| over a sample grid; Hamiltonians on Y_phi need this ~ 0.
double gluing_defect(const Hamiltonian& h, const SurfaceMap& phi, int grid = 32);

}  // namespace pfh
