#include <cmath>
#include <sstream>

#include "pfh/surface_maps.hpp"

namespace pfh {

namespace {

/// D(X_H) for X = (H_2, -H_1); trace zero whenever the Hessian is symmetric.
Mat2 vector_field_derivative(const Mat2& hess) {
  Mat2 d;
  d << hess(1, 0), hess(1, 1), -hess(0, 0), -hess(0, 1);
  return d;
}

}  // namespace

HamiltonianFlow::HamiltonianFlow(SurfaceSpec surface, HamiltonianPtr h, double scale, FlowSettings settings)
    : surface_(surface), h_(std::move(h)), scale_(scale), settings_(settings) {
  surface_.validate();
  require(h_ != nullptr, ErrorKind::validation, "flow needs a Hamiltonian");
  require(scale_ >= 0.0 && std::isfinite(scale_), ErrorKind::validation, "flow scale tau must be >= 0");
  require(settings_.step > 0.0 && settings_.step <= 1.0, ErrorKind::validation, "integrator step must lie in (0,1]");
  require(settings_.newton_tol > 0.0 && settings_.newton_max >= 1, ErrorKind::validation, "bad Newton settings");
}

bool HamiltonianFlow::outside_support(const Vec2& x) const {
  const SupportHint hint = h_->support();
  if (!hint.space) return false;
  const Region& r = *hint.space;
  if (r.shape == Region::Shape::disk) return surface_.distance(r.center, x) >= r.radius;
  return !r.contains(surface_, x);
}

MapStep HamiltonianFlow::step(const Vec2& x) const {
  MapStep out{x, Mat2::Identity()};
  if (scale_ == 0.0 || outside_support(x)) return out;

  const SupportHint hint = h_->support();
  const int n = static_cast<int>(std::ceil(1.0 / settings_.step - 1e-9));
  const double dt = 1.0 / n;
  const double c = dt * scale_;

  Vec2 y = x;
  for (int i = 0; i < n; ++i) {
    const double t_mid = (i + 0.5) * dt;
    if (hint.time && (t_mid <= hint.time->first || t_mid >= hint.time->second)) continue;

    // solve z = y + c X(t_mid, (y + z) / 2) by Newton
    Vec2 z = y + c * hamiltonian_vector_field(*h_, t_mid, y);
    Mat2 dx = Mat2::Zero();
    bool converged = false;
    for (int it = 0; it < settings_.newton_max; ++it) {
      const Vec2 mid = 0.5 * (y + z);
      const Vec2 g = z - y - c * hamiltonian_vector_field(*h_, t_mid, mid);
      dx = vector_field_derivative(h_->hessian(t_mid, mid));
      if (g.lpNorm<Eigen::Infinity>() <= settings_.newton_tol) {
        converged = true;
        break;
      }
      const Mat2 dg = Mat2::Identity() - 0.5 * c * dx;
      const Vec2 delta = dg.partialPivLu().solve(g);
      z -= delta;
      if (delta.lpNorm<Eigen::Infinity>() <= settings_.newton_tol) {
        dx = vector_field_derivative(h_->hessian(t_mid, 0.5 * (y + z)));
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "implicit midpoint Newton did not converge at t=" << to_decimal_string(t_mid) << " x=("
         << to_decimal_string(y[0]) << "," << to_decimal_string(y[1]) << ")";
      fail(ErrorKind::integration, os.str());
    }
    if (!surface_.in_chart(z)) fail(ErrorKind::integration, "flow left the chart at t=" + to_decimal_string(t_mid));

    const Mat2 half = 0.5 * c * dx;
    const Mat2 cayley = (Mat2::Identity() - half).inverse() * (Mat2::Identity() + half);
    out.jacobian = cayley * out.jacobian;
    y = z;
  }
  out.image = y;
  return out;
}

std::string HamiltonianFlow::describe() const {
  return "time-one flow of " + to_decimal_string(scale_) + " * (" + h_->describe() + ")";
}

HamiltonianFlow time_one_flow(const SurfaceSpec& surface, HamiltonianPtr h, double tau, const FlowSettings& settings) {
  return HamiltonianFlow(surface, std::move(h), tau, settings);
}

PerturbedMap::PerturbedMap(MapPtr base, std::vector<Perturbation> perturbations, FlowSettings settings)
    : base_(std::move(base)), perturbations_(std::move(perturbations)), settings_(settings) {
  require(base_ != nullptr, ErrorKind::validation, "perturbed map needs a base map");
  flows_.reserve(perturbations_.size());
  for (const auto& p : perturbations_) flows_.emplace_back(base_->surface(), p.h, p.tau, settings_);
}

MapStep PerturbedMap::step(const Vec2& x) const {
  MapStep acc{x, Mat2::Identity()};
  for (const auto& flow : flows_) {
    const MapStep s = flow.step(acc.image);
    acc.jacobian = s.jacobian * acc.jacobian;
    acc.image = s.image;
  }
  const MapStep b = base_->step(acc.image);
  return {b.image, b.jacobian * acc.jacobian};
}

std::string PerturbedMap::describe() const {
  std::string s = base_->describe();
  for (const auto& f : flows_) s += " o " + f.describe();
  return s;
}

PerturbedMap compose_phi_H(MapPtr base, HamiltonianPtr h, double tau, const FlowSettings& settings) {
  require(tau >= 0.0, ErrorKind::validation, "tau must be nonnegative");
  return PerturbedMap(std::move(base), {Perturbation{tau, std::move(h)}}, settings);
}

}  // namespace pfh
