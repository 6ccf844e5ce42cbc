// Numerical periodic-orbit search on the torus and sphere charts.
//
// A period-k point solves Phi^k(x) = x + m in the covering chart for some deck
// vector m (Z^2 on the torus, {0} x Z on the sphere). Seeds come from a uniform
// grid; each seed is polished by damped Newton on F(x) = Phi^k(x) - x - m.
// "Not found" always means "not found at this resolution".
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pfh/closing_bounds.hpp"
#include "pfh/surface_maps.hpp"

namespace pfh {

struct SearchSettings {
  int grid = 200;              // seeds per dimension over the seeding box
  double residual_tol = 1e-9;
  double dedup_tol = 1e-6;
  int newton_max = 50;
  int max_halvings = 12;       // Armijo backtracking depth
  int workers = 0;             // 0: PFH_WORKERS from the environment, else 1
};

struct OrbitRecord {
  std::vector<Vec2> points;
  int period = 0;
  double residual = 0.0;
  PeriodicPointClass classification;
  double det_defect = 0.0;     // |det d(phi^k) - 1|
  bool intersects_u = false;
};

/// Orbits of minimal period k <= k_max. If `region` is set, seeds are restricted to it
/// and `intersects_u` is evaluated against it.
std::vector<OrbitRecord> find_periodic_orbits(const SurfaceMap& map, int k_max, const std::optional<Region>& region,
                                              const SearchSettings& settings = {});

/// Number of points fixed by phi^j for the reported orbits: sum of periods dividing j.
std::int64_t count_fixed_points(const std::vector<OrbitRecord>& orbits, int j);

/// |det(A^k - I)| = |2 - tr A^k|: fixed points of the k-th iterate of x -> A x + b.
std::int64_t lefschetz_count(const Mat2i& matrix, int k);

/// First orbit (in seed order) of minimal period k <= d_max meeting U.
std::optional<OrbitRecord> first_orbit_in_U(const SurfaceMap& map, const Region& u, int d_max,
                                            const SearchSettings& settings = {});
std::optional<int> min_period_in_U(const SurfaceMap& map, const Region& u, int d_max,
                                   const SearchSettings& settings = {});

struct SweepRow {
  double tau = 0.0;
  std::optional<int> min_period;
  bool refinement = false;
};

struct SweepSettings {
  SearchSettings search{.grid = 12};
  FlowSettings flow{};
  int refine_levels = 4;  // geometric refinement steps below the first grid hit
};

struct SweepResult {
  std::optional<double> tau_star;
  std::optional<OrbitRecord> orbit;
  BoundResult bound_used;
  std::vector<SweepRow> rows;
  SweepSettings settings;
};

/// tau_i = delta i / points for i = 1..points.
std::vector<double> default_tau_grid(double delta, int points = 64);

/// Scans tau in order, looking for an orbit of period <= bound.d meeting U for
/// phi_{tau H}; returns at the first hit (after refinement towards the previous grid point).
SweepResult first_tau_sweep(const MapPtr& base, const std::shared_ptr<const AdmissibleHamiltonian>& h, double delta,
                            const BoundResult& bound, const std::vector<double>& tau_grid,
                            const SweepSettings& settings = {});

/// Worker count: explicit value, else PFH_WORKERS, else 1.
int resolve_workers(int requested);

}  // namespace pfh
