#include "pfh/orbit_search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <unordered_map>

namespace pfh {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PFH_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

namespace {

// Runs fn(i) for i in [0, n); results are written by index so the outcome
// does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < n; i += static_cast<std::size_t>(workers)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<Vec2> make_seeds(const SurfaceSpec& surface, const std::optional<Region>& region, int grid) {
  require(grid >= 1, ErrorKind::validation, "seed grid must be positive");
  Vec2 lo = surface.domain_origin();
  Vec2 ext = surface.domain_extent();
  if (region) {
    if (region->shape == Region::Shape::disk) {
      lo = region->center - Vec2::Constant(region->radius);
      ext = Vec2::Constant(2.0 * region->radius);
    } else {
      lo = region->lo;
      ext = region->hi - region->lo;
    }
  }
  std::vector<Vec2> seeds;
  seeds.reserve(static_cast<std::size_t>(grid) * grid);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      Vec2 p(lo[0] + ext[0] * (i + 0.5) / grid, lo[1] + ext[1] * (j + 0.5) / grid);
      if (region && !region->contains(surface, p)) continue;
      p = surface.reduce(p);
      if (!surface.in_chart(p)) continue;
      seeds.push_back(p);
    }
  }
  return seeds;
}

struct LiftedIterate {
  Vec2 image;
  Mat2 jac;
};

LiftedIterate iterate_with_jacobian(const SurfaceMap& map, const Vec2& x, int k) {
  const auto& surface = map.surface();
  LiftedIterate r{x, Mat2::Identity()};
  for (int i = 0; i < k; ++i) {
    MapStep s = map.step(r.image);
    require(surface.in_chart(s.image), ErrorKind::validation, "orbit left the chart");
    r.jac = s.jacobian * r.jac;
    r.image = s.image;
  }
  return r;
}

Vec2 residual(const SurfaceMap& map, const Vec2& x, int k, const Vec2& m) {
  return iterate_lift(map, x, k) - x - m;
}

// Damped Newton on F(x) = Phi^k(x) - x - m.
std::optional<Vec2> polish(const SurfaceMap& map, int k, Vec2 x, const Vec2& m, const SearchSettings& s) {
  const auto& surface = map.surface();
  for (int it = 0; it <= s.newton_max; ++it) {
    const LiftedIterate li = iterate_with_jacobian(map, x, k);
    const Vec2 f = li.image - x - m;
    const double nf = f.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(nf)) return std::nullopt;
    if (nf <= s.residual_tol) return x;
    if (it == s.newton_max) break;
    const Mat2 jm = li.jac - Mat2::Identity();
    const double det = jm.determinant();
    if (std::abs(det) <= 1e-13 * std::max(1.0, jm.squaredNorm())) return std::nullopt;
    const Vec2 dx = jm.inverse() * f;
    double alpha = 1.0;
    bool accepted = false;
    for (int h = 0; h <= s.max_halvings; ++h, alpha *= 0.5) {
      const Vec2 xt = x - alpha * dx;
      if (!surface.in_chart(xt)) continue;
      Vec2 ft;
      try {
        ft = residual(map, xt, k, m);
      } catch (const Error&) {
        continue;
      }
      if (ft.allFinite() && ft.lpNorm<Eigen::Infinity>() <= (1.0 - 1e-4 * alpha) * nf) {
        x = xt;
        accepted = true;
        break;
      }
    }
    if (!accepted) return std::nullopt;
  }
  return std::nullopt;
}

// Candidate deck vectors near the seed's own displacement.
std::vector<Vec2> deck_candidates(const SurfaceSpec& surface, const Vec2& disp) {
  auto near = [](double v) {
    std::vector<double> out{std::round(v)};
    const double frac = v - std::floor(v);
    if (std::abs(frac - 0.5) < 0.25) out.push_back(std::round(v) == std::floor(v) ? std::ceil(v) : std::floor(v));
    return out;
  };
  std::vector<Vec2> out;
  const auto ys = near(disp[1]);
  if (surface.kind == SurfaceKind::sphere) {
    for (double y : ys) out.emplace_back(0.0, y);
    return out;
  }
  for (double x : near(disp[0]))
    for (double y : ys) out.emplace_back(x, y);
  return out;
}

// Spatial hash over reduced points for deduplication.
class PointIndex {
 public:
  PointIndex(const SurfaceSpec& surface, double tol) : surface_(surface), tol_(tol) {
    cell_ = std::max(4.0 * tol, 1e-4);
    wrap_ = static_cast<std::int64_t>(std::ceil(1.0 / cell_));
  }

  bool contains(const Vec2& p) const {
    const auto [ix, iy] = cell_of(p);
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        const auto it = cells_.find(key(ix + dx, iy + dy));
        if (it == cells_.end()) continue;
        for (const Vec2& q : it->second)
          if (surface_.distance(p, q) < tol_) return true;
      }
    }
    return false;
  }

  void insert(const Vec2& p) {
    const auto [ix, iy] = cell_of(p);
    cells_[key(ix, iy)].push_back(p);
  }

 private:
  std::pair<std::int64_t, std::int64_t> cell_of(const Vec2& p) const {
    return {static_cast<std::int64_t>(std::floor(p[0] / cell_)), static_cast<std::int64_t>(std::floor(p[1] / cell_))};
  }
  std::uint64_t key(std::int64_t ix, std::int64_t iy) const {
    auto mod = [&](std::int64_t v) { return ((v % wrap_) + wrap_) % wrap_; };
    if (surface_.periodic_x1()) ix = mod(ix);
    iy = mod(iy);
    return (static_cast<std::uint64_t>(ix) << 32) ^ static_cast<std::uint64_t>(iy & 0xffffffff);
  }

  const SurfaceSpec& surface_;
  double tol_;
  double cell_;
  std::int64_t wrap_;
  std::unordered_map<std::uint64_t, std::vector<Vec2>> cells_;
};

struct SeedResult {
  std::vector<Vec2> points;  // converged, reduced
};

SeedResult polish_seed(const SurfaceMap& map, int k, const Vec2& seed, const SearchSettings& s) {
  SeedResult out;
  const auto& surface = map.surface();
  try {
    const Vec2 disp = iterate_lift(map, seed, k) - seed;
    for (const Vec2& m : deck_candidates(surface, disp)) {
      try {
        if (auto x = polish(map, k, seed, m, s)) {
          const Vec2 p = surface.reduce(*x);
          if (surface.in_chart(p)) out.points.push_back(p);
        }
      } catch (const Error&) {
      }
    }
  } catch (const Error&) {
    // the seed's orbit leaves the chart or the integrator failed: skip it
  }
  return out;
}

class OrbitCollector {
 public:
  OrbitCollector(const SurfaceMap& map, const std::optional<Region>& region, const SearchSettings& s)
      : map_(map), region_(region), s_(s), index_(map.surface(), s.dedup_tol) {}

  // Returns the new orbit if p starts one of minimal period k not seen before.
  std::optional<OrbitRecord> offer(const Vec2& p, int k) {
    const auto& surface = map_.surface();
    if (index_.contains(p)) return std::nullopt;
    try {
      for (int j = 1; j < k; ++j) {
        if (k % j != 0) continue;
        if (surface.distance(surface.reduce(iterate_lift(map_, p, j)), p) < s_.dedup_tol) return std::nullopt;
      }
      OrbitRecord rec;
      rec.period = k;
      rec.points.push_back(p);
      Vec2 x = p;
      for (int i = 1; i < k; ++i) {
        x = map_(x);
        rec.points.push_back(x);
      }
      const double closing = surface.distance(map_(x), p);
      const double lifted = [&] {
        const Vec2 d = iterate_lift(map_, p, k) - p;
        return surface.displacement(Vec2::Zero(), d).lpNorm<Eigen::Infinity>();
      }();
      rec.residual = std::max(closing, lifted);
      if (rec.residual > 10.0 * s_.residual_tol) return std::nullopt;
      const Mat2 jac = jacobian(map_, p, k);
      rec.classification = classify_matrix(jac);
      rec.det_defect = std::abs(jac.determinant() - 1.0);
      if (region_)
        rec.intersects_u = std::any_of(rec.points.begin(), rec.points.end(),
                                       [&](const Vec2& q) { return region_->contains(surface, q); });
      for (const Vec2& q : rec.points) index_.insert(q);
      return rec;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

 private:
  const SurfaceMap& map_;
  std::optional<Region> region_;
  SearchSettings s_;
  PointIndex index_;
};

void validate_settings(const SearchSettings& s, int k_max) {
  require(k_max >= 1, ErrorKind::validation, "period bound must be at least 1");
  require(s.grid >= 1 && s.residual_tol > 0.0 && s.dedup_tol > 0.0 && s.newton_max >= 1 && s.max_halvings >= 0,
          ErrorKind::validation, "invalid search settings");
}

}  // namespace

std::vector<OrbitRecord> find_periodic_orbits(const SurfaceMap& map, int k_max, const std::optional<Region>& region,
                                              const SearchSettings& settings) {
  validate_settings(settings, k_max);
  const auto seeds = make_seeds(map.surface(), region, settings.grid);
  const int workers = resolve_workers(settings.workers);
  std::vector<OrbitRecord> out;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<SeedResult> results(seeds.size());
    parallel_for(seeds.size(), workers, [&](std::size_t i) { results[i] = polish_seed(map, k, seeds[i], settings); });
    OrbitCollector collector(map, region, settings);
    for (const auto& r : results)
      for (const Vec2& p : r.points)
        if (auto rec = collector.offer(p, k)) out.push_back(std::move(*rec));
  }
  return out;
}

std::int64_t count_fixed_points(const std::vector<OrbitRecord>& orbits, int j) {
  std::int64_t n = 0;
  for (const auto& o : orbits)
    if (o.period > 0 && j % o.period == 0) n += o.period;
  return n;
}

std::int64_t lefschetz_count(const Mat2i& matrix, int k) {
  require(k >= 0, ErrorKind::validation, "iterate must be nonnegative");
  if (k == 0) return 0;
  Mat2i p = Mat2i::Identity();
  for (int i = 0; i < k; ++i) p = p * matrix;
  const std::int64_t tr = p.trace();
  require(tr != 2, ErrorKind::infinite_family, "tr A^k = 2: fixed points of the iterate are not isolated");
  return std::abs(2 - tr);
}

std::optional<OrbitRecord> first_orbit_in_U(const SurfaceMap& map, const Region& u, int d_max,
                                            const SearchSettings& settings) {
  validate_settings(settings, d_max);
  const auto seeds = make_seeds(map.surface(), u, settings.grid);
  const int workers = resolve_workers(settings.workers);
  const std::size_t chunk = 64 * static_cast<std::size_t>(workers);
  for (int k = 1; k <= d_max; ++k) {
    OrbitCollector collector(map, u, settings);
    for (std::size_t start = 0; start < seeds.size(); start += chunk) {
      const std::size_t n = std::min(chunk, seeds.size() - start);
      std::vector<SeedResult> results(n);
      parallel_for(n, workers, [&](std::size_t i) { results[i] = polish_seed(map, k, seeds[start + i], settings); });
      for (const auto& r : results)
        for (const Vec2& p : r.points)
          if (auto rec = collector.offer(p, k); rec && rec->intersects_u) return rec;
    }
  }
  return std::nullopt;
}

std::optional<int> min_period_in_U(const SurfaceMap& map, const Region& u, int d_max, const SearchSettings& settings) {
  if (auto rec = first_orbit_in_U(map, u, d_max, settings)) return rec->period;
  return std::nullopt;
}

std::vector<double> default_tau_grid(double delta, int points) {
  require(delta > 0.0 && points >= 1, ErrorKind::validation, "tau grid needs delta > 0 and points >= 1");
  std::vector<double> grid;
  for (int i = 1; i <= points; ++i) grid.push_back(delta * i / points);
  return grid;
}

SweepResult first_tau_sweep(const MapPtr& base, const std::shared_ptr<const AdmissibleHamiltonian>& h, double delta,
                            const BoundResult& bound, const std::vector<double>& tau_grid,
                            const SweepSettings& settings) {
  require(base && h, ErrorKind::validation, "sweep needs a map and a Hamiltonian");
  require(delta > 0.0, ErrorKind::validation, "delta must be positive");
  require(bound.d >= 1, ErrorKind::validation, "period bound must be at least 1");
  require(!tau_grid.empty(), ErrorKind::validation, "empty tau grid");
  require(std::is_sorted(tau_grid.begin(), tau_grid.end()) && tau_grid.front() >= 0.0, ErrorKind::validation,
          "tau grid must be nonnegative and sorted");
  SweepResult res;
  res.bound_used = bound;
  res.settings = settings;
  const int d_max = static_cast<int>(bound.d);

  auto probe = [&](double tau) {
    const PerturbedMap phi = compose_phi_H(base, h, tau, settings.flow);
    return first_orbit_in_U(phi, h->region(), d_max, settings.search);
  };

  double prev = 0.0;
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    const double tau = tau_grid[i];
    auto hit = probe(tau);
    res.rows.push_back({tau, hit ? std::optional<int>(hit->period) : std::nullopt, false});
    if (!hit) {
      prev = tau;
      continue;
    }
    double best = tau;
    if (i > 0) {
      // walk back towards the previous miss: prev + (tau - prev) 2^-r
      for (int r = 1; r <= settings.refine_levels; ++r) {
        const double t = prev + (tau - prev) * std::ldexp(1.0, -r);
        auto h2 = probe(t);
        res.rows.push_back({t, h2 ? std::optional<int>(h2->period) : std::nullopt, true});
        if (!h2) break;
        best = t;
        hit = std::move(h2);
      }
    }
    res.tau_star = best;
    res.orbit = std::move(hit);
    return res;
  }
  return res;
}

}  // namespace pfh
