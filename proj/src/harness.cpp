#include "pfh/harness.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "pfh/closing_bounds.hpp"
#include "pfh/ech_capacities.hpp"
#include "pfh/orbit_search.hpp"

namespace pfh {

namespace {

using Clock = std::chrono::steady_clock;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json envelope(const std::string& command, const json& params) {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["inputs"] = params;
  return j;
}

void stamp(Report& r, Clock::time_point start) {
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  // the only non-reproducible member
  r.body["timestamp"] = {{"utc", utc_now()}, {"elapsed_ms", std::llround(ms)}};
}

const json& section(const json& p, const std::string& key) {
  static const json empty = json::object();
  return has_field(p, key) ? p[key] : empty;
}

template <class T, class Reader>
T opt(const json& obj, const std::string& key, const std::string& path, T fallback, Reader read) {
  return has_field(obj, key) ? read(obj[key], path.empty() ? key : path + "." + key) : fallback;
}

std::int64_t opt_int(const json& o, const std::string& k, const std::string& path, std::int64_t d) {
  return opt<std::int64_t>(o, k, path, d, read_int);
}
double opt_real(const json& o, const std::string& k, const std::string& path, double d) {
  return opt<double>(o, k, path, d, read_real);
}
bool opt_bool(const json& o, const std::string& k, const std::string& path, bool d) {
  return opt<bool>(o, k, path, d, read_bool);
}

BoundResult compute_bound(const std::string& surface, const BoundInput& in) {
  if (surface == "sphere") return bound_sphere(in);
  if (surface == "torus") return bound_torus(in);
  if (surface == "general") return bound_general(in);
  fail(ErrorKind::validation, "surface: expected sphere | torus | general, got '" + surface + "'");
}

json bound_json(const BoundResult& b) {
  return {{"d", b.d}, {"k", b.k}, {"tau_bound", dec(b.tau_bound)}, {"theorem", b.theorem}};
}

json classification_json(const PeriodicPointClass& c) {
  return {{"nondegenerate", c.nondegenerate},
          {"hyperbolic", c.hyperbolic},
          {"trace", dec(c.trace)},
          {"determinant", dec(c.determinant)}};
}

json orbit_json(const OrbitRecord& o) {
  json pts = json::array();
  for (const Vec2& p : o.points) pts.push_back({dec(p[0]), dec(p[1])});
  return {{"period", o.period},
          {"points", pts},
          {"residual", dec(o.residual)},
          {"classification", classification_json(o.classification)},
          {"det_defect", dec(o.det_defect)},
          {"intersects_u", o.intersects_u}};
}

SearchSettings read_search(const json& p, const std::string& path, SearchSettings s) {
  s.grid = static_cast<int>(opt_int(p, "grid", path, s.grid));
  s.residual_tol = opt_real(p, "residual_tol", path, s.residual_tol);
  s.dedup_tol = opt_real(p, "dedup_tol", path, s.dedup_tol);
  s.newton_max = static_cast<int>(opt_int(p, "newton_max", path, s.newton_max));
  s.workers = static_cast<int>(opt_int(p, "workers", path, s.workers));
  return s;
}

json search_json(const SearchSettings& s) {
  return {{"grid", s.grid},
          {"residual_tol", dec(s.residual_tol)},
          {"dedup_tol", dec(s.dedup_tol)},
          {"newton_max", s.newton_max},
          {"max_halvings", s.max_halvings}};
}

// Period bound for a closing-lemma sweep and whether any theorem backs it.
struct SweepBound {
  BoundResult bound;
  bool guaranteed = false;
  std::int64_t d0 = 1;
  std::string basis;  // how d0 was obtained
};

SweepBound sweep_bound(const MapSpec& map, const HamSpec& ham, const Rational& delta, const json& bound_section) {
  SweepBound sb;
  BoundInput in;
  in.a = ham.a;
  in.l = ham.l;
  in.delta = delta;
  in.area = map.kind == MapSpec::Kind::torus_affine ? Rational(1) : map.area;
  if (map.kind == MapSpec::Kind::sphere_rotation) {
    in.genus = 0;
    in.d0 = 1;
    sb.guaranteed = true;
    sb.basis = "genus 0: every class is rational with d0 = 1";
    sb.bound = bound_sphere(in);
  } else {
    in.genus = 1;
    std::optional<std::int64_t> d0;
    try {
      const RationalityResult rr = rationality_test(map.matrix, map.offset);
      if (rr.rational) {
        d0 = rr.d0;
        sb.basis = "rationality test of the mapping-torus class";
      } else {
        sb.basis = "irrational class";
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::undecidable) throw;
      sb.basis = std::string("rationality undecidable: ") + e.what();
    }
    sb.guaranteed = d0.has_value();
    in.d0 = d0.value_or(1);
    sb.bound = bound_torus(in);
  }
  if (has_field(bound_section, "d")) {
    // explicit search cap; the theorem bound is still reported
    sb.bound.d = read_int(bound_section["d"], "bound.d");
    sb.bound.theorem += " (search cap overridden)";
  }
  sb.d0 = in.d0;
  return sb;
}

struct SweepRun {
  SweepResult result;
  SweepBound bound;
  MapSpec map;
  HamSpec ham;
  Rational delta;
  std::vector<double> grid;
  AdmissibilityReport admissibility;
};

SweepRun do_sweep(const json& p) {
  SweepRun run;
  run.map = read_map_spec(field(p, "map", ""), "map");
  run.ham = read_ham_spec(field(p, "ham", ""), "ham");
  const json& bs = section(p, "bound");
  run.delta = read_rational(field(bs, "delta", "bound"), "bound.delta");
  require(run.delta > Rational(0), ErrorKind::validation, "bound.delta: must be positive");
  run.bound = sweep_bound(run.map, run.ham, run.delta, bs);

  const SurfaceSpec surface = run.map.surface();
  const MapPtr base = run.map.build();
  const auto h = build_hamiltonian(run.ham, surface);
  run.admissibility = h->validate();
  require(run.admissibility.ok(), ErrorKind::validation, "ham: constructed Hamiltonian failed admissibility checks");

  const json& sw = section(p, "sweep");
  SweepSettings settings;
  settings.search = read_search(sw, "sweep", settings.search);
  settings.refine_levels = static_cast<int>(opt_int(sw, "refine_levels", "sweep", settings.refine_levels));
  settings.flow.step = opt_real(sw, "step", "sweep", settings.flow.step);
  const int points = static_cast<int>(opt_int(sw, "points", "sweep", 64));
  if (has_field(sw, "taus")) {
    for (const auto& v : read_list(sw["taus"], "sweep.taus")) run.grid.push_back(read_real(v, "sweep.taus"));
  } else {
    run.grid = default_tau_grid(to_double(run.delta), points);
  }
  run.result = first_tau_sweep(base, h, to_double(run.delta), run.bound.bound, run.grid, settings);
  return run;
}

json sweep_results(const SweepRun& run) {
  json r;
  r["bound"] = bound_json(run.bound.bound);
  r["d0"] = run.bound.d0;
  r["d0_source"] = run.bound.basis;
  r["tau_star"] = run.result.tau_star ? json(dec(*run.result.tau_star)) : json(nullptr);
  r["orbit"] = run.result.orbit ? orbit_json(*run.result.orbit) : json(nullptr);
  r["grid_points"] = run.grid.size();
  r["probes"] = run.result.rows.size();
  r["admissibility"] = {{"vanishes_near_time_ends", run.admissibility.vanishes_near_time_ends},
                        {"vanishes_outside_region", run.admissibility.vanishes_outside_region},
                        {"nonnegative", run.admissibility.nonnegative},
                        {"at_least_one_on_plateau", run.admissibility.at_least_one_on_plateau},
                        {"samples", run.admissibility.samples}};
  return r;
}

std::string sweep_csv(const SweepRun& run) {
  std::ostringstream os;
  os << "tau,min_period,found\n";
  for (const auto& row : run.result.rows) {
    os << dec(row.tau) << ',' << (row.min_period ? std::to_string(*row.min_period) : "") << ','
       << (row.min_period ? "true" : "false") << '\n';
  }
  return os.str();
}

json sweep_provenance(const SweepRun& run) {
  const auto& s = run.result.settings;
  return {{"operations", {"first_tau_sweep", "compose_phi_H", "min_period_in_U"}},
          {"theorems", {run.bound.bound.theorem}},
          {"tolerances",
           {{"search", search_json(s.search)},
            {"flow_step", dec(s.flow.step)},
            {"flow_newton_tol", dec(s.flow.newton_tol)},
            {"plateau_margin", dec(kPlateauMargin)},
            {"refine_levels", s.refine_levels}}},
          {"resolution_note", "absence of an orbit means not found at this resolution"}};
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::hypothesis:
      return 3;
    case ErrorKind::not_found:
      return 4;
    case ErrorKind::integration:
    case ErrorKind::evaluation:
      return 1;
    default:
      return 2;
  }
}

json error_report(const std::string& command, const Error& e) {
  return {{"command", command}, {"version", kVersion}, {"error", {{"kind", error_kind_name(e.kind())}, {"message", e.what()}}}};
}

std::string reproducible_dump(const json& report) {
  json copy = report;
  copy.erase("timestamp");
  return copy.dump(2);
}

// ---------------------------------------------------------------------------

Report run_bound(const json& p) {
  const auto start = Clock::now();
  Report r;
  r.body = envelope("bound", p);
  const std::string surface = has_field(p, "surface") ? read_string(p["surface"], "surface") : "general";
  BoundInput in;
  in.area = read_rational(field(p, "A", ""), "A");
  in.genus = opt_int(p, "g", "", surface == "torus" ? 1 : 0);
  in.d0 = opt_int(p, "d0", "", 1);
  in.a = read_rational(field(p, "a", ""), "a");
  in.l = read_rational(field(p, "l", ""), "l");
  in.delta = read_rational(field(p, "delta", ""), "delta");
  const BoundResult b = compute_bound(surface, in);
  r.body["results"] = bound_json(b);
  r.body["provenance"] = {{"operations", {"bound_" + surface}}, {"theorems", {b.theorem}}, {"tolerances", "exact rational arithmetic"}};
  stamp(r, start);
  return r;
}

Report run_capacity(const json& p) {
  const auto start = Clock::now();
  Report r;
  r.body = envelope("capacity", p);
  ech::BallUnion<Rational> x;
  for (const auto& v : read_list(field(p, "balls", ""), "balls")) x.radii.push_back(read_rational(v, "balls"));
  require(!x.radii.empty(), ErrorKind::validation, "balls: empty ball list");
  x.validate();
  json res;
  res["volume"] = dec(x.volume());
  if (has_field(p, "k")) {
    const std::int64_t k = read_int(p["k"], "k");
    require(k >= 0, ErrorKind::validation, "k: must be nonnegative");
    require(x.radii.size() == 1 || k <= ech::kMaxUnionK, ErrorKind::validation,
            "k: unions of several balls are limited to k <= " + std::to_string(ech::kMaxUnionK));
    if (x.radii.size() == 1) {
      res["c_k"] = dec(ech::ball_capacity(k, x.radii.front()));
    } else {
      const auto all = ech::union_capacities(x, k);
      res["c_k"] = dec(all.back());
      if (k <= 1000) {
        json seq = json::array();
        for (const auto& c : all) seq.push_back(dec(c));
        res["sequence"] = seq;
      }
    }
    if (x.radii.size() == 1 && k <= 1000) {
      json seq = json::array();
      for (std::int64_t j = 0; j <= k; ++j) seq.push_back(dec(ech::ball_capacity(j, x.radii.front())));
      res["sequence"] = seq;
    }
    res["k"] = k;
  }
  if (has_field(p, "weyl_sweep")) {
    std::vector<std::string> parts;
    const std::string spec = read_string(p["weyl_sweep"], "weyl_sweep");
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    require(parts.size() == 3, ErrorKind::validation, "weyl_sweep: expected kmin:kmax:step");
    const std::int64_t kmin = read_int(json(parts[0]), "weyl_sweep"), kmax = read_int(json(parts[1]), "weyl_sweep"),
                       step = read_int(json(parts[2]), "weyl_sweep");
    require(kmin >= 1 && kmax >= kmin && step >= 1, ErrorKind::validation, "weyl_sweep: need 1 <= kmin <= kmax, step >= 1");
    require(x.radii.size() == 1 || kmax <= ech::kMaxUnionK, ErrorKind::validation,
            "weyl_sweep: unions of several balls are limited to k <= " + std::to_string(ech::kMaxUnionK));
    std::vector<Rational> all;
    if (x.radii.size() > 1) all = ech::union_capacities(x, kmax);
    std::ostringstream os;
    os << "k,c_k,ratio\n";
    std::int64_t rows = 0;
    for (std::int64_t k = kmin; k <= kmax; k += step, ++rows) {
      const Rational c = x.radii.size() == 1 ? ech::ball_capacity(k, x.radii.front()) : all[static_cast<std::size_t>(k)];
      os << k << ',' << dec(c) << ',' << dec(to_double(c * c / Rational(k))) << '\n';
    }
    r.csv = os.str();
    res["weyl_sweep"] = {{"rows", rows}, {"limit", dec(Rational(4) * x.volume())}};
  }
  r.body["results"] = res;
  r.body["provenance"] = {{"operations", {x.radii.size() == 1 ? "ball_capacity" : "union_capacities"}},
                          {"theorems", {"ball staircase c_k = d r with d^2 + d <= 2k <= d^2 + 3d", "disjoint union: max over splittings of k"}},
                          {"tolerances", "exact rational arithmetic"}};
  stamp(r, start);
  return r;
}

Report run_spectral(const json& p) {
  using namespace spectral;
  const auto start = Clock::now();
  Report r;
  r.body = envelope("spectral", p);
  std::optional<FilteredComplex> cx;
  if (has_field(p, "sphere_model")) {
    const json& sm = p["sphere_model"];
    const auto d = read_int(field(sm, "d", "sphere_model"), "sphere_model.d");
    const Rational area = has_field(sm, "A") ? read_rational(sm["A"], "sphere_model.A") : Rational(1);
    cx = SphereModel::evenly_spaced(d, area).to_complex();
  } else {
    const json& c = field(p, "complex", "");
    cx = read_complex(c.is_string() ? load_config(read_string(c, "complex")) : c);
  }
  const bool oracle = opt_bool(p, "oracle", "", false);
  const int m_max = static_cast<int>(opt_int(p, "m_max", "", 4));
  const auto& meta = cx->meta();

  json classes = json::array();
  std::vector<SpectralClass> gap_candidates;
  bool oracle_agrees = true;
  for (const auto& [label, chain] : cx->homology_basis()) {
    const SpectralClass sigma = SpectralClass::of(chain, label);
    json e;
    e["id"] = label;
    const Action c = spectral_invariant(*cx, sigma);
    e["c"] = dec(c);
    if (oracle) {
      const Action o = spectral_invariant_exhaustive(*cx, chain);
      e["oracle_c"] = dec(o);
      oracle_agrees = oracle_agrees && o == c;
    }
    if (cx->has_u_map()) {
      if (meta.d > meta.g) {
        const auto order = u_cyclic_order(*cx, sigma, meta.d, meta.g, m_max);
        e["u_cyclic_order"] = order ? json(*order) : json(nullptr);
      }
      const NovikovChain u = cx->apply_u(sigma.representative);
      if (!cx->is_boundary(u)) {
        e["u_gap"] = dec(c - spectral_invariant(*cx, u));
        gap_candidates.push_back(sigma);
      } else {
        e["u_gap"] = nullptr;
      }
    }
    classes.push_back(e);
  }
  json res;
  res["generators"] = cx->size();
  res["classes"] = classes;
  if (!gap_candidates.empty()) res["min_gap"] = dec(min_spectral_gap(*cx, gap_candidates));
  if (meta.d > meta.g) res["gap_upper_bound"] = dec(gap_upper_bound(meta.area, meta.d, meta.g));
  if (oracle) res["oracle_agrees"] = oracle_agrees;
  r.body["results"] = res;
  r.body["provenance"] = {{"operations", {"spectral_invariant", "u_cyclic_order", "min_spectral_gap"}},
                          {"theorems", {"U-cyclic gap bound: min gap <= A / (d - g + 1)"}},
                          {"tolerances", "exact rational arithmetic over F2"}};
  if (oracle && !oracle_agrees) r.exit_code = 1;
  stamp(r, start);
  return r;
}

Report run_orbits(const json& p) {
  const auto start = Clock::now();
  Report r;
  r.body = envelope("orbits", p);
  const MapSpec spec = read_map_spec(field(p, "map", ""), "map");
  const MapPtr map = spec.build();
  const int k_max = static_cast<int>(read_int(field(p, "k_max", ""), "k_max"));
  std::optional<Region> region;
  if (has_field(p, "region")) region = read_region(p["region"], "region");
  const SearchSettings s = read_search(p, "", SearchSettings{});
  const auto orbits = find_periodic_orbits(*map, k_max, region, s);
  json res;
  json list = json::array();
  for (const auto& o : orbits) list.push_back(orbit_json(o));
  res["orbits"] = list;
  json counts = json::array();
  for (int k = 1; k <= k_max; ++k) {
    json c{{"k", k}, {"fixed_points_of_iterate", count_fixed_points(orbits, k)}};
    if (spec.kind == MapSpec::Kind::torus_affine) {
      try {
        c["lefschetz"] = lefschetz_count(spec.matrix, k);
      } catch (const Error&) {
        c["lefschetz"] = nullptr;
      }
    }
    counts.push_back(c);
  }
  res["counts"] = counts;
  if (region) {
    std::optional<int> m;
    for (const auto& o : orbits)
      if (o.intersects_u && (!m || o.period < *m)) m = o.period;
    res["min_period_in_region"] = m ? json(*m) : json(nullptr);
  }
  r.body["results"] = res;
  r.body["provenance"] = {{"operations", {"find_periodic_orbits", "lefschetz_count"}},
                          {"tolerances", search_json(s)},
                          {"resolution_note", "absence of an orbit means not found at this resolution"}};
  stamp(r, start);
  return r;
}

Report run_sweep(const json& p) {
  const auto start = Clock::now();
  Report r;
  r.body = envelope("sweep", p);
  const SweepRun run = do_sweep(p);
  r.body["results"] = sweep_results(run);
  r.body["provenance"] = sweep_provenance(run);
  r.csv = sweep_csv(run);
  if (!run.result.tau_star) r.exit_code = 4;
  stamp(r, start);
  return r;
}

Report run_experiment(const json& p) {
  const auto start = Clock::now();
  Report r;
  r.body = envelope("experiment", p);
  const json& sc = section(p, "scenario");
  r.body["scenario"] = has_field(sc, "id") ? read_string(sc["id"], "scenario.id") : "unnamed";
  r.body["seed"] = opt_int(sc, "seed", "scenario", 0);
  const SweepRun run = do_sweep(p);
  json res = sweep_results(run);
  const bool found = run.result.tau_star.has_value();
  const bool within_delta = found && *run.result.tau_star <= to_double(run.delta);
  const bool within_period = found && run.result.orbit && run.result.orbit->period <= run.bound.bound.d;
  res["checks"] = {{"tau_star_le_delta", within_delta}, {"period_le_bound", within_period}};
  res["verdict"] = within_delta && within_period ? "pass" : "not found at resolution";
  res["guarantee"] = run.bound.guaranteed ? "closing-lemma bound applies" : "no theoretical guarantee";
  r.body["results"] = res;
  r.body["provenance"] = sweep_provenance(run);
  r.csv = sweep_csv(run);
  if (!(within_delta && within_period)) r.exit_code = 4;
  stamp(r, start);
  return r;
}

}  // namespace pfh
