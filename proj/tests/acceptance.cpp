// Acceptance run: one PASS/FAIL line per criterion. Tolerances and time limits are fixed here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "pfh/closing_bounds.hpp"
#include "pfh/ech_capacities.hpp"
#include "pfh/filtered_complex.hpp"
#include "pfh/harness.hpp"
#include "pfh/orbit_search.hpp"

using namespace pfh;
using namespace pfh::spectral;

namespace {

constexpr double kStaircaseMs = 1.0;
constexpr double kWeylMs = 1000.0;
constexpr double kUnionMs = 5000.0;
constexpr double kOracleMs = 30000.0;
constexpr double kLefschetzMs = 60000.0;
constexpr double kResidualTol = 1e-9;
constexpr double kDetTol = 1e-8;
constexpr int kLefschetzGrid = 200;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s  %s (%s)\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

FilteredComplex with_meta(const oracle::SmallComplex& s, const Rational& w0) {
  std::vector<Generator> gens;
  for (std::size_t i = 0; i < s.actions.size(); ++i) gens.push_back({s.labels[i], s.actions[i]});
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < s.col.size(); ++i)
    for (std::size_t j = 0; j < s.col.size(); ++j)
      if (s.col[i] >> j & 1U) pairs.emplace_back(i, j);
  return FilteredComplex(std::move(gens), pairs, {}, ComplexMeta{1, 0, w0, w0}, std::nullopt);
}

Outcome staircase() {
  const std::int64_t expect[] = {0, 1, 1, 2, 2, 2, 3, 3, 3, 3};
  const auto t0 = Clock::now();
  bool ok = true;
  for (std::int64_t k = 0; k <= 9; ++k) ok = ok && ech::ball_capacity(k, Rational(1)) == Rational(expect[k]);
  const double t = ms_since(t0);
  return {ok && t < kStaircaseMs, fmt("%.4f ms", t)};
}

Outcome weyl() {
  const auto t0 = Clock::now();
  std::int64_t bad = 0;
  for (std::int64_t k = 100; k <= 100000; ++k) {
    // |d^2/k - 2| <= 5/sqrt(k)  <=>  (d^2 - 2k)^2 <= 25 k
    const std::int64_t d = ech::ball_index(k);
    const std::int64_t e = d * d - 2 * k;
    if (e * e > 25 * k) ++bad;
  }
  const double t = ms_since(t0);
  return {bad == 0 && t < kWeylMs, std::to_string(bad) + " violations, " + fmt("%.1f ms", t)};
}

Outcome union_dp() {
  const auto t0 = Clock::now();
  int lists = 0, mismatches = 0;
  std::vector<Rational> radii;
  std::function<void()> rec = [&] {
    if (!radii.empty()) {
      ++lists;
      const auto dp = ech::union_capacities(ech::BallUnion<Rational>{radii}, 25);
      for (std::int64_t k = 0; k <= 25; ++k)
        if (dp[static_cast<std::size_t>(k)] != oracle::union_capacity_bruteforce(radii, k)) ++mismatches;
    }
    if (radii.size() == 3) return;
    for (int r = 1; r <= 3; ++r) {
      radii.push_back(Rational(r));
      rec();
      radii.pop_back();
    }
  };
  rec();
  const double t = ms_since(t0);
  return {mismatches == 0 && t < kUnionMs,
          std::to_string(lists) + " lists, " + std::to_string(mismatches) + " mismatches, " + fmt("%.1f ms", t)};
}

Outcome bounds() {
  int points = 0, mismatches = 0;
  for (int i = 1; i <= 10; ++i) {
    const Rational area(i, 2);
    for (int j = 1; j <= 10; ++j) {
      const Rational a = area * Rational(j, 11);
      for (int m = 1; m <= 10; ++m) {
        const Rational l(m, 11);
        for (int n = 1; n <= 10; ++n) {
          BoundInput in;
          in.area = area;
          in.a = a;
          in.l = l;
          in.delta = a / l * Rational(n, 10);
          ++points;
          in.genus = 0;
          in.d0 = 1;
          if (bound_general(in).d != bound_sphere(in).d) ++mismatches;
          in.genus = 1;
          in.d0 = 1 + (i + j + m + n) % 3;
          if (bound_general(in).d != bound_torus(in).d) ++mismatches;
        }
      }
    }
  }
  BoundInput w;
  w.area = Rational(1);
  w.a = Rational(1, 10);
  w.l = Rational(1, 2);
  w.delta = Rational(1, 5);
  const std::int64_t ds = bound_sphere(w).d;
  w.genus = 1;
  const std::int64_t dt = bound_torus(w).d;
  return {mismatches == 0 && ds == 10 && dt == 11,
          std::to_string(points) + " points, " + std::to_string(mismatches) + " mismatches, sphere " +
              std::to_string(ds) + ", torus " + std::to_string(dt)};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240501);
  int classes = 0, mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 10;
    const auto small = oracle::random_complex(rng, n, trial % 4 == 0);
    const auto cx = oracle::to_library(small);
    for (std::uint32_t sigma : oracle::nonzero_classes(small)) {
      ++classes;
      const auto expect = oracle::spectral_bruteforce(small, sigma);
      const auto got = spectral_invariant(cx, SpectralClass::of(oracle::to_chain(sigma, static_cast<std::size_t>(n))));
      if (!expect || got != *expect) ++mismatches;
    }
  }
  const double t = ms_since(t0);
  return {mismatches == 0 && classes > 0 && t < kOracleMs,
          "200 complexes, " + std::to_string(classes) + " classes, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.1f ms", t)};
}

Outcome scaling() {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> exps(-3, 3), count(1, 3), wden(1, 7), pick(0, 1 << 20);
  int pairs = 0, mismatches = 0;
  while (pairs < 100) {
    const auto small = oracle::random_complex(rng, 2 + pairs % 8, pairs % 3 == 0);
    const auto classes = oracle::nonzero_classes(small);
    if (classes.empty()) continue;
    const Rational w0(wden(rng), wden(rng));
    const auto cx = with_meta(small, w0);
    const auto sigma = SpectralClass::of(oracle::to_chain(classes[static_cast<std::size_t>(pick(rng)) % classes.size()],
                                                          small.actions.size()));
    NovikovElement lambda;
    while (lambda.is_zero()) {
      const int terms = count(rng);
      for (int t = 0; t < terms; ++t) lambda = lambda + NovikovElement::monomial(exps(rng));
    }
    ++pairs;
    if (novikov_scale(cx, sigma, lambda) != spectral_invariant(cx, sigma) + lambda.norm(w0)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(pairs) + " pairs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome shifts() {
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 8), deg(1, 4);
  int complexes = 0, checked = 0, mismatches = 0;
  while (complexes < 100) {
    const auto small = oracle::random_complex(rng, 1 + complexes % 10, complexes % 2 == 0);
    const auto classes = oracle::nonzero_classes(small);
    if (classes.empty()) continue;
    ++complexes;
    const auto cx = oracle::to_library(small);
    const Rational c(num(rng), den(rng));
    const std::int64_t d = deg(rng);
    const auto shifted = shift_by_constant(cx, c, d);
    for (std::uint32_t s : classes) {
      const auto sigma = SpectralClass::of(oracle::to_chain(s, small.actions.size()));
      ++checked;
      if (spectral_invariant(shifted, sigma) != spectral_invariant(cx, sigma) + Rational(d) * c) ++mismatches;
    }
  }
  return {mismatches == 0,
          "100 complexes, " + std::to_string(checked) + " classes, " + std::to_string(mismatches) + " mismatches"};
}

Outcome sphere_models() {
  int order_bad = 0, gap_bad = 0, models = 0;
  for (std::int64_t d = 1; d <= 10; ++d) {
    const auto cx = SphereModel::evenly_spaced(d, Rational(1)).to_complex();
    for (std::int64_t i = 0; i <= d; ++i) {
      Chain e(static_cast<std::size_t>(d + 1));
      e.set(static_cast<std::size_t>(i));
      const auto order = u_cyclic_order(cx, SpectralClass::of(e), d, 0, 3);
      if (!order || *order != 1) ++order_bad;
    }
  }
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> anum(1, 12), aden(1, 5), frac(0, 999);
  for (std::int64_t d = 1; d <= 10; ++d) {
    for (int trial = 0; trial < 20; ++trial) {
      SphereModel m;
      m.d = d;
      m.area = Rational(anum(rng), aden(rng));
      std::vector<int> cuts;
      for (std::int64_t i = 0; i <= d; ++i) cuts.push_back(frac(rng));
      std::sort(cuts.begin(), cuts.end());
      for (int c : cuts) m.actions.push_back(m.area * Rational(c, 1000));
      const auto cx = m.to_complex();
      std::vector<SpectralClass> cands;
      for (std::int64_t i = 0; i <= d; ++i) {
        Chain e(static_cast<std::size_t>(d + 1));
        e.set(static_cast<std::size_t>(i));
        cands.push_back(SpectralClass::of(e));
      }
      ++models;
      if (min_spectral_gap(cx, cands) > gap_upper_bound(m.area, d, 0)) ++gap_bad;
    }
  }
  return {order_bad == 0 && gap_bad == 0, std::to_string(order_bad) + " order failures, " + std::to_string(gap_bad) +
                                              " gap violations over " + std::to_string(models) + " random models"};
}

Outcome lefschetz() {
  const AffineTorusMap cat = AffineTorusMap::cat_map();
  SearchSettings s;
  s.grid = kLefschetzGrid;
  s.residual_tol = kResidualTol;
  const auto t0 = Clock::now();
  const auto orbits = find_periodic_orbits(cat, 5, std::nullopt, s);
  const double t = ms_since(t0);
  const std::int64_t expect[] = {1, 5, 16, 45, 121};
  std::string counts;
  bool ok = true;
  for (int k = 1; k <= 5; ++k) {
    const std::int64_t n = count_fixed_points(orbits, k);
    ok = ok && n == expect[k - 1] && lefschetz_count(cat.matrix(), k) == n;
    counts += (k > 1 ? "," : "") + std::to_string(n);
  }
  double worst = 0.0;
  for (const auto& o : orbits) worst = std::max(worst, o.residual);
  return {ok && worst <= kResidualTol && t < kLefschetzMs,
          "counts " + counts + ", max residual " + fmt("%.2e", worst) + ", " + fmt("%.0f ms", t)};
}

Outcome area_preservation() {
  const SurfaceSpec torus = SurfaceSpec::torus();
  std::vector<std::pair<std::string, HamiltonianPtr>> bumps;
  bumps.emplace_back("admissible disk", std::make_shared<const AdmissibleHamiltonian>(
                                            build_admissible(torus, Region::disk(Vec2(0.5, 0.5), 0.2), 0.05, 0.5)));
  bumps.emplace_back("autonomous bump", std::make_shared<const BumpHamiltonian>(
                                            torus, Vec2(0.3, 0.7), RadialProfile{0.1, 0.25, 2.0}, TimeProfile::constant()));
  bumps.emplace_back("admissible rectangle",
                     std::make_shared<const AdmissibleHamiltonian>(
                         build_admissible(torus, Region::rectangle(Vec2(0.05, 0.1), Vec2(0.45, 0.6)), 0.08, 0.4)));
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int samples = 0;
  for (const auto& [name, h] : bumps) {
    const auto flow = time_one_flow(torus, h, 0.7);
    for (int i = 0; i < 1000; ++i) {
      const Vec2 x(u(rng), u(rng));
      worst = std::max(worst, std::abs(flow.step(x).jacobian.determinant() - 1.0));
      ++samples;
    }
  }
  return {worst <= kDetTol, std::to_string(samples) + " samples over 3 bumps, max |det - 1| " + fmt("%.2e", worst)};
}

Outcome sweeps() {
  std::string detail;
  bool ok = true;
  for (const char* b : {"0", "1/2"}) {
    const json p = {{"map", {{"kind", "torus_affine"}, {"A", "1,0,0,1"}, {"b", {b, "0"}}}},
                    {"ham", {{"a", "0.05"}, {"l", "0.5"}, {"region", {{"shape", "disk"}, {"center", "0.5,0.5"}, {"radius", "0.2"}}}}},
                    {"bound", {{"delta", "0.1"}}}};
    const auto r = run_experiment(p);
    const auto& res = r.body["results"];
    const bool pass = r.exit_code == 0 && res["verdict"] == "pass";
    ok = ok && pass;
    detail += std::string(detail.empty() ? "" : "; ") + "b=(" + b + ",0): tau*=" +
              (res["tau_star"].is_null() ? std::string("none") : res["tau_star"].get<std::string>()) + " period=" +
              (res["orbit"].is_null() ? std::string("none") : std::to_string(res["orbit"]["period"].get<int>())) +
              " bound=" + std::to_string(res["bound"]["d"].get<std::int64_t>());
  }
  return {ok, detail};
}

Outcome sharpness() {
  const auto w = sharpness_witness(Rational(1), Rational(3, 10), 10000);
  return {w.n == 3 && w.disjoint && w.samples == 10000 && w.area_u > 0.3,
          "n=" + std::to_string(w.n) + ", area(U)=" + fmt("%.4f", w.area_u) + ", " + std::to_string(w.samples) +
              " samples, " + (w.disjoint ? "disjoint" : "overlapping")};
}

}  // namespace

int main() {
  report(1, "ball capacity staircase", staircase);
  report(2, "ball Weyl law", weyl);
  report(3, "union DP vs enumeration", union_dp);
  report(4, "bound consistency", bounds);
  report(5, "spectral invariant vs exhaustive oracle", oracle_equivalence);
  report(6, "Novikov scaling", scaling);
  report(7, "constant shift", shifts);
  report(8, "U-cyclicity and gap bound", sphere_models);
  report(9, "cat map Lefschetz counts", lefschetz);
  report(10, "area preservation", area_preservation);
  report(11, "closing sweeps", sweeps);
  report(12, "sharpness witness", sharpness);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
