#include "pfh/filtered_complex.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace pfh::spectral {

FilteredComplex::FilteredComplex(std::vector<Generator> generators,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& boundary_pairs,
                                 std::vector<UEntry> u_map, ComplexMeta meta, std::optional<ActionWindow> window)
    : gens_(std::move(generators)), pairs_(boundary_pairs), u_(std::move(u_map)), meta_(meta), window_(window) {
  const std::size_t n = gens_.size();
  require(n > 0, ErrorKind::validation, "complex needs at least one generator");
  std::set<std::string> labels;
  for (const auto& g : gens_) {
    require(!g.label.empty(), ErrorKind::validation, "generator labels must be nonempty");
    require(labels.insert(g.label).second, ErrorKind::validation, "duplicate generator label '" + g.label + "'");
  }
  require(meta_.w0 > Rational(0), ErrorKind::validation, "meta.w0 must be positive");
  require(meta_.area > Rational(0), ErrorKind::validation, "meta.A must be positive");
  require(meta_.g >= 0 && meta_.d >= 1, ErrorKind::validation, "meta needs d >= 1 and g >= 0");
  if (window_) {
    require(window_->lo <= window_->hi, ErrorKind::validation, "action window is empty");
    for (const auto& g : gens_) {
      require(g.action >= window_->lo && g.action <= window_->hi, ErrorKind::window,
              "generator '" + g.label + "' lies outside the declared action window");
    }
  }

  columns_.assign(n, Chain(n));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [src, tgt] : pairs_) {
    require(src < n && tgt < n, ErrorKind::validation, "boundary entry refers to an unknown generator");
    require(seen.insert({src, tgt}).second, ErrorKind::validation,
            "duplicate boundary entry " + gens_[src].label + " -> " + gens_[tgt].label);
    require(gens_[tgt].action < gens_[src].action, ErrorKind::validation,
            "boundary must strictly decrease action: " + gens_[src].label + " -> " + gens_[tgt].label);
    columns_[src].set(tgt);
  }
  for (std::size_t i = 0; i < n; ++i) {
    require(boundary(columns_[i]).none(), ErrorKind::validation,
            "boundary does not square to zero at '" + gens_[i].label + "'");
  }

  if (!u_.empty()) {
    std::set<std::tuple<std::size_t, std::size_t, std::int64_t>> useen;
    std::set<std::int64_t> exps;
    for (const auto& e : u_) {
      require(e.source < n && e.target < n, ErrorKind::validation, "u_map entry refers to an unknown generator");
      require(useen.insert({e.source, e.target, e.exponent}).second, ErrorKind::validation, "duplicate u_map entry");
      exps.insert(e.exponent);
    }
    (void)sigma_exponent();
    // U must commute with the boundary, one Novikov exponent at a time
    for (std::size_t i = 0; i < n; ++i) {
      const NovikovChain ui = apply_u(NovikovChain::from_chain(basis_chain(i)));
      NovikovChain d_ui(n);
      for (const auto& [e, c] : ui.terms()) d_ui.add(e, boundary(c));
      const NovikovChain u_di = apply_u(NovikovChain::from_chain(columns_[i]));
      require(d_ui == u_di, ErrorKind::validation, "u_map is not a chain map at '" + gens_[i].label + "'");
    }
  }

  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    if (gens_[a].action != gens_[b].action) return gens_[a].action < gens_[b].action;
    return gens_[a].label < gens_[b].label;
  });
  position_.resize(n);
  for (std::size_t p = 0; p < n; ++p) position_[order_[p]] = p;
  reduce_boundary();
}

std::size_t FilteredComplex::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (gens_[i].label == label) return i;
  }
  fail(ErrorKind::validation, "unknown generator '" + label + "'");
}

Chain FilteredComplex::basis_chain(std::size_t i) const {
  require(i < size(), ErrorKind::validation, "generator index out of range");
  Chain c(size());
  c.set(i);
  return c;
}

Chain FilteredComplex::boundary(const Chain& c) const {
  require(c.size() == size(), ErrorKind::validation, "chain dimension mismatch");
  Chain out(size());
  for (auto i = c.find_first(); i != Chain::npos; i = c.find_next(i)) out ^= columns_[i];
  return out;
}

std::optional<std::size_t> FilteredComplex::top(const Chain& c) const {
  std::optional<std::size_t> best;
  for (auto i = c.find_first(); i != Chain::npos; i = c.find_next(i)) {
    if (!best || position_[i] > position_[*best]) best = i;
  }
  return best;
}

void FilteredComplex::reduce_boundary() {
  const std::size_t n = size();
  pivot_.assign(n, std::nullopt);
  std::vector<std::optional<Chain>> pivot_v(n);
  std::vector<std::optional<Chain>> zero_v(n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t gen = order_[p];
    Chain col = columns_[gen];
    Chain v = basis_chain(gen);
    while (auto t = top(col)) {
      const std::size_t low = position_[*t];
      if (!pivot_[low]) break;
      col ^= *pivot_[low];
      v ^= *pivot_v[low];
    }
    if (auto t = top(col)) {
      pivot_[position_[*t]] = col;
      pivot_v[position_[*t]] = v;
    } else {
      zero_v[p] = v;
    }
  }
  cycle_rep_.assign(n, Chain());
  for (std::size_t p = 0; p < n; ++p) {
    if (zero_v[p]) cycle_rep_[p] = *zero_v[p];
  }
}

Chain FilteredComplex::reduce(Chain c) const {
  require(c.size() == size(), ErrorKind::validation, "chain dimension mismatch");
  while (auto t = top(c)) {
    const auto& piv = pivot_[position_[*t]];
    if (!piv) break;
    c ^= *piv;
  }
  return c;
}

bool FilteredComplex::is_boundary(const NovikovChain& c) const {
  for (const auto& [e, chain] : c.terms()) {
    if (!is_boundary(chain)) return false;
  }
  return true;
}

NovikovChain FilteredComplex::apply_u(const NovikovChain& c) const {
  require(c.dimension() == size(), ErrorKind::validation, "chain dimension mismatch");
  NovikovChain out(size());
  for (const auto& [j, chain] : c.terms()) {
    for (auto i = chain.find_first(); i != Chain::npos; i = chain.find_next(i)) {
      for (const auto& e : u_) {
        if (e.source == i) out.toggle(j + e.exponent, e.target);
      }
    }
  }
  return out;
}

std::int64_t FilteredComplex::sigma_exponent() const {
  const Rational q = meta_.area / meta_.w0;
  require(q.denominator() == 1, ErrorKind::validation, "meta.A must be an integer multiple of meta.w0");
  return q.numerator();
}

std::vector<std::pair<std::string, Chain>> FilteredComplex::homology_basis() const {
  std::vector<std::pair<std::string, Chain>> out;
  for (std::size_t p = 0; p < size(); ++p) {
    if (cycle_rep_[p].size() == size() && !pivot_[p]) out.emplace_back(gens_[order_[p]].label, cycle_rep_[p]);
  }
  return out;
}

FilteredComplex FilteredComplex::with_actions_shifted(const Action& delta) const {
  auto gens = gens_;
  for (auto& g : gens) g.action += delta;
  std::optional<ActionWindow> w = window_;
  if (w) {
    w->lo += delta;
    w->hi += delta;
  }
  return FilteredComplex(std::move(gens), pairs_, u_, meta_, w);
}

// ---------------------------------------------------------------------------

Action spectral_invariant(const FilteredComplex& cx, const NovikovChain& sigma) {
  std::optional<Action> best;
  for (const auto& [j, chain] : sigma.terms()) {
    require(cx.boundary(chain).none(), ErrorKind::validation, "class representative is not a cycle");
    const Chain r = cx.reduce(chain);
    if (auto t = cx.top(r)) {
      const Action c = cx.generators()[*t].action + Rational(j) * cx.meta().w0;
      if (!best || c > *best) best = c;
    }
  }
  if (!best) fail(ErrorKind::validation, "spectral invariant of zero class undefined");
  if (const auto& w = cx.window(); w && (*best < w->lo || *best > w->hi))
    fail(ErrorKind::window, "spectral invariant " + to_decimal_string(*best) + " falls outside the action window");
  return *best;
}

Action spectral_invariant(const FilteredComplex& cx, const SpectralClass& sigma) {
  return spectral_invariant(cx, sigma.representative);
}

Action novikov_scale(const FilteredComplex& cx, const SpectralClass& sigma, const NovikovElement& lambda) {
  require(!lambda.is_zero(), ErrorKind::validation, "cannot scale by the zero Novikov element");
  return spectral_invariant(cx, sigma.representative.times(lambda));
}

Action spectral_invariant_exhaustive(const FilteredComplex& cx, const Chain& sigma) {
  require(!cx.is_boundary(sigma), ErrorKind::validation, "spectral invariant of zero class undefined");
  std::vector<Chain> cols;
  for (std::size_t i = 0; i < cx.size(); ++i)
    if (cx.boundary_column(i).any()) cols.push_back(cx.boundary_column(i));
  require(cols.size() <= 20, ErrorKind::unsupported, "exhaustive oracle limited to 20 boundary columns");
  std::optional<Action> best;
  const std::uint64_t subsets = std::uint64_t{1} << cols.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    Chain c = sigma;
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (mask >> j & 1U) c ^= cols[j];
    std::optional<Action> top;
    for (std::size_t i = c.find_first(); i != Chain::npos; i = c.find_next(i))
      if (!top || cx.generators()[i].action > *top) top = cx.generators()[i].action;
    if (top && (!best || *top < *best)) best = top;
  }
  return *best;
}

std::optional<int> u_cyclic_order(const FilteredComplex& cx, const SpectralClass& sigma, std::int64_t d,
                                  std::int64_t g, int m_max) {
  require(d > g, ErrorKind::hypothesis, "U-cyclicity needs d > g");
  require(m_max >= 1, ErrorKind::validation, "m_max must be >= 1");
  require(cx.has_u_map(), ErrorKind::validation, "complex has no U map");
  require(!cx.is_boundary(sigma.representative), ErrorKind::validation, "class is zero in homology");
  const std::int64_t steps = d - g + 1;
  const std::int64_t s = cx.sigma_exponent();
  NovikovChain x = sigma.representative;
  for (int m = 1; m <= m_max; ++m) {
    for (std::int64_t i = 0; i < steps; ++i) x = cx.apply_u(x);
    if (cx.is_boundary(x)) return std::nullopt;
    if (cx.is_boundary(x + sigma.representative.shifted(-m * s))) return m;
  }
  return std::nullopt;
}

Action min_spectral_gap(const FilteredComplex& cx, const std::vector<SpectralClass>& candidates) {
  require(!candidates.empty(), ErrorKind::validation, "minimal spectral gap needs at least one candidate");
  std::optional<Action> best;
  for (const auto& sigma : candidates) {
    const NovikovChain u = cx.apply_u(sigma.representative);
    require(!cx.is_boundary(u), ErrorKind::validation, "candidate '" + sigma.id + "' has U sigma = 0");
    const Action gap = spectral_invariant(cx, sigma) - spectral_invariant(cx, u);
    require(gap >= Action(0), ErrorKind::validation,
            "negative spectral gap " + to_decimal_string(gap) + " for candidate '" + sigma.id + "'");
    if (!best || gap < *best) best = gap;
  }
  return *best;
}

std::vector<Action> u_gap_sequence(const FilteredComplex& cx, const SpectralClass& sigma, std::int64_t count) {
  std::vector<Action> gaps;
  NovikovChain x = sigma.representative;
  Action prev = spectral_invariant(cx, x);
  for (std::int64_t i = 0; i < count; ++i) {
    x = cx.apply_u(x);
    const Action c = spectral_invariant(cx, x);
    gaps.push_back(prev - c);
    prev = c;
  }
  return gaps;
}

Rational gap_upper_bound(const Rational& area, std::int64_t d, std::int64_t g) {
  require(d > g, ErrorKind::hypothesis, "gap bound needs d > g");
  require(area > Rational(0), ErrorKind::validation, "area must be positive");
  return area / Rational(d - g + 1);
}

FilteredComplex shift_by_constant(const FilteredComplex& cx, const Rational& c, std::int64_t d) {
  return cx.with_actions_shifted(Rational(d) * c);
}

// ---------------------------------------------------------------------------

SphereModel SphereModel::evenly_spaced(std::int64_t d, const Rational& area, const Action& base) {
  SphereModel m;
  m.d = d;
  m.area = area;
  for (std::int64_t i = 0; i <= d; ++i) m.actions.push_back(base + area * Rational(i, d + 1));
  m.validate();
  return m;
}

void SphereModel::validate() const {
  require(d >= 1, ErrorKind::validation, "sphere model needs d >= 1");
  require(area > Rational(0), ErrorKind::validation, "sphere model needs positive area");
  require(actions.size() == static_cast<std::size_t>(d + 1), ErrorKind::validation,
          "sphere model needs d + 1 actions");
}

std::string SphereModel::label(std::int64_t d, std::int64_t i) {
  return "e_" + std::to_string(d) + "_" + std::to_string(i);
}

FilteredComplex SphereModel::to_complex() const {
  validate();
  std::vector<Generator> gens;
  for (std::int64_t i = 0; i <= d; ++i) gens.push_back({label(d, i), actions[static_cast<std::size_t>(i)]});
  std::vector<UEntry> u;
  for (std::int64_t i = 0; i <= d; ++i) {
    const auto [j, factor] = apply_U(*this, i);
    u.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), factor.leading_exponent()});
  }
  return FilteredComplex(std::move(gens), {}, std::move(u), ComplexMeta{d, 0, area, area});
}

std::pair<std::int64_t, NovikovElement> apply_U(const SphereModel& model, std::int64_t i) {
  require(i >= 0 && i <= model.d, ErrorKind::validation, "sphere model index out of range");
  if (i >= 1) return {i - 1, NovikovElement::one()};
  return {model.d, NovikovElement::monomial(-1)};
}

}  // namespace pfh::spectral
