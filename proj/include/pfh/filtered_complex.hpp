// Finite filtered F_2 complexes with Novikov-weighted U maps, and the spectral
// invariants computed from them.
//
// Generators carry exact actions; the boundary strictly lowers action, so every
// sublevel set {action < L} is a subcomplex. The spectral invariant of a class is
// the least L whose sublevel complex carries the class, i.e. the minimum over
// representatives of the maximal action appearing. It is computed by the
// standard persistence column reduction with generators ordered by (action, label).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfh/common.hpp"
#include "pfh/novikov.hpp"

namespace pfh::spectral {

using Action = Rational;

struct Generator {
  std::string label;
  Action action;
};

/// U(source) contains q^{exponent A0} target.
struct UEntry {
  std::size_t source = 0;
  std::size_t target = 0;
  std::int64_t exponent = 0;
};

struct ComplexMeta {
  std::int64_t d = 1;
  std::int64_t g = 0;
  Rational area{1};
  Rational w0{1};
};

struct ActionWindow {
  Action lo;
  Action hi;
};

class FilteredComplex {
 public:
  FilteredComplex(std::vector<Generator> generators, const std::vector<std::pair<std::size_t, std::size_t>>& boundary,
                  std::vector<UEntry> u_map, ComplexMeta meta, std::optional<ActionWindow> window = std::nullopt);

  std::size_t size() const { return gens_.size(); }
  const std::vector<Generator>& generators() const { return gens_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& boundary_pairs() const { return pairs_; }
  const std::vector<UEntry>& u_map() const { return u_; }
  const ComplexMeta& meta() const { return meta_; }
  const std::optional<ActionWindow>& window() const { return window_; }
  bool has_u_map() const { return !u_.empty(); }
  std::size_t index_of(const std::string& label) const;

  Chain zero_chain() const { return Chain(size()); }
  Chain basis_chain(std::size_t i) const;
  Chain boundary(const Chain& c) const;
  const Chain& boundary_column(std::size_t i) const { return columns_[i]; }
  /// Highest generator of a chain in filtration order, i.e. the one with maximal (action, label).
  std::optional<std::size_t> top(const Chain& c) const;

  /// c + (boundaries) with the lowest possible top generator.
  Chain reduce(Chain c) const;
  bool is_boundary(const Chain& c) const { return reduce(c).none(); }
  bool is_boundary(const NovikovChain& c) const;

  NovikovChain apply_u(const NovikovChain& c) const;
  /// [Sigma] as a multiple of A0: area / w0.
  std::int64_t sigma_exponent() const;

  /// Cycle representatives of a homology basis (one per unpaired generator).
  std::vector<std::pair<std::string, Chain>> homology_basis() const;

  /// Copy with every action moved by `delta` (window shifted as well).
  FilteredComplex with_actions_shifted(const Action& delta) const;

 private:
  void reduce_boundary();

  std::vector<Generator> gens_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<UEntry> u_;
  ComplexMeta meta_;
  std::optional<ActionWindow> window_;

  std::vector<Chain> columns_;         // boundary of each generator
  std::vector<std::size_t> order_;     // filtration order -> generator
  std::vector<std::size_t> position_;  // generator -> filtration order
  // pivot_[p] holds a reduced boundary whose top sits at filtration position p
  std::vector<std::optional<Chain>> pivot_;
  std::vector<Chain> cycle_rep_;  // V columns for positions whose reduced column vanished
};

struct SpectralClass {
  NovikovChain representative;
  std::string id;

  static SpectralClass of(const Chain& c, std::string id = {}) { return {NovikovChain::from_chain(c), std::move(id)}; }
};

/// c_sigma: least L such that sigma is carried by the sublevel complex below L.
Action spectral_invariant(const FilteredComplex& cx, const SpectralClass& sigma);
Action spectral_invariant(const FilteredComplex& cx, const NovikovChain& sigma);

/// Exhaustive min over representatives sigma + boundary of the top action; enumerates
/// all sums of boundary columns, so it is limited to 20 nonzero columns.
Action spectral_invariant_exhaustive(const FilteredComplex& cx, const Chain& sigma);

/// c_{lambda sigma}; equals c_sigma + |lambda| for nonzero lambda.
Action novikov_scale(const FilteredComplex& cx, const SpectralClass& sigma, const NovikovElement& lambda);

/// Smallest m <= m_max with U^{m(d-g+1)} sigma = q^{-m [Sigma]} sigma in homology.
std::optional<int> u_cyclic_order(const FilteredComplex& cx, const SpectralClass& sigma, std::int64_t d,
                                  std::int64_t g, int m_max);

/// min over candidates of c_sigma - c_{U sigma}.
Action min_spectral_gap(const FilteredComplex& cx, const std::vector<SpectralClass>& candidates);

/// c_{U^{i-1} sigma} - c_{U^i sigma} for i = 1..count.
std::vector<Action> u_gap_sequence(const FilteredComplex& cx, const SpectralClass& sigma, std::int64_t count);

/// A / (d - g + 1); needs d > g.
Rational gap_upper_bound(const Rational& area, std::int64_t d, std::int64_t g);

/// Actions raised by d * C (the effect of adding a constant C to the Hamiltonian).
FilteredComplex shift_by_constant(const FilteredComplex& cx, const Rational& c, std::int64_t d);

/// Sym^d H_*(S^2) model: generators e_{d,0..d}, zero differential, cyclic U.
struct SphereModel {
  std::int64_t d = 1;
  std::vector<Action> actions;  // d + 1 entries
  Rational area{1};

  static SphereModel evenly_spaced(std::int64_t d, const Rational& area, const Action& base = Action(0));
  void validate() const;
  FilteredComplex to_complex() const;
  static std::string label(std::int64_t d, std::int64_t i);
};

/// U e_{d,i} = e_{d,i-1} (i >= 1), U e_{d,0} = q^{-[S^2]} e_{d,d}.
std::pair<std::int64_t, NovikovElement> apply_U(const SphereModel& model, std::int64_t i);

}  // namespace pfh::spectral
