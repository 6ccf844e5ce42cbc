// One-variable Novikov field over F_2, truncated to finitely many terms.
//
// An element is sum_j c_j q^{j A0} with c_j in F_2; A0 pairs with [omega_phi]
// to the positive quantum w0, and |lambda| = max{ j w0 : c_j != 0 }.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include <boost/dynamic_bitset.hpp>

#include "pfh/common.hpp"

namespace pfh::spectral {

class NovikovElement {
 public:
  NovikovElement() = default;
  explicit NovikovElement(std::set<std::int64_t> exponents) : exps_(std::move(exponents)) {}

  static NovikovElement one() { return monomial(0); }
  static NovikovElement monomial(std::int64_t j) { return NovikovElement({j}); }

  bool is_zero() const { return exps_.empty(); }
  const std::set<std::int64_t>& exponents() const { return exps_; }
  std::int64_t leading_exponent() const;
  Rational norm(const Rational& w0) const { return Rational(leading_exponent()) * w0; }

  NovikovElement operator+(const NovikovElement& o) const;
  NovikovElement operator*(const NovikovElement& o) const;
  bool operator==(const NovikovElement& o) const { return exps_ == o.exps_; }

  std::string to_string() const;

 private:
  std::set<std::int64_t> exps_;
};

using Chain = boost::dynamic_bitset<>;

/// Chain with Novikov coefficients, stored by exponent: sum_j q^{j A0} chains[j].
class NovikovChain {
 public:
  NovikovChain() = default;
  explicit NovikovChain(std::size_t n) : n_(n) {}
  static NovikovChain from_chain(const Chain& c, std::int64_t exponent = 0);

  std::size_t dimension() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<std::int64_t, Chain>& terms() const { return terms_; }

  /// Adds q^{exponent} * generator (mod 2).
  void toggle(std::int64_t exponent, std::size_t generator);
  void add(std::int64_t exponent, const Chain& c);
  NovikovChain operator+(const NovikovChain& o) const;
  NovikovChain shifted(std::int64_t by) const;
  NovikovChain times(const NovikovElement& lambda) const;
  bool operator==(const NovikovChain& o) const { return n_ == o.n_ && terms_ == o.terms_; }

 private:
  std::size_t n_ = 0;
  std::map<std::int64_t, Chain> terms_;
};

}  // namespace pfh::spectral
