#include "pfh/novikov.hpp"

namespace pfh::spectral {

std::int64_t NovikovElement::leading_exponent() const {
  require(!exps_.empty(), ErrorKind::validation, "the zero Novikov element has no norm");
  return *exps_.rbegin();
}

NovikovElement NovikovElement::operator+(const NovikovElement& o) const {
  std::set<std::int64_t> out = exps_;
  for (auto e : o.exps_) {
    if (!out.erase(e)) out.insert(e);
  }
  return NovikovElement(std::move(out));
}

NovikovElement NovikovElement::operator*(const NovikovElement& o) const {
  std::set<std::int64_t> out;
  for (auto a : exps_) {
    for (auto b : o.exps_) {
      if (!out.erase(a + b)) out.insert(a + b);
    }
  }
  return NovikovElement(std::move(out));
}

std::string NovikovElement::to_string() const {
  if (exps_.empty()) return "0";
  std::string s;
  for (auto it = exps_.rbegin(); it != exps_.rend(); ++it) {
    if (!s.empty()) s += " + ";
    s += *it == 0 ? "1" : "q^" + std::to_string(*it);
  }
  return s;
}

NovikovChain NovikovChain::from_chain(const Chain& c, std::int64_t exponent) {
  NovikovChain out(c.size());
  out.add(exponent, c);
  return out;
}

void NovikovChain::toggle(std::int64_t exponent, std::size_t generator) {
  require(generator < n_, ErrorKind::validation, "generator index out of range");
  auto [it, inserted] = terms_.try_emplace(exponent, Chain(n_));
  it->second.flip(generator);
  if (it->second.none()) terms_.erase(it);
}

void NovikovChain::add(std::int64_t exponent, const Chain& c) {
  require(c.size() == n_, ErrorKind::validation, "chain dimension mismatch");
  if (c.none()) return;
  auto [it, inserted] = terms_.try_emplace(exponent, Chain(n_));
  it->second ^= c;
  if (it->second.none()) terms_.erase(it);
}

NovikovChain NovikovChain::operator+(const NovikovChain& o) const {
  require(n_ == o.n_, ErrorKind::validation, "chain dimension mismatch");
  NovikovChain out = *this;
  for (const auto& [e, c] : o.terms_) out.add(e, c);
  return out;
}

NovikovChain NovikovChain::shifted(std::int64_t by) const {
  NovikovChain out(n_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e + by, c);
  return out;
}

NovikovChain NovikovChain::times(const NovikovElement& lambda) const {
  NovikovChain out(n_);
  for (auto j : lambda.exponents()) out = out + shifted(j);
  return out;
}

}  // namespace pfh::spectral
