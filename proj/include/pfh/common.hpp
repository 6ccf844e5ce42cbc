// Shared scalar types, error taxonomy and decimal-string helpers.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <boost/rational.hpp>

namespace pfh {

using Rational = boost::rational<std::int64_t>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Mat2i = Eigen::Matrix<std::int64_t, 2, 2>;

/// Error classes map one-to-one onto CLI exit codes (see harness).
enum class ErrorKind {
  validation,          // malformed input, violated type invariant
  hypothesis,          // theorem hypothesis not met
  not_found,           // numerical search found nothing at resolution
  evaluation,          // non-finite values while evaluating a field
  integration,         // inner Newton of the integrator failed
  not_periodic,        // classify called on a non-periodic point
  undecidable,         // exactness required but float supplied
  infinite_family,     // fixed-point set is not isolated
  window,              // action outside the declared Novikov window
  unsupported,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

const char* error_kind_name(ErrorKind kind);

/// Parses "3", "-0.125", "1.5e-2" or "2/3" exactly. Throws validation errors.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

/// Greatest integer <= r, in integer arithmetic.
std::int64_t floor_div(const Rational& r);

/// Terminating decimal when the denominator is 2^a 5^b, otherwise "p/q".
std::string to_decimal_string(const Rational& r);

/// Shortest string that round-trips the double.
std::string to_decimal_string(double x);

}  // namespace pfh
