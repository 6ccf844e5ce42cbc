#include "pfh/common.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace pfh {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::hypothesis: return "hypothesis-violation";
    case ErrorKind::not_found: return "not-found";
    case ErrorKind::evaluation: return "evaluation";
    case ErrorKind::integration: return "integration";
    case ErrorKind::not_periodic: return "not-a-periodic-point";
    case ErrorKind::undecidable: return "undecidable";
    case ErrorKind::infinite_family: return "infinite-family";
    case ErrorKind::window: return "window";
    case ErrorKind::unsupported: return "unsupported";
  }
  return "unknown";
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    fail(ErrorKind::validation, "not an exact number: '" + std::string(whole) + "'");
  return v;
}

std::int64_t pow10(int e) {
  std::int64_t p = 1;
  for (int i = 0; i < e; ++i) {
    if (p > std::numeric_limits<std::int64_t>::max() / 10)
      fail(ErrorKind::validation, "decimal exponent too large for exact arithmetic");
    p *= 10;
  }
  return p;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const std::string_view whole = text;
  if (text.empty()) fail(ErrorKind::validation, "empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t num = parse_int(text.substr(0, slash), whole);
    std::int64_t den = parse_int(text.substr(slash + 1), whole);
    if (den == 0) fail(ErrorKind::validation, "zero denominator in '" + std::string(whole) + "'");
    return Rational(num, den);
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  int exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    exponent = static_cast<int>(parse_int(exp_text, whole));
    text = text.substr(0, e);
  }
  std::string digits;
  int frac_digits = 0;
  bool seen_dot = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) fail(ErrorKind::validation, "malformed number '" + std::string(whole) + "'");
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    } else {
      fail(ErrorKind::validation, "malformed number '" + std::string(whole) + "'");
    }
  }
  if (digits.empty()) fail(ErrorKind::validation, "malformed number '" + std::string(whole) + "'");
  std::int64_t mant = parse_int(digits, whole);
  const int shift = exponent - frac_digits;
  Rational r = shift >= 0 ? Rational(mant) * pow10(shift) : Rational(mant, pow10(-shift));
  return negative ? -r : r;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::int64_t floor_div(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

std::string to_decimal_string(const Rational& r) {
  std::int64_t den = r.denominator();
  int twos = 0, fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den != 1) return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());

  const int digits = std::max(twos, fives);
  if (digits == 0) return std::to_string(r.numerator());
  // scale numerator so the denominator becomes 10^digits
  std::int64_t scale = r.denominator();
  std::int64_t target = pow10(digits);
  __int128 scaled = static_cast<__int128>(r.numerator()) * (target / scale);
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string body;
  while (scaled > 0) {
    body.insert(body.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  }
  while (static_cast<int>(body.size()) <= digits) body.insert(body.begin(), '0');
  body.insert(body.end() - digits, '.');
  while (body.back() == '0') body.pop_back();
  if (body.back() == '.') body.pop_back();
  return negative ? "-" + body : body;
}

std::string to_decimal_string(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

}  // namespace pfh
