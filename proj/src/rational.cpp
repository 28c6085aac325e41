#include "anosov/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "anosov/error.hpp"

namespace anosov {

namespace {

Integer pow10(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::ParseError, "not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) bad(text);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational r;
    try {
      r = Rational(Integer(std::string(text.substr(0, slash)), 10), Integer(std::string(text.substr(slash + 1)), 10));
    } catch (const std::invalid_argument&) {
      bad(text);
    }
    if (r.get_den() == 0) bad(text);
    r.canonicalize();
    return r;
  }

  std::string_view s = text;
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string exp_text(s.substr(e + 1));
    if (exp_text.empty()) bad(text);
    try {
      size_t used = 0;
      exponent = std::stol(exp_text, &used);
      if (used != exp_text.size()) bad(text);
    } catch (const std::logic_error&) {
      bad(text);
    }
    s = s.substr(0, e);
  }
  std::string digits;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_point) bad(text);
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else {
      bad(text);
    }
  }
  if (!seen_digit) bad(text);
  Rational r{Integer(digits, 10)};
  if (exponent > 0) r *= pow10(static_cast<unsigned long>(exponent));
  if (exponent < 0) r /= pow10(static_cast<unsigned long>(-exponent));
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string to_string(const Integer& value) { return value.get_str(); }

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_str();
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::ParseError, "non-finite value");
  Rational r;
  mpq_set_d(r.get_mpq_t(), value);
  return r;
}

double to_double(const Rational& value) { return value.get_d(); }

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

bool rationalize(double value, double tol, long max_den, Rational& out) {
  // Convergents of the continued fraction of value.
  double x = value;
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int step = 0; step < 64; ++step) {
    double a = std::floor(x);
    if (std::abs(a) > 1e15) break;
    long long ai = static_cast<long long>(a);
    long long h2 = ai * h1 + h0;
    long long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - value) <= tol) {
      out = Rational(Integer(static_cast<long>(h1)), Integer(static_cast<long>(k1)));
      out.canonicalize();
      return true;
    }
    double frac = x - a;
    if (frac < 1e-300) break;
    x = 1.0 / frac;
  }
  return false;
}

Integer lcm_of_denominators(const std::vector<Rational>& values) {
  Integer l = 1;
  for (const auto& v : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  return l;
}

}  // namespace anosov
