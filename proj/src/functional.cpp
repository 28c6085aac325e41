#include "anosov/functional.hpp"

namespace anosov {

bool LyapunovFunctional::fully_exact() const {
  for (const auto& e : exact)
    if (!e) return false;
  return !exact.empty() || coeffs.empty();
}

bool LyapunovFunctional::is_zero() const {
  for (const auto& e : exact)
    if (!e || *e != 0) return false;
  return true;
}

Interval LyapunovFunctional::operator()(const std::vector<Interval>& a) const {
  Interval s(0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (exact[i] && *exact[i] == 0) continue;
    s += coeffs[i] * a[i];
  }
  return s;
}

Interval LyapunovFunctional::operator()(const std::vector<long>& a) const {
  std::vector<Interval> v;
  for (long x : a) v.emplace_back(static_cast<double>(x));
  return (*this)(v);
}

std::optional<Rational> LyapunovFunctional::exact_value(const std::vector<Rational>& a) const {
  Rational s = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    if (!exact[i]) return std::nullopt;
    s += *exact[i] * a[i];
  }
  return s;
}

LyapunovFunctional exact_functional(const std::vector<Rational>& coeffs, int multiplicity, std::string label) {
  LyapunovFunctional f;
  for (const auto& c : coeffs) {
    double d = to_double(c);
    Rational back = rational_from_double(d);
    f.coeffs.push_back(back == c ? Interval(d) : Interval(Interval::down(d), Interval::up(d)));
    f.exact.emplace_back(c);
  }
  f.multiplicity = multiplicity;
  f.label = std::move(label);
  return f;
}

}  // namespace anosov
