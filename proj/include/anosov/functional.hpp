#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anosov/interval.hpp"
#include "anosov/rational.hpp"

namespace anosov {

/// A linear functional on R^k with enclosed coefficients. `exact[a]` is set
/// when coordinate a is known exactly (zero coordinates proven by an exact
/// test, or rational data such as restricted roots).
struct LyapunovFunctional {
  std::vector<Interval> coeffs;
  std::vector<std::optional<Rational>> exact;
  int multiplicity = 1;
  std::vector<int> classes;
  std::string label;

  std::size_t rank() const { return coeffs.size(); }
  bool fully_exact() const;
  bool is_zero() const;
  Interval operator()(const std::vector<Interval>& a) const;
  Interval operator()(const std::vector<long>& a) const;
  std::optional<Rational> exact_value(const std::vector<Rational>& a) const;
};

LyapunovFunctional exact_functional(const std::vector<Rational>& coeffs, int multiplicity = 1, std::string label = {});

/// Decides exact positive proportionality chi_i = ratio * chi_j for
/// functionals whose enclosures cannot settle it. nullopt means undecidable.
class RelationCertifier {
 public:
  virtual ~RelationCertifier() = default;
  virtual std::optional<bool> proportional(std::size_t i, std::size_t j, const Rational& ratio) const = 0;
};

}  // namespace anosov
