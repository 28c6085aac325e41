#pragma once

#include <map>
#include <vector>

#include "anosov/matrix.hpp"
#include "anosov/rational.hpp"
#include "anosov/resonance.hpp"

namespace anosov::normalform {

using resonance::SpectrumBands;

/// Exponent of each coordinate of R^m.
using Monomial = std::vector<int>;
using Component = std::map<Monomial, Rational>;

/// Truncated polynomial self-map of R^m preserving the origin, graded by the
/// band blocks. Coefficients of total degree above the truncation degree are
/// dropped on insertion.
class BlockedPolynomialMap {
 public:
  BlockedPolynomialMap() = default;
  BlockedPolynomialMap(SpectrumBands bands, int degree);

  static BlockedPolynomialMap identity(const SpectrumBands& bands, int degree);
  static BlockedPolynomialMap linear(const SpectrumBands& bands, int degree, const RatMatrix& m);

  const SpectrumBands& bands() const { return bands_; }
  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(components_.size()); }
  const std::vector<Component>& components() const { return components_; }
  const std::vector<int>& coordinate_blocks() const { return coord_block_; }

  void add(int coordinate, const Monomial& m, const Rational& c);
  Rational coefficient(int coordinate, const Monomial& m) const;

  RatMatrix linear_part() const;
  /// Homogeneous part of one total degree.
  BlockedPolynomialMap homogeneous(int d) const;
  /// Sum of homogeneous parts of degree < d.
  BlockedPolynomialMap below(int d) const;
  BlockedPolynomialMap with_degree(int degree) const;

  /// Per-block degree of a monomial.
  std::vector<int> multidegree(const Monomial& m) const;
  Rational max_abs_coefficient() const;
  bool is_zero() const;

  friend bool operator==(const BlockedPolynomialMap& a, const BlockedPolynomialMap& b) {
    return a.degree_ == b.degree_ && a.bands_ == b.bands_ && a.components_ == b.components_;
  }
  friend BlockedPolynomialMap operator+(const BlockedPolynomialMap& a, const BlockedPolynomialMap& b);
  friend BlockedPolynomialMap operator-(const BlockedPolynomialMap& a, const BlockedPolynomialMap& b);

 private:
  SpectrumBands bands_;
  int degree_ = 0;
  std::vector<int> coord_block_;
  std::vector<Component> components_;
};

int total_degree(const Monomial& m);

/// f o g truncated at the common degree. Throws BandMismatch.
BlockedPolynomialMap compose(const BlockedPolynomialMap& f, const BlockedPolynomialMap& g);

/// Two-sided inverse through the truncation degree. Throws SingularLinearPart.
BlockedPolynomialMap invert(const BlockedPolynomialMap& f);

/// All monomials of total degree d in m variables, descending lexicographic.
std::vector<Monomial> monomials_of_degree(int m, int d);

}  // namespace anosov::normalform
