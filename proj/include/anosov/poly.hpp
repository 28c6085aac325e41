#pragma once

#include <string>
#include <utility>
#include <vector>

#include "anosov/matrix.hpp"
#include "anosov/rational.hpp"

namespace anosov {

/// Dense univariate polynomial over Q, coefficients in ascending degree.
/// The zero polynomial has no coefficients and degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  static Poly from_integers(const std::vector<long>& coeffs);
  static Poly monomial(const Rational& c, int degree);
  static Poly x_minus(const Rational& root);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const Rational& leading() const { return coeffs_.back(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int i) const { return i >= 0 && i <= degree() ? coeffs_[i] : Rational(0); }

  Rational operator()(const Rational& x) const;

  Poly derivative() const;
  Poly monic() const;
  /// Integer coefficients with content 1 and positive leading coefficient.
  Poly primitive() const;
  /// x^deg p(1/x).
  Poly reciprocal() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Rational& s, const Poly& a);

  std::string to_string(const std::string& var = "x") const;
  std::vector<std::string> coeff_strings() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Quotient and remainder over Q.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
bool divides(const Poly& d, const Poly& a);

/// Monic gcd (zero if both are zero).
Poly gcd(const Poly& a, const Poly& b);

/// Inverse of a modulo m; throws SingularLinearPart when gcd(a, m) != 1.
Poly inverse_mod(const Poly& a, const Poly& m);

Poly power_mod(const Poly& a, long e, const Poly& m);

Poly squarefree_part(const Poly& p);

/// Yun's algorithm: p = c * prod f_i^i with squarefree, pairwise coprime f_i (monic).
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p);

/// Characteristic polynomial det(xI - M) (Faddeev-LeVerrier; divisions are exact over Z).
Poly charpoly(const IntMatrix& m);
Poly charpoly(const RatMatrix& m);

/// Minimal polynomial (monic) via Krylov sequences of basis vectors.
Poly minimal_polynomial(const RatMatrix& m);

/// p(M) for a square matrix.
RatMatrix evaluate(const Poly& p, const RatMatrix& m);

/// Matrix of multiplication by g in Q[x]/(q), basis 1, x, ..., x^{d-1}.
RatMatrix multiplication_matrix(const Poly& g, const Poly& q);

long euler_phi(long n);
Poly cyclotomic(long n);
/// All n with phi(n) <= degree, ascending.
std::vector<long> cyclotomic_orders_up_to(int degree);
/// Orders n such that Phi_n divides p.
std::vector<long> cyclotomic_factor_orders(const Poly& p);
bool has_cyclotomic_factor(const Poly& p);

/// Number of distinct real roots of p in the half-open interval (a, b].
int sturm_count(const Poly& p, const Rational& a, const Rational& b);

/// Exact test for a root on the unit circle.
bool has_unit_circle_root(const Poly& p);

}  // namespace anosov
