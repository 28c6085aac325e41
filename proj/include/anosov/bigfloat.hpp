#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <utility>
#include <vector>

#include "anosov/interval.hpp"
#include "anosov/poly.hpp"

namespace anosov {

using BigFloat = boost::multiprecision::cpp_bin_float_50;
using BigComplex = boost::multiprecision::cpp_complex_50;

BigFloat to_big(const Rational& q);
Rational to_rational(const BigFloat& v);

/// Double interval containing [center - radius, center + radius].
Interval enclose(const BigFloat& center, const BigFloat& radius);

/// A root of a squarefree polynomial together with a disk that provably
/// contains it and no other root.
struct RootEnclosure {
  BigComplex center;
  BigFloat radius;
  bool real = false;
};

/// Complex roots of a squarefree polynomial by Aberth iteration, with
/// Weierstrass inclusion disks. Deterministic order: real roots ascending,
/// then complex roots by real part, then imaginary part (upper before lower).
/// Throws EnclosureTooWide when the disks fail to separate.
std::vector<RootEnclosure> isolate_roots(const Poly& p);

BigComplex evaluate(const Poly& p, const BigComplex& z);

/// Upper bound on |p(z) - p(c)| over the disk |z - c| <= r.
BigFloat variation_bound(const Poly& p, const BigComplex& c, const BigFloat& r);

/// Factorization over Q into monic irreducible factors with multiplicities,
/// ordered by degree, then by coefficients.
std::vector<std::pair<Poly, int>> factor(const Poly& p);

/// Irreducible factorization of a squarefree polynomial.
std::vector<Poly> factor_squarefree(const Poly& p);

}  // namespace anosov
