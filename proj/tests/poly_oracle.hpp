#pragma once

#include <iterator>
#include <map>
#include <vector>

#include "anosov/polymap.hpp"

namespace testing_util {

using anosov::Rational;
using anosov::normalform::BlockedPolynomialMap;
using anosov::normalform::Monomial;

// Untruncated multivariate polynomials for an independent composition.
using Series = std::map<Monomial, Rational>;

inline Series mul(const Series& a, const Series& b) {
  Series r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m = ma;
      for (std::size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
      r[m] += ca * cb;
    }
  return r;
}

inline std::vector<Series> naive_compose(const BlockedPolynomialMap& f, const BlockedPolynomialMap& g, int keep) {
  const auto n = static_cast<std::size_t>(g.dim());
  std::vector<Series> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [mono, c] : f.components()[i]) {
      Series term{{Monomial(n, 0), c}};
      for (std::size_t j = 0; j < n; ++j)
        for (int e = 0; e < mono[j]; ++e) term = mul(term, Series(g.components()[j].begin(), g.components()[j].end()));
      for (const auto& [m, v] : term)
        if (anosov::normalform::total_degree(m) <= keep) out[i][m] += v;
    }
  for (auto& s : out)
    for (auto it = s.begin(); it != s.end();) it = it->second == 0 ? s.erase(it) : std::next(it);
  return out;
}

inline bool conjugates(const BlockedPolynomialMap& h_next, const BlockedPolynomialMap& f, const BlockedPolynomialMap& n,
                       const BlockedPolynomialMap& h, int d) {
  return naive_compose(h_next, f, d) == naive_compose(n, h, d);
}

}  // namespace testing_util
