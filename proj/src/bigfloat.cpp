#include "anosov/bigfloat.hpp"

#include <algorithm>
#include <functional>
#include <ios>

namespace anosov {

namespace mp = boost::multiprecision;

BigFloat to_big(const Rational& q) {
  return BigFloat(q.get_num().get_str()) / BigFloat(q.get_den().get_str());
}

Rational to_rational(const BigFloat& v) {
  return parse_rational(v.str(55, std::ios::scientific));
}

Interval enclose(const BigFloat& center, const BigFloat& radius) {
  double lo = static_cast<double>(BigFloat(center - radius));
  double hi = static_cast<double>(BigFloat(center + radius));
  return {Interval::down(lo), Interval::up(hi)};
}

namespace {

std::vector<BigFloat> big_coeffs(const Poly& p) {
  std::vector<BigFloat> c;
  for (const auto& v : p.coeffs()) c.push_back(to_big(v));
  return c;
}

BigComplex horner(const std::vector<BigFloat>& c, const BigComplex& z) {
  BigComplex r(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + BigComplex(*it);
  return r;
}

bool less_root(const RootEnclosure& a, const RootEnclosure& b) {
  if (a.real != b.real) return a.real;
  if (mp::real(a.center) != mp::real(b.center)) return mp::real(a.center) < mp::real(b.center);
  return mp::imag(a.center) > mp::imag(b.center);
}

}  // namespace

BigComplex evaluate(const Poly& p, const BigComplex& z) { return horner(big_coeffs(p), z); }

BigFloat variation_bound(const Poly& p, const BigComplex& c, const BigFloat& r) {
  // Taylor coefficients at c by repeated synthetic division.
  std::vector<BigComplex> a;
  for (const auto& v : p.coeffs()) a.emplace_back(to_big(v));
  const int n = static_cast<int>(a.size()) - 1;
  BigFloat bound = 0;
  BigFloat rk = 1;
  for (int k = 0; k <= n; ++k) {
    for (int i = n - 1; i >= k; --i) a[static_cast<std::size_t>(i)] += c * a[static_cast<std::size_t>(i) + 1];
    if (k > 0) bound += mp::abs(a[static_cast<std::size_t>(k)]) * rk;
    rk *= r;
  }
  return bound;
}

std::vector<RootEnclosure> isolate_roots(const Poly& input) {
  std::vector<RootEnclosure> out;
  if (input.degree() <= 0) return out;
  Poly p = input.monic();
  const int n = p.degree();
  if (n == 1) {
    out.push_back({BigComplex(to_big(-p.coeff(0))), BigFloat(0), true});
    return out;
  }
  auto c = big_coeffs(p);
  std::vector<BigFloat> dc;
  for (int i = 1; i <= n; ++i) dc.push_back(c[static_cast<std::size_t>(i)] * i);

  BigFloat scale = 0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, BigFloat(mp::pow(mp::abs(c[static_cast<std::size_t>(i)]), BigFloat(1) / (n - i))));
  if (scale == 0) scale = 1;
  std::vector<BigComplex> z(static_cast<std::size_t>(n));
  const BigFloat two_pi = 2 * boost::math::constants::pi<BigFloat>();
  for (int k = 0; k < n; ++k) {
    BigFloat angle = two_pi * k / n + BigFloat("0.4");
    z[static_cast<std::size_t>(k)] = BigComplex(scale * mp::cos(angle), scale * mp::sin(angle));
  }

  const BigFloat eps("1e-48");
  bool converged = false;
  for (int iter = 0; iter < 2000 && !converged; ++iter) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      auto& zi = z[static_cast<std::size_t>(i)];
      BigComplex pv = horner(c, zi);
      BigComplex dv = horner(dc, zi);
      if (pv == BigComplex(0)) continue;
      BigComplex newton = pv / dv;
      BigComplex sum(0);
      for (int j = 0; j < n; ++j)
        if (j != i) sum += BigComplex(1) / (zi - z[static_cast<std::size_t>(j)]);
      BigComplex w = newton / (BigComplex(1) - newton * sum);
      zi -= w;
      if (mp::abs(w) > eps * std::max(BigFloat(1), BigFloat(mp::abs(zi)))) converged = false;
    }
  }
  if (!converged) throw Error(ErrorCode::EnclosureTooWide, "root iteration did not converge for " + p.to_string());

  const BigFloat pad("1e-44");
  for (int i = 0; i < n; ++i) {
    const auto& zi = z[static_cast<std::size_t>(i)];
    BigComplex denom(1);
    for (int j = 0; j < n; ++j)
      if (j != i) denom *= zi - z[static_cast<std::size_t>(j)];
    BigFloat radius = n * BigFloat(mp::abs(horner(c, zi) / denom)) + pad * std::max(BigFloat(1), BigFloat(mp::abs(zi)));
    RootEnclosure r{zi, radius, false};
    if (mp::abs(mp::imag(zi)) < radius) {
      r.real = true;
      r.center = BigComplex(mp::real(zi));
    }
    out.push_back(r);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (mp::abs(out[static_cast<std::size_t>(i)].center - out[static_cast<std::size_t>(j)].center) <=
          out[static_cast<std::size_t>(i)].radius + out[static_cast<std::size_t>(j)].radius)
        throw Error(ErrorCode::EnclosureTooWide, "root disks overlap for " + p.to_string());

  // Make complex conjugate pairs exact mirror images of each other.
  std::vector<bool> done(out.size(), false);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].real || done[i] || mp::imag(out[i].center) < 0) continue;
    std::size_t best = i;
    BigFloat best_d = -1;
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (j == i || out[j].real || done[j] || mp::imag(out[j].center) > 0) continue;
      BigFloat d = mp::abs(out[j].center - mp::conj(out[i].center));
      if (best_d < 0 || d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == i) throw Error(ErrorCode::EnclosureTooWide, "unpaired complex root");
    out[best].center = mp::conj(out[i].center);
    out[best].radius = out[i].radius = std::max(out[i].radius, out[best].radius) + best_d;
    done[i] = done[best] = true;
  }
  std::sort(out.begin(), out.end(), less_root);
  return out;
}

namespace {

bool near_integer(const BigFloat& v, Integer& rounded) {
  BigFloat r = mp::round(v);
  if (mp::abs(v - r) > BigFloat("1e-20") * std::max(BigFloat(1), BigFloat(mp::abs(v)))) return false;
  std::string text = r.str(0, std::ios::fixed);
  if (auto dot = text.find('.'); dot != std::string::npos) text.resize(dot);
  rounded = Integer(text, 10);
  return true;
}

bool poly_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i)
    if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
  return false;
}

}  // namespace

std::vector<Poly> factor_squarefree(const Poly& input) {
  std::vector<Poly> result;
  if (input.degree() <= 0) return result;
  if (input.degree() == 1) return {input.monic()};
  Poly f = input.primitive();
  auto roots = isolate_roots(f);

  // Root groups: a real root alone or a conjugate pair; any rational factor
  // is a union of groups.
  std::vector<std::vector<BigComplex>> groups;
  for (const auto& r : roots) {
    if (r.real) {
      groups.push_back({r.center});
    } else if (mp::imag(r.center) > 0) {
      groups.push_back({r.center, mp::conj(r.center)});
    }
  }
  std::vector<bool> used(groups.size(), false);

  auto try_subset = [&](const std::vector<std::size_t>& subset) -> bool {
    BigFloat lc = to_big(f.leading());
    BigComplex trace(0);
    for (auto g : subset)
      for (const auto& z : groups[g]) trace += z;
    Integer dummy;
    if (!near_integer(BigFloat(lc * mp::real(trace)), dummy)) return false;
    std::vector<BigComplex> prod{BigComplex(1)};
    for (auto g : subset)
      for (const auto& z : groups[g]) {
        std::vector<BigComplex> next(prod.size() + 1, BigComplex(0));
        for (std::size_t i = 0; i < prod.size(); ++i) {
          next[i + 1] += prod[i];
          next[i] -= prod[i] * z;
        }
        prod = std::move(next);
      }
    std::vector<Rational> coeffs;
    for (const auto& v : prod) {
      Integer r;
      if (!near_integer(BigFloat(lc * mp::real(v)), r)) return false;
      coeffs.emplace_back(r);
    }
    Poly g = Poly(std::move(coeffs)).primitive();
    auto [q, rem] = divmod(f, g);
    if (!rem.is_zero()) return false;
    result.push_back(g.monic());
    f = q.primitive();
    for (auto s : subset) used[s] = true;
    return true;
  };

  std::function<bool(std::size_t, int, std::vector<std::size_t>&)> search =
      [&](std::size_t start, int remaining, std::vector<std::size_t>& subset) -> bool {
    if (remaining == 0) return try_subset(subset);
    for (std::size_t g = start; g < groups.size(); ++g) {
      if (used[g]) continue;
      int d = static_cast<int>(groups[g].size());
      if (d > remaining) continue;
      subset.push_back(g);
      bool found = search(g + 1, remaining - d, subset);
      subset.pop_back();
      if (found) return true;
    }
    return false;
  };

  for (int r = 1; 2 * r <= f.degree(); ++r) {
    std::vector<std::size_t> subset;
    while (2 * r <= f.degree() && search(0, r, subset)) subset.clear();
  }
  if (f.degree() > 0) result.push_back(f.monic());
  std::sort(result.begin(), result.end(), poly_less);
  return result;
}

std::vector<std::pair<Poly, int>> factor(const Poly& p) {
  std::vector<std::pair<Poly, int>> out;
  for (const auto& [part, mult] : squarefree_decomposition(p))
    for (auto& f : factor_squarefree(part)) out.emplace_back(std::move(f), mult);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (poly_less(a.first, b.first)) return true;
    if (poly_less(b.first, a.first)) return false;
    return a.second < b.second;
  });
  return out;
}

}  // namespace anosov
