#include "anosov/polymap.hpp"

#include <functional>

#include "anosov/error.hpp"

namespace anosov::normalform {

int total_degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

BlockedPolynomialMap::BlockedPolynomialMap(SpectrumBands bands, int degree)
    : bands_(std::move(bands)), degree_(degree), coord_block_(bands_.coordinate_blocks()),
      components_(coord_block_.size()) {
  if (degree < 1) throw Error(ErrorCode::PreconditionFailed, "truncation degree must be at least 1");
}

BlockedPolynomialMap BlockedPolynomialMap::identity(const SpectrumBands& bands, int degree) {
  const auto n = static_cast<std::size_t>(bands.total_dim());
  return linear(bands, degree, RatMatrix::identity(n));
}

BlockedPolynomialMap BlockedPolynomialMap::linear(const SpectrumBands& bands, int degree, const RatMatrix& m) {
  BlockedPolynomialMap f(bands, degree);
  const auto n = static_cast<std::size_t>(f.dim());
  if (m.rows() != n || m.cols() != n) throw Error(ErrorCode::ShapeMismatch, "linear part has the wrong size");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Monomial e(n, 0);
      e[j] = 1;
      f.add(static_cast<int>(i), e, m(i, j));
    }
  return f;
}

void BlockedPolynomialMap::add(int coordinate, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  if (m.size() != components_.size()) throw Error(ErrorCode::ShapeMismatch, "monomial has the wrong number of variables");
  int d = total_degree(m);
  if (d == 0) throw Error(ErrorCode::PreconditionFailed, "maps must preserve the origin");
  if (d > degree_) return;
  auto& comp = components_.at(static_cast<std::size_t>(coordinate));
  auto [it, inserted] = comp.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) comp.erase(it);
  }
}

Rational BlockedPolynomialMap::coefficient(int coordinate, const Monomial& m) const {
  const auto& comp = components_.at(static_cast<std::size_t>(coordinate));
  auto it = comp.find(m);
  return it == comp.end() ? Rational(0) : it->second;
}

RatMatrix BlockedPolynomialMap::linear_part() const {
  const auto n = components_.size();
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [mono, c] : components_[i])
      if (total_degree(mono) == 1)
        for (std::size_t j = 0; j < n; ++j)
          if (mono[j] == 1) m(i, j) = c;
  return m;
}

BlockedPolynomialMap BlockedPolynomialMap::homogeneous(int d) const {
  BlockedPolynomialMap r(bands_, degree_);
  for (std::size_t i = 0; i < components_.size(); ++i)
    for (const auto& [mono, c] : components_[i])
      if (total_degree(mono) == d) r.components_[i].emplace(mono, c);
  return r;
}

BlockedPolynomialMap BlockedPolynomialMap::below(int d) const {
  BlockedPolynomialMap r(bands_, degree_);
  for (std::size_t i = 0; i < components_.size(); ++i)
    for (const auto& [mono, c] : components_[i])
      if (total_degree(mono) < d) r.components_[i].emplace(mono, c);
  return r;
}

BlockedPolynomialMap BlockedPolynomialMap::with_degree(int degree) const {
  BlockedPolynomialMap r(bands_, degree);
  for (std::size_t i = 0; i < components_.size(); ++i)
    for (const auto& [mono, c] : components_[i]) r.add(static_cast<int>(i), mono, c);
  return r;
}

std::vector<int> BlockedPolynomialMap::multidegree(const Monomial& m) const {
  std::vector<int> s(bands_.count(), 0);
  for (std::size_t j = 0; j < m.size(); ++j) s[static_cast<std::size_t>(coord_block_[j])] += m[j];
  return s;
}

Rational BlockedPolynomialMap::max_abs_coefficient() const {
  Rational best = 0;
  for (const auto& comp : components_)
    for (const auto& [mono, c] : comp) best = std::max(best, anosov::abs(c));
  return best;
}

bool BlockedPolynomialMap::is_zero() const {
  for (const auto& comp : components_)
    if (!comp.empty()) return false;
  return true;
}

namespace {

void check_same(const BlockedPolynomialMap& a, const BlockedPolynomialMap& b) {
  if (!(a.bands() == b.bands()) || a.degree() != b.degree())
    throw Error(ErrorCode::BandMismatch, "maps have different bands or truncation degrees");
}

Component multiply(const Component& a, const Component& b, int degree) {
  Component r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m = ma;
      for (std::size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
      if (total_degree(m) > degree) continue;
      auto [it, inserted] = r.emplace(m, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

}  // namespace

BlockedPolynomialMap operator+(const BlockedPolynomialMap& a, const BlockedPolynomialMap& b) {
  check_same(a, b);
  BlockedPolynomialMap r = a;
  for (std::size_t i = 0; i < b.components_.size(); ++i)
    for (const auto& [mono, c] : b.components_[i]) r.add(static_cast<int>(i), mono, c);
  return r;
}

BlockedPolynomialMap operator-(const BlockedPolynomialMap& a, const BlockedPolynomialMap& b) {
  check_same(a, b);
  BlockedPolynomialMap r = a;
  for (std::size_t i = 0; i < b.components_.size(); ++i)
    for (const auto& [mono, c] : b.components_[i]) r.add(static_cast<int>(i), mono, -c);
  return r;
}

BlockedPolynomialMap compose(const BlockedPolynomialMap& f, const BlockedPolynomialMap& g) {
  check_same(f, g);
  const auto n = static_cast<std::size_t>(f.dim());
  const int degree = f.degree();
  // powers[j][e] = g_j^e truncated.
  std::vector<std::vector<Component>> powers(n);
  Component one;
  one.emplace(Monomial(n, 0), Rational(1));
  for (std::size_t j = 0; j < n; ++j) {
    powers[j].push_back(one);
    for (int e = 1; e <= degree; ++e) powers[j].push_back(multiply(powers[j].back(), g.components()[j], degree));
  }
  BlockedPolynomialMap r(f.bands(), degree);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [mono, c] : f.components()[i]) {
      Component term = one;
      for (std::size_t j = 0; j < n && !term.empty(); ++j)
        if (mono[j] > 0) term = multiply(term, powers[j][static_cast<std::size_t>(mono[j])], degree);
      for (const auto& [m, v] : term) r.add(static_cast<int>(i), m, c * v);
    }
  return r;
}

BlockedPolynomialMap invert(const BlockedPolynomialMap& f) {
  auto linv = inverse(f.linear_part());
  if (!linv) throw Error(ErrorCode::SingularLinearPart, "linear part is not invertible");
  // g = L^{-1} (id - f_{>=2} o g); each pass fixes one more degree.
  BlockedPolynomialMap lin_inv = BlockedPolynomialMap::linear(f.bands(), f.degree(), *linv);
  BlockedPolynomialMap nonlinear = f - BlockedPolynomialMap::linear(f.bands(), f.degree(), f.linear_part());
  BlockedPolynomialMap id = BlockedPolynomialMap::identity(f.bands(), f.degree());
  BlockedPolynomialMap g = lin_inv;
  for (int pass = 1; pass < f.degree(); ++pass) g = compose(lin_inv, id - compose(nonlinear, g));
  return g;
}

std::vector<Monomial> monomials_of_degree(int m, int d) {
  std::vector<Monomial> out;
  Monomial cur(static_cast<std::size_t>(m), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == m - 1) {
      cur[static_cast<std::size_t>(pos)] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, left - v);
    }
  };
  if (m > 0) rec(0, d);
  return out;
}

}  // namespace anosov::normalform
