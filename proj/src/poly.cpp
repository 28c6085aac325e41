#include "anosov/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <type_traits>

namespace anosov {

Poly::Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::from_integers(const std::vector<long>& coeffs) {
  std::vector<Rational> c;
  c.reserve(coeffs.size());
  for (long v : coeffs) c.emplace_back(v);
  return Poly(std::move(c));
}

Poly Poly::monomial(const Rational& c, int degree) {
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
  v.back() = c;
  return Poly(std::move(v));
}

Poly Poly::x_minus(const Rational& root) { return Poly({Rational(-root), Rational(1)}); }

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Poly::operator()(const Rational& x) const {
  Rational r = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
  return r;
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return Poly();
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long>(i);
  return Poly(std::move(d));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Poly r = *this;
  Rational lc = leading();
  for (auto& c : r.coeffs_) c /= lc;
  return r;
}

Poly Poly::primitive() const {
  if (is_zero()) return *this;
  Integer den = lcm_of_denominators(coeffs_);
  std::vector<Rational> c;
  Integer content = 0;
  for (const auto& v : coeffs_) {
    Rational s = v * Rational(den);
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), s.get_num_mpz_t());
    c.push_back(s);
  }
  if (coeffs_.back() < 0) content = -content;
  for (auto& v : c) v /= Rational(content);
  return Poly(std::move(c));
}

Poly Poly::reciprocal() const {
  std::vector<Rational> c(coeffs_.rbegin(), coeffs_.rend());
  return Poly(std::move(c));
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
  return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Poly(std::move(c));
}

Poly operator*(const Rational& s, const Poly& a) {
  std::vector<Rational> c = a.coeffs_;
  for (auto& v : c) v *= s;
  return Poly(std::move(c));
}

std::string Poly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    Rational mag = anosov::abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool unit = mag == 1;
    if (!unit || i == 0) out << anosov::to_string(mag);
    if (i > 0) {
      if (!unit) out << "*";
      out << var;
      if (i > 1) out << "^" << i;
    }
  }
  return out.str();
}

std::vector<std::string> Poly::coeff_strings() const {
  std::vector<std::string> r;
  for (const auto& c : coeffs_) r.push_back(anosov::to_string(c));
  return r;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error(ErrorCode::SingularLinearPart, "polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(), a};
  std::vector<Rational> rem = a.coeffs();
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - b.degree() + 1), Rational(0));
  const Rational& lc = b.leading();
  const int db = b.degree();
  for (int i = a.degree(); i >= db; --i) {
    Rational f = rem[static_cast<std::size_t>(i)] / lc;
    quot[static_cast<std::size_t>(i - db)] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i - db + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

bool divides(const Poly& d, const Poly& a) { return (a % d).is_zero(); }

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

Poly inverse_mod(const Poly& a, const Poly& m) {
  // Extended Euclid: track s with s*a = r (mod m).
  Poly r0 = m, r1 = a % m;
  Poly s0, s1 = Poly({Rational(1)});
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    Poly s = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.degree() != 0) throw Error(ErrorCode::SingularLinearPart, "polynomial not invertible modulo m");
  return (Rational(1) / r0.leading()) * s0 % m;
}

Poly power_mod(const Poly& a, long e, const Poly& m) {
  Poly base = e < 0 ? inverse_mod(a, m) : a % m;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Poly result = Poly({Rational(1)}) % m;
  while (k) {
    if (k & 1) result = result * base % m;
    k >>= 1;
    if (k) base = base * base % m;
  }
  return result;
}

Poly squarefree_part(const Poly& p) {
  if (p.degree() <= 0) return p.monic();
  Poly g = gcd(p, p.derivative());
  return divmod(p, g).first.monic();
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p) {
  std::vector<std::pair<Poly, int>> out;
  if (p.degree() <= 0) return out;
  Poly f = p.monic();
  Poly a = gcd(f, f.derivative());
  Poly b = divmod(f, a).first;
  Poly c = divmod(f.derivative(), a).first;
  Poly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    Poly g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

namespace {

template <class T>
Poly faddeev_leverrier(const Matrix<T>& a) {
  if (!a.square()) throw Error(ErrorCode::ShapeMismatch, "charpoly of a non-square matrix");
  const std::size_t n = a.rows();
  std::vector<T> c(n + 1, T(0));
  c[n] = 1;
  Matrix<T> m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    Matrix<T> am = a * m;
    T tr = am.trace();
    if constexpr (std::is_same_v<T, Integer>) {
      Integer q;
      mpz_divexact_ui(q.get_mpz_t(), tr.get_mpz_t(), static_cast<unsigned long>(k));
      c[n - k] = -q;
    } else {
      c[n - k] = -tr / T(static_cast<long>(k));
    }
  }
  std::vector<Rational> r;
  r.reserve(n + 1);
  for (auto& v : c) r.emplace_back(v);
  return Poly(std::move(r));
}

}  // namespace

Poly charpoly(const IntMatrix& m) { return faddeev_leverrier(m); }
Poly charpoly(const RatMatrix& m) { return faddeev_leverrier(m); }

RatMatrix evaluate(const Poly& p, const RatMatrix& m) {
  const std::size_t n = m.rows();
  RatMatrix r(n, n);
  for (int i = p.degree(); i >= 0; --i) {
    r = r * m;
    for (std::size_t j = 0; j < n; ++j) r(j, j) += p.coeffs()[static_cast<std::size_t>(i)];
  }
  return r;
}

Poly minimal_polynomial(const RatMatrix& m) {
  const std::size_t n = m.rows();
  Poly result({Rational(1)});
  for (std::size_t basis = 0; basis < n; ++basis) {
    // Skip vectors already annihilated by the running lcm.
    std::vector<Rational> e(n, Rational(0));
    e[basis] = 1;
    if (result.degree() > 0) {
      RatMatrix pm = evaluate(result, m);
      bool killed = true;
      for (std::size_t i = 0; i < n && killed; ++i) killed = pm(i, basis) == 0;
      if (killed) continue;
    }
    std::vector<std::vector<Rational>> krylov{e};
    for (std::size_t j = 1; j <= n; ++j) {
      krylov.push_back(m.apply(krylov.back()));
      RatMatrix k(n, krylov.size());
      for (std::size_t c = 0; c < krylov.size(); ++c)
        for (std::size_t r = 0; r < n; ++r) k(r, c) = krylov[c][r];
      auto null = nullspace(k);
      if (null.empty()) continue;
      Poly annihilator(null.front());
      annihilator = annihilator.monic();
      Poly g = gcd(result, annihilator);
      result = divmod(result * annihilator, g).first.monic();
      break;
    }
  }
  return result;
}

RatMatrix multiplication_matrix(const Poly& g, const Poly& q) {
  const int d = q.degree();
  RatMatrix r(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  Poly basis({Rational(1)});
  Poly x = Poly::monomial(1, 1);
  for (int j = 0; j < d; ++j) {
    Poly col = g * basis % q;
    for (int i = 0; i < d; ++i) r(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = col.coeff(i);
    basis = basis * x % q;
  }
  return r;
}

long euler_phi(long n) {
  long result = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

Poly cyclotomic(long n) {
  static std::map<long, Poly> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  Poly p = Poly::monomial(1, static_cast<int>(n)) - Poly({Rational(1)});
  for (long d = 1; d < n; ++d)
    if (n % d == 0) p = divmod(p, cyclotomic(d)).first;
  cache.emplace(n, p);
  return p;
}

std::vector<long> cyclotomic_orders_up_to(int degree) {
  std::vector<long> out;
  if (degree < 1) return out;
  // phi(n) >= sqrt(n/2), so n <= 2 degree^2 suffices.
  const long bound = 2L * degree * degree + 2;
  for (long n = 1; n <= bound; ++n)
    if (euler_phi(n) <= degree) out.push_back(n);
  return out;
}

std::vector<long> cyclotomic_factor_orders(const Poly& p) {
  std::vector<long> out;
  for (long n : cyclotomic_orders_up_to(p.degree()))
    if (divides(cyclotomic(n), p)) out.push_back(n);
  return out;
}

bool has_cyclotomic_factor(const Poly& p) {
  for (long n : cyclotomic_orders_up_to(p.degree()))
    if (divides(cyclotomic(n), p)) return true;
  return false;
}

namespace {

int sign_changes(const std::vector<Poly>& seq, const Rational& x) {
  int changes = 0;
  int last = 0;
  for (const auto& p : seq) {
    int s = sgn(p(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int sturm_count(const Poly& p, const Rational& a, const Rational& b) {
  if (p.degree() <= 0 || !(a < b)) return 0;
  Poly s = squarefree_part(p);
  std::vector<Poly> seq{s, s.derivative()};
  while (seq.back().degree() > 0) {
    Poly r = seq[seq.size() - 2] % seq.back();
    if (r.is_zero()) break;
    seq.push_back(Rational(-1) * r);
  }
  return sign_changes(seq, a) - sign_changes(seq, b);
}

bool has_unit_circle_root(const Poly& input) {
  if (input.degree() <= 0) return false;
  Poly p = input;
  // Strip roots at zero.
  while (p.degree() > 0 && p.coeff(0) == 0) {
    std::vector<Rational> c(p.coeffs().begin() + 1, p.coeffs().end());
    p = Poly(std::move(c));
  }
  if (p.degree() <= 0) return false;
  if (p(Rational(1)) == 0 || p(Rational(-1)) == 0) return true;
  Poly s = squarefree_part(gcd(p, p.reciprocal()));
  if (s.degree() <= 0) return false;
  // Roots of s are closed under z -> 1/z and avoid +-1, so s is palindromic of
  // even degree 2d and s(z) = z^d T(z + 1/z).
  const int d = s.degree() / 2;
  Poly w = Poly::monomial(1, 1);
  Poly v_prev({Rational(2)});
  Poly v_cur = w;
  Poly t({s.coeff(d)});
  for (int j = 1; j <= d; ++j) {
    t = t + s.coeff(d + j) * v_cur;
    Poly v_next = w * v_cur - v_prev;
    v_prev = std::move(v_cur);
    v_cur = std::move(v_next);
  }
  // z on the unit circle, z != +-1  <=>  w = z + 1/z real in (-2, 2).
  return sturm_count(t, Rational(-2), Rational(2)) > 0;
}

}  // namespace anosov
