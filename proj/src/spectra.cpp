#include "anosov/spectra.hpp"

#include <algorithm>
#include <map>
#include <functional>
#include <mutex>
#include <numeric>

namespace anosov::spectra {

namespace mp = boost::multiprecision;

IntMatrix ActionSpec::element(const std::vector<long>& n) const {
  if (n.size() != generators.size()) throw Error(ErrorCode::ShapeMismatch, "element: wrong number of exponents");
  IntMatrix r = IntMatrix::identity(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i] != 0) r = r * power(generators[i], n[i]);
  return r;
}

namespace {

std::string describe(const std::vector<Violation>& vs) {
  std::string s;
  for (const auto& v : vs) {
    if (!s.empty()) s += "; ";
    s += std::string(error_name(v.code)) + "(";
    for (std::size_t i = 0; i < v.indices.size(); ++i) s += (i ? "," : "") + std::to_string(v.indices[i]);
    s += ")";
  }
  return s;
}

}  // namespace

ActionRejected::ActionRejected(std::vector<Violation> violations)
    : Error(ErrorCode::ActionRejected, describe(violations)), violations_(std::move(violations)) {}

ActionSpec validate_action(const std::vector<IntMatrix>& raw, std::vector<std::string> labels) {
  if (raw.empty()) throw ActionRejected({{ErrorCode::ShapeMismatch, {}, "no generators"}});
  const std::size_t n = raw.front().rows();
  std::vector<Violation> violations;
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (!raw[i].square() || raw[i].rows() != n || n == 0)
      violations.push_back({ErrorCode::ShapeMismatch, {static_cast<int>(i)}, "generator is not a square matrix of the common size"});
  if (!violations.empty()) throw ActionRejected(violations);
  if (!labels.empty() && labels.size() != raw.size())
    throw ActionRejected({{ErrorCode::ShapeMismatch, {}, "label count differs from generator count"}});

  for (std::size_t i = 0; i < raw.size(); ++i) {
    Integer d = determinant(raw[i]);
    if (d != 1 && d != -1)
      violations.push_back({ErrorCode::NotUnimodular, {static_cast<int>(i)}, "determinant " + d.get_str()});
  }
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (std::size_t j = i + 1; j < raw.size(); ++j)
      if (!(raw[i] * raw[j] == raw[j] * raw[i]))
        violations.push_back({ErrorCode::NonCommuting, {static_cast<int>(i), static_cast<int>(j)}, "generators do not commute"});
  if (!violations.empty()) throw ActionRejected(violations);

  ActionSpec a;
  a.dim = static_cast<int>(n);
  a.generators = raw;
  if (labels.empty())
    for (std::size_t i = 0; i < raw.size(); ++i) labels.push_back("A" + std::to_string(i + 1));
  a.labels = std::move(labels);
  return a;
}

namespace {

RatMatrix restrict_to(const RatMatrix& left_inverse, const IntMatrix& m, const RatMatrix& basis) {
  return left_inverse * (to_rational(m) * basis);
}

Poly power(const Poly& p, int e) {
  Poly r({Rational(1)});
  for (int i = 0; i < e; ++i) r = r * p;
  return r;
}

struct Enclosed {
  BigComplex value;
  BigFloat radius;
};

Enclosed eval_element(const GaloisBlock& b, std::size_t a, int root) {
  const auto& z = b.roots[static_cast<std::size_t>(root)];
  return {evaluate(b.elements[a], z.center), variation_bound(b.elements[a], z.center, z.radius) + BigFloat("1e-45")};
}

}  // namespace

JointSpectrum joint_spectrum(const ActionSpec& action, double tol) {
  const std::size_t k = action.rank();
  const auto n = static_cast<long>(action.dim);
  JointSpectrum js;

  // A combination sum t^a A_a separates the joint eigenvalues once its
  // number of distinct eigenvalues is maximal; at most (k-1) n(n-1)/2
  // values of t fail.
  const long trials = k == 1 ? 1 : static_cast<long>(k - 1) * n * (n - 1) / 2 + 1;
  int best = -1;
  IntMatrix best_m;
  for (long t = 1; t <= trials; ++t) {
    std::vector<long> c(k);
    long pw = 1;
    for (std::size_t a = 0; a < k; ++a, pw *= t) c[a] = pw;
    IntMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (std::size_t a = 0; a < k; ++a) m = m + Integer(c[a]) * action.generators[a];
    int d = squarefree_part(charpoly(m)).degree();
    if (d > best) {
      best = d;
      best_m = m;
      js.separator = c;
    }
    if (d == n) break;
  }

  const RatMatrix mc = to_rational(best_m);
  for (const auto& [q, e] : factor(charpoly(best_m))) {
    GaloisBlock block;
    block.field = q;
    block.multiplicity = e;
    RatMatrix kernel_of = evaluate(power(q, e), mc);
    auto null = nullspace(kernel_of);
    const std::size_t m = null.size();
    RatMatrix basis(static_cast<std::size_t>(n), m);
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t r = 0; r < static_cast<std::size_t>(n); ++r) basis(r, c) = null[c][r];
    RatMatrix bt = basis.transpose();
    RatMatrix left = *inverse(bt * basis) * bt;
    RatMatrix xc = left * (mc * basis);

    const int d = q.degree();
    RatMatrix companion = multiplication_matrix(Poly::monomial(1, 1), q);
    std::vector<Rational> sums;
    RatMatrix pw = RatMatrix::identity(static_cast<std::size_t>(d));
    for (int i = 0; i < 2 * d - 1; ++i) {
      sums.push_back(pw.trace());
      pw = pw * companion;
    }
    RatMatrix gram(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) gram(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = sums[static_cast<std::size_t>(i + j)];

    for (std::size_t a = 0; a < k; ++a) {
      RatMatrix xa = restrict_to(left, action.generators[a], basis);
      std::vector<Rational> traces;
      RatMatrix acc = xa;
      for (int i = 0; i < d; ++i) {
        traces.push_back(acc.trace() / Rational(e));
        acc = acc * xc;
      }
      auto g = solve(gram, traces);
      if (!g) throw Error(ErrorCode::SingularLinearPart, "trace form is degenerate");
      block.elements.emplace_back(*g);
    }
    block.roots = isolate_roots(q);
    js.blocks.push_back(std::move(block));
  }

  int index = 0;
  for (std::size_t b = 0; b < js.blocks.size(); ++b) {
    const auto& block = js.blocks[b];
    Poly minpoly = squarefree_part(charpoly(multiplication_matrix(block.elements[0], block.field))).primitive();
    for (std::size_t r = 0; r < block.roots.size(); ++r) {
      JointEigenvalueClass cls;
      cls.index = index++;
      cls.dimension = block.multiplicity;
      cls.minimal_polynomial = minpoly;
      cls.block = static_cast<int>(b);
      cls.root = static_cast<int>(r);
      for (std::size_t a = 0; a < k; ++a) {
        auto v = eval_element(block, a, static_cast<int>(r));
        BigFloat mod = mp::abs(v.value);
        if (mod <= v.radius) throw Error(ErrorCode::EnclosureTooWide, "eigenvalue enclosure contains zero");
        Interval iv{Interval::down(static_cast<double>(BigFloat(mp::log(mod - v.radius)))),
                    Interval::up(static_cast<double>(BigFloat(mp::log(mod + v.radius))))};
        if (iv.width() > tol * std::max(1.0, iv.mag()))
          throw Error(ErrorCode::EnclosureTooWide, "log-modulus enclosure wider than tolerance");
        cls.moduli_log.push_back(iv);
      }
      js.classes.push_back(std::move(cls));
    }
  }
  return js;
}

ModulusValue squared_modulus(const JointSpectrum& js, int cls, std::size_t generator) {
  const auto& c = js.classes[static_cast<std::size_t>(cls)];
  auto v = eval_element(js.blocks[static_cast<std::size_t>(c.block)], generator, c.root);
  BigFloat m = mp::abs(v.value);
  return {m * m, 2 * m * v.radius + v.radius * v.radius};
}

namespace {

ModulusValue raise(const ModulusValue& v, long e) {
  if (e == 0) return {BigFloat(1), BigFloat(0)};
  BigFloat lo = v.center - v.radius;
  BigFloat hi = v.center + v.radius;
  BigFloat plo = mp::pow(lo, static_cast<int>(e));
  BigFloat phi = mp::pow(hi, static_cast<int>(e));
  if (plo > phi) std::swap(plo, phi);
  return {(plo + phi) / 2, (phi - plo) / 2};
}

}  // namespace

std::optional<bool> power_relation(const ActionSpec& action, const JointSpectrum& js, std::size_t generator, int cls_i,
                                   int cls_j, long q, long p) {
  ModulusValue vi = raise(squared_modulus(js, cls_i, generator), q);
  ModulusValue vj = raise(squared_modulus(js, cls_j, generator), p);
  BigFloat gap = mp::abs(vi.center - vj.center);
  if (gap > vi.radius + vj.radius) return false;

  // Both values are real roots of P; a single root of P in their hull
  // proves equality.
  IntMatrix kk = kronecker(action.generators[generator], action.generators[generator]);
  Poly poly = charpoly(power(kk, q)) * charpoly(power(kk, p));
  BigFloat scale = std::max(BigFloat(1), BigFloat(vi.center));
  BigFloat slack = std::max(vi.radius, vj.radius) + BigFloat("1e-30") * scale;
  BigFloat lo = std::min(vi.center, vj.center) - slack;
  BigFloat hi = std::max(vi.center, vj.center) + slack;
  int count = sturm_count(poly, to_rational(lo), to_rational(hi));
  if (count == 1) return true;
  return std::nullopt;
}

namespace {

bool conjugate_pair(const JointSpectrum& js, int i, int j) {
  const auto& a = js.classes[static_cast<std::size_t>(i)];
  const auto& b = js.classes[static_cast<std::size_t>(j)];
  if (a.block != b.block) return false;
  const auto& roots = js.blocks[static_cast<std::size_t>(a.block)].roots;
  const auto& za = roots[static_cast<std::size_t>(a.root)];
  const auto& zb = roots[static_cast<std::size_t>(b.root)];
  return !za.real && za.center == mp::conj(zb.center);
}

bool lex_less(const LyapunovFunctional& a, const LyapunovFunctional& b) {
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i].mid() < b.coeffs[i].mid()) return true;
    if (a.coeffs[i].mid() > b.coeffs[i].mid()) return false;
  }
  return false;
}

}  // namespace

std::vector<LyapunovFunctional> lyapunov_functionals(const ActionSpec& action) {
  return lyapunov_functionals(action, joint_spectrum(action));
}

std::vector<LyapunovFunctional> lyapunov_functionals(const ActionSpec& action, const JointSpectrum& js) {
  const std::size_t k = action.rank();
  const std::size_t nc = js.classes.size();

  std::vector<std::vector<bool>> zero(nc, std::vector<bool>(k, false));
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t a = 0; a < k; ++a) {
      if (!js.classes[c].moduli_log[a].contains(0.0)) continue;
      auto unit = power_relation(action, js, a, static_cast<int>(c), static_cast<int>(c), 1, 0);
      if (!unit) throw Error(ErrorCode::UndecidedEquality, "cannot decide whether an eigenvalue has modulus 1");
      if (!*unit) throw Error(ErrorCode::UndecidedSign, "log-modulus enclosure straddles 0 but modulus is not 1");
      zero[c][a] = true;
    }

  std::vector<int> parent(nc);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]); };
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = i + 1; j < nc; ++j) {
      if (find(static_cast<int>(i)) == find(static_cast<int>(j))) continue;
      bool equal = true;
      bool conj = conjugate_pair(js, static_cast<int>(i), static_cast<int>(j));
      for (std::size_t a = 0; a < k && equal; ++a) {
        if (!overlaps(js.classes[i].moduli_log[a], js.classes[j].moduli_log[a])) {
          equal = false;
        } else if (zero[i][a] && zero[j][a]) {
          continue;
        } else if (zero[i][a] != zero[j][a]) {
          equal = false;
        } else if (!conj) {
          auto r = power_relation(action, js, a, static_cast<int>(i), static_cast<int>(j), 1, 1);
          if (!r)
            throw Error(ErrorCode::UndecidedEquality, "classes " + std::to_string(i) + " and " + std::to_string(j) +
                                                          " overlap without an exact equality proof");
          equal = *r;
        }
      }
      if (equal) parent[static_cast<std::size_t>(find(static_cast<int>(j)))] = find(static_cast<int>(i));
    }

  std::map<int, LyapunovFunctional> merged;
  for (std::size_t c = 0; c < nc; ++c) {
    int root = find(static_cast<int>(c));
    auto it = merged.find(root);
    if (it == merged.end()) {
      LyapunovFunctional f;
      f.coeffs = js.classes[c].moduli_log;
      for (std::size_t a = 0; a < k; ++a) {
        if (zero[c][a]) {
          f.exact.emplace_back(Rational(0));
          f.coeffs[a] = Interval(0.0);
        } else {
          f.exact.emplace_back(std::nullopt);
        }
      }
      f.multiplicity = js.classes[c].dimension;
      f.classes.push_back(static_cast<int>(c));
      merged.emplace(root, std::move(f));
    } else {
      auto& f = it->second;
      for (std::size_t a = 0; a < k; ++a)
        if (!zero[c][a])
          f.coeffs[a] = {std::max(f.coeffs[a].lo, js.classes[c].moduli_log[a].lo),
                         std::min(f.coeffs[a].hi, js.classes[c].moduli_log[a].hi)};
      f.multiplicity += js.classes[c].dimension;
      f.classes.push_back(static_cast<int>(c));
    }
  }
  std::vector<LyapunovFunctional> out;
  for (auto& [root, f] : merged) out.push_back(std::move(f));
  std::stable_sort(out.begin(), out.end(), lex_less);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].label = "chi" + std::to_string(i + 1);
  return out;
}

std::optional<bool> SpectralCertifier::proportional(std::size_t i, std::size_t j, const Rational& ratio) const {
  const auto& fi = fs_[i];
  const auto& fj = fs_[j];
  const long p = ratio.get_num().get_si();
  const long q = ratio.get_den().get_si();
  for (std::size_t a = 0; a < action_.rank(); ++a) {
    bool zi = fi.exact[a] && *fi.exact[a] == 0;
    bool zj = fj.exact[a] && *fj.exact[a] == 0;
    if (zi && zj) continue;
    if (zi != zj) return false;
    auto r = power_relation(action_, js_, a, fi.classes.front(), fj.classes.front(), q, p);
    if (!r) return std::nullopt;
    if (!*r) return false;
  }
  return true;
}

SemisimplicityReport is_semisimple(const ActionSpec& action) {
  SemisimplicityReport r;
  for (const auto& g : action.generators) {
    Poly m = minimal_polynomial(to_rational(g));
    bool ok = gcd(m, m.derivative()).degree() == 0;
    r.per_generator.push_back(ok);
    r.minimal_polynomials.push_back(m);
    r.overall = r.overall && ok;
  }
  return r;
}

bool is_anosov_element(const ActionSpec& action, const std::vector<long>& a) {
  if (std::all_of(a.begin(), a.end(), [](long v) { return v == 0; })) return false;
  return !has_unit_circle_root(charpoly(action.element(a)));
}

bool is_anosov_element(const ActionSpec& action, const std::vector<LyapunovFunctional>& functionals,
                       const std::vector<long>& a) {
  if (std::all_of(a.begin(), a.end(), [](long v) { return v == 0; })) return false;
  bool decided = true;
  for (const auto& f : functionals) {
    if (f.is_zero()) return false;
    Interval v = f(a);
    if (!v.excludes_zero()) decided = false;
  }
  if (decided) return true;
  return !has_unit_circle_root(charpoly(action.element(a)));
}

namespace {

std::vector<Integer> integer_coeffs(const Poly& p) {
  std::vector<Integer> c;
  for (const auto& v : p.coeffs()) c.push_back(v.get_num());
  return c;
}

// Remainder of a by a monic integer polynomial is zero.
bool monic_divides(const std::vector<Integer>& d, std::vector<Integer> a) {
  const std::size_t dd = d.size() - 1;
  if (a.size() < d.size()) return std::all_of(a.begin(), a.end(), [](const Integer& v) { return v == 0; });
  for (std::size_t i = a.size() - 1; i >= dd; --i) {
    const Integer f = a[i];
    if (f != 0)
      for (std::size_t j = 0; j <= dd; ++j) a[i - dd + j] -= f * d[j];
    if (i == dd) break;
  }
  for (std::size_t i = 0; i < dd; ++i)
    if (a[i] != 0) return false;
  return true;
}

}  // namespace

bool is_weak_mixing(const IntMatrix& m) {
  // A root-of-unity eigenvalue means some irreducible factor equals Phi_n
  // with phi(n) <= dim; test each candidate by exact division.
  static std::map<long, std::vector<Integer>> cyclo;
  static std::mutex lock;
  auto p = integer_coeffs(charpoly(m));
  for (long order : cyclotomic_orders_up_to(static_cast<int>(m.rows()))) {
    std::vector<Integer> phi;
    {
      std::lock_guard<std::mutex> g(lock);
      auto it = cyclo.find(order);
      if (it == cyclo.end()) it = cyclo.emplace(order, integer_coeffs(cyclotomic(order))).first;
      phi = it->second;
    }
    if (monic_divides(phi, p)) return false;
  }
  return true;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Rank and a numerical kernel basis of a real matrix at 50 digits.
struct NumericKernel {
  std::size_t rank = 0;
  std::vector<std::vector<BigFloat>> basis;
};

NumericKernel numeric_kernel(std::vector<std::vector<BigFloat>> m, std::size_t cols) {
  const BigFloat eps("1e-30");
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t best = row;
    for (std::size_t r = row; r < m.size(); ++r)
      if (mp::abs(m[r][c]) > mp::abs(m[best][c])) best = r;
    if (mp::abs(m[best][c]) < eps) continue;
    std::swap(m[row], m[best]);
    BigFloat piv = m[row][c];
    for (auto& v : m[row]) v /= piv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row) continue;
      BigFloat f = m[r][c];
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) m[r][j] -= f * m[row][j];
    }
    pivots.push_back(c);
    ++row;
  }
  NumericKernel out;
  out.rank = pivots.size();
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<BigFloat> v(cols, BigFloat(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    out.basis.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<long>> integer_vector(const std::vector<BigFloat>& v) {
  BigFloat mx = 0;
  for (const auto& x : v) mx = std::max(mx, BigFloat(mp::abs(x)));
  std::vector<Rational> q;
  for (const auto& x : v) {
    Rational r;
    if (!rationalize(static_cast<double>(BigFloat(x / mx)), 1e-12, 1000, r)) return std::nullopt;
    q.push_back(r);
  }
  Integer den = lcm_of_denominators(q);
  std::vector<long> out;
  for (const auto& r : q) out.push_back(Rational(r * Rational(den)).get_num().get_si());
  return out;
}

}  // namespace

Corollary4Report check_corollary4_hypotheses(const ActionSpec& action, const Corollary4Options& options) {
  Corollary4Report rep;
  const std::size_t k = action.rank();
  rep.applicable = k >= 2;
  if (!rep.applicable) rep.notes.push_back("rank k = " + std::to_string(k) + " < 2: the rigidity criterion needs k >= 2");
  rep.semisimple = is_semisimple(action);
  rep.weak_mixing_generators = std::all_of(action.generators.begin(), action.generators.end(), is_weak_mixing);

  JointSpectrum js = joint_spectrum(action);
  auto fs = lyapunov_functionals(action, js);

  bool has_zero = std::any_of(fs.begin(), fs.end(), [](const LyapunovFunctional& f) { return f.is_zero(); });
  if (has_zero) {
    rep.anosov_source = "none: a Lyapunov functional vanishes identically";
  } else {
    // Box search ordered by max-norm, then lexicographically.
    const long box = options.box;
    for (long radius = 1; radius <= box && !rep.anosov_element; ++radius) {
      std::vector<long> a(k, -radius);
      std::size_t visited = 0;
      while (!rep.anosov_element && visited < 200000) {
        long norm = 0;
        for (long v : a) norm = std::max(norm, std::labs(v));
        if (norm == radius && is_anosov_element(action, fs, a)) rep.anosov_element = a;
        ++visited;
        std::size_t i = k;
        bool wrapped = true;
        while (i > 0) {
          --i;
          if (a[i] < radius) {
            ++a[i];
            wrapped = false;
            break;
          }
          a[i] = -radius;
        }
        if (wrapped) break;
      }
    }
    if (rep.anosov_element) {
      rep.anosov_source = "box";
    } else {
      try {
        SpectralCertifier cert(action, js, fs);
        auto coarse = chambers::coarse_decomposition(fs, &cert);
        auto arr = chambers::weyl_chambers(fs, coarse, &cert);
        auto a = arr.chambers.front().regular_element;
        if (is_anosov_element(action, fs, a)) {
          rep.anosov_element = a;
          rep.anosov_source = "chamber";
        }
      } catch (const Error& e) {
        rep.notes.push_back(std::string("chamber certificate failed: ") + e.what());
      }
      if (!rep.anosov_element) {
        rep.box_exhausted = true;
        rep.anosov_source = "BoxExhausted";
      }
    }
  }

  // Per Galois block: n gives a root-of-unity eigenvalue there iff every
  // conjugate of prod g_a^{n_a} has modulus 1, i.e. n lies in the kernel of
  // the log-modulus matrix of the block.
  rep.roots_of_unity = Verdict::Pass;
  for (std::size_t b = 0; b < js.blocks.size() && rep.roots_of_unity != Verdict::Fail; ++b) {
    const auto& block = js.blocks[b];
    std::vector<std::vector<BigFloat>> lam;
    for (std::size_t r = 0; r < block.roots.size(); ++r) {
      std::vector<BigFloat> row;
      for (std::size_t a = 0; a < k; ++a) row.push_back(mp::log(mp::abs(eval_element(block, a, static_cast<int>(r)).value)));
      lam.push_back(std::move(row));
    }
    auto ker = numeric_kernel(lam, k);
    rep.kernel_ranks.push_back(static_cast<int>(ker.basis.size()));
    for (const auto& v : ker.basis) {
      auto n = integer_vector(v);
      if (!n) {
        rep.roots_of_unity = Verdict::Inconclusive;
        rep.notes.push_back("kernel vector of block " + std::to_string(b) + " could not be rationalized");
        continue;
      }
      Poly cp = charpoly(action.element(*n));
      auto orders = cyclotomic_factor_orders(cp);
      if (orders.empty()) {
        rep.roots_of_unity = Verdict::Inconclusive;
        rep.notes.push_back("kernel vector of block " + std::to_string(b) + " not confirmed by the Kronecker test");
        continue;
      }
      rep.roots_of_unity = Verdict::Fail;
      rep.witness = RootOfUnityWitness{*n, static_cast<int>(b), orders.front()};
      break;
    }
  }

  if (!rep.applicable || !rep.semisimple.overall || rep.roots_of_unity == Verdict::Fail ||
      (!rep.anosov_element && !rep.box_exhausted)) {
    rep.verdict = Verdict::Fail;
  } else if (rep.box_exhausted || rep.roots_of_unity == Verdict::Inconclusive) {
    rep.verdict = Verdict::Inconclusive;
  } else {
    rep.verdict = Verdict::Pass;
  }
  return rep;
}

}  // namespace anosov::spectra
