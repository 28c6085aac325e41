#include "anosov/conjugacy.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>

#include "anosov/error.hpp"
#include "anosov/parallel.hpp"

namespace anosov::conjugacy {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr std::size_t kMaxDim = 8;

using Dense = std::vector<double>;  // row-major n x n

Dense to_dense(const IntMatrix& a) {
  Dense d(a.rows() * a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d[i * a.cols() + j] = a(i, j).get_d();
  return d;
}

double inf_norm(const Dense& m, std::size_t n) {
  double best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(m[i * n + j]);
    best = std::max(best, s);
  }
  return best;
}

void mat_vec(const Dense& m, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += m[i * n + j] * x[j];
    out[i] = s;
  }
}

Dense mat_mul(const Dense& a, const Dense& b, std::size_t n) {
  Dense c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
  return c;
}

Eigen::MatrixXd to_eigen(const Dense& m, std::size_t n) {
  Eigen::MatrixXd e(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i * n + j];
  return e;
}

Dense from_eigen(const Eigen::MatrixXd& e) {
  const auto n = static_cast<std::size_t>(e.rows());
  Dense m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return m;
}

// Solves m x = b in place by Gaussian elimination with partial pivoting.
bool small_solve(std::array<double, kMaxDim * kMaxDim>& m, std::array<double, kMaxDim>& b, std::size_t n) {
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    if (m[piv * n + c] == 0) return false;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[c * n + j], m[piv * n + j]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = m[r * n + c] / m[c * n + c];
      for (std::size_t j = c; j < n; ++j) m[r * n + j] -= f * m[c * n + j];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t j = c + 1; j < n; ++j) s -= m[c * n + j] * b[j];
    b[c] = s / m[c * n + c];
  }
  return true;
}

double wrap_distance(double d) { return std::abs(d - std::round(d)); }

}  // namespace

// ---- trigonometric fields ----

void TrigField::evaluate(const double* x, double* out, std::size_t n) const {
  std::fill(out, out + n, 0.0);
  for (const auto& t : terms) {
    double phase = 0;
    for (std::size_t d = 0; d < n; ++d) phase += static_cast<double>(t.frequency[d]) * x[d];
    const double s = std::sin(kTwoPi * phase), c = std::cos(kTwoPi * phase);
    for (std::size_t d = 0; d < n; ++d) {
      out[d] += epsilon * t.sin_coeffs[d] * s;
      if (!t.cos_coeffs.empty()) out[d] += epsilon * t.cos_coeffs[d] * c;
    }
  }
}

void TrigField::jacobian(const double* x, double* out, std::size_t n) const {
  std::fill(out, out + n * n, 0.0);
  for (const auto& t : terms) {
    double phase = 0;
    for (std::size_t d = 0; d < n; ++d) phase += static_cast<double>(t.frequency[d]) * x[d];
    const double s = std::sin(kTwoPi * phase), c = std::cos(kTwoPi * phase);
    for (std::size_t i = 0; i < n; ++i) {
      double w = t.sin_coeffs[i] * c;
      if (!t.cos_coeffs.empty()) w -= t.cos_coeffs[i] * s;
      w *= epsilon * kTwoPi;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += w * static_cast<double>(t.frequency[j]);
    }
  }
}

double TrigField::sup_bound() const {
  std::vector<double> comp;
  for (const auto& t : terms) {
    if (comp.size() < t.sin_coeffs.size()) comp.resize(t.sin_coeffs.size(), 0.0);
    for (std::size_t d = 0; d < t.sin_coeffs.size(); ++d)
      comp[d] += std::abs(t.sin_coeffs[d]) + (t.cos_coeffs.empty() ? 0.0 : std::abs(t.cos_coeffs[d]));
  }
  double best = 0;
  for (double v : comp) best = std::max(best, v);
  return std::abs(epsilon) * best;
}

double TrigField::lipschitz_bound() const {
  std::vector<double> rows;
  for (const auto& t : terms) {
    double k1 = 0;
    for (long k : t.frequency) k1 += std::abs(static_cast<double>(k));
    if (rows.size() < t.sin_coeffs.size()) rows.resize(t.sin_coeffs.size(), 0.0);
    for (std::size_t d = 0; d < t.sin_coeffs.size(); ++d)
      rows[d] += k1 * (std::abs(t.sin_coeffs[d]) + (t.cos_coeffs.empty() ? 0.0 : std::abs(t.cos_coeffs[d])));
  }
  double best = 0;
  for (double v : rows) best = std::max(best, v);
  return std::abs(epsilon) * kTwoPi * best;
}

bool TrigField::is_zero() const {
  if (epsilon == 0) return true;
  for (const auto& t : terms) {
    for (double v : t.sin_coeffs)
      if (v != 0) return false;
    for (double v : t.cos_coeffs)
      if (v != 0) return false;
  }
  return true;
}

PerturbationMap zero_map(std::size_t n) {
  PerturbationMap m;
  m.evaluate = [n](const double*, double* out) { std::fill(out, out + n, 0.0); };
  m.kind = "zero";
  m.zero = true;
  return m;
}

namespace {

void check_field(const TrigField& f, std::size_t n) {
  for (const auto& t : f.terms)
    if (t.frequency.size() != n || t.sin_coeffs.size() != n || (!t.cos_coeffs.empty() && t.cos_coeffs.size() != n))
      throw Error(ErrorCode::ShapeMismatch, "trigonometric term does not match the torus dimension");
  if (n > kMaxDim) throw Error(ErrorCode::Unsupported, "torus dimension above " + std::to_string(kMaxDim));
}

}  // namespace

PerturbationMap trig_map(const TrigField& field, std::size_t n) {
  check_field(field, n);
  if (field.is_zero()) return zero_map(n);
  PerturbationMap m;
  m.evaluate = [field, n](const double* x, double* out) { field.evaluate(x, out, n); };
  m.sup_bound = field.sup_bound();
  m.lipschitz_bound = field.lipschitz_bound();
  m.kind = "trig";
  return m;
}

PsiDiffeo::PsiDiffeo(TrigField g, std::size_t n) : g_(std::move(g)), n_(n) {
  check_field(g_, n_);
  if (g_.lipschitz_bound() >= 1) throw Error(ErrorCode::PreconditionFailed, "psi is not a small perturbation of id");
}

void PsiDiffeo::apply(const double* x, double* out) const {
  g_.evaluate(x, out, n_);
  for (std::size_t d = 0; d < n_; ++d) out[d] += x[d];
}

void PsiDiffeo::inverse(const double* y, double* out) const {
  std::array<double, kMaxDim> z{}, r{};
  std::array<double, kMaxDim * kMaxDim> jac{};
  g_.evaluate(y, r.data(), n_);
  for (std::size_t d = 0; d < n_; ++d) z[d] = y[d] - r[d];
  for (int it = 0; it < 50; ++it) {
    g_.evaluate(z.data(), r.data(), n_);
    double err = 0;
    for (std::size_t d = 0; d < n_; ++d) {
      r[d] = z[d] + r[d] - y[d];
      err = std::max(err, std::abs(r[d]));
    }
    if (err == 0) break;
    g_.jacobian(z.data(), jac.data(), n_);
    for (std::size_t d = 0; d < n_; ++d) jac[d * n_ + d] += 1;
    if (!small_solve(jac, r, n_)) throw Error(ErrorCode::PreconditionFailed, "psi is not invertible");
    double step = 0;
    for (std::size_t d = 0; d < n_; ++d) {
      z[d] -= r[d];
      step = std::max(step, std::abs(r[d]));
    }
    if (step < 1e-17) break;
  }
  std::copy(z.begin(), z.begin() + static_cast<long>(n_), out);
}

PerturbationMap psi_map(const IntMatrix& a, const PsiDiffeo& psi) {
  const std::size_t n = psi.dim();
  if (a.rows() != n || a.cols() != n) throw Error(ErrorCode::ShapeMismatch, "psi and matrix dimensions differ");
  if (psi.field().is_zero()) return zero_map(n);
  const Dense m = to_dense(a);
  PerturbationMap p;
  p.evaluate = [m, psi, n](const double* y, double* out) {
    std::array<double, kMaxDim> z{}, az{}, gz{}, gaz{};
    psi.inverse(y, z.data());
    mat_vec(m, z.data(), az.data(), n);
    psi.field().evaluate(z.data(), gz.data(), n);
    psi.field().evaluate(az.data(), gaz.data(), n);
    mat_vec(m, gz.data(), out, n);
    for (std::size_t d = 0; d < n; ++d) out[d] = gaz[d] - out[d];
  };
  const double norm = inf_norm(m, n), sup = psi.field().sup_bound(), lip = psi.field().lipschitz_bound();
  p.sup_bound = (norm + 1) * sup;
  p.lipschitz_bound = 2 * norm * lip / (1 - lip);
  p.kind = "psi";
  return p;
}

ToralPerturbation::ToralPerturbation(ActionSpec base, std::vector<PerturbationMap> maps)
    : base_(std::move(base)), maps_(std::move(maps)) {
  if (maps_.size() != base_.rank())
    throw Error(ErrorCode::ShapeMismatch, "one perturbation per generator required");
  for (const auto& g : base_.generators)
    if (abs(determinant(g)) != 1) throw Error(ErrorCode::NotUnimodular, "generator is not unimodular");
}

double ToralPerturbation::c1_norm_bound() const {
  double best = 0;
  for (const auto& m : maps_) best = std::max(best, m.c1_bound());
  return best;
}

void ToralPerturbation::apply(std::size_t i, const double* x, double* out) const {
  const auto& a = base_.generators.at(i);
  const std::size_t n = dim();
  maps_[i].evaluate(x, out);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out[r] += a(r, c).get_d() * x[c];
}

ToralPerturbation trig_perturbation(const ActionSpec& base, const std::vector<TrigField>& fields) {
  std::vector<PerturbationMap> maps;
  const auto n = static_cast<std::size_t>(base.dim);
  for (std::size_t i = 0; i < base.rank(); ++i)
    maps.push_back(i < fields.size() ? trig_map(fields[i], n) : zero_map(n));
  return ToralPerturbation(base, std::move(maps));
}

ToralPerturbation psi_conjugation(const ActionSpec& base, const PsiDiffeo& psi) {
  std::vector<PerturbationMap> maps;
  for (const auto& a : base.generators) maps.push_back(psi_map(a, psi));
  return ToralPerturbation(base, std::move(maps));
}

ToralPerturbation iterate(const ToralPerturbation& pert, std::size_t generator, int power) {
  if (power < 1) throw Error(ErrorCode::PreconditionFailed, "power must be positive");
  const std::size_t n = pert.dim();
  const IntMatrix& a = pert.base().generators.at(generator);
  ActionSpec base;
  base.dim = pert.base().dim;
  base.generators = {anosov::power(a, power)};
  base.labels = {pert.base().labels.at(generator) + "^" + std::to_string(power)};
  const PerturbationMap& p = pert.map(generator);
  if (p.zero) return ToralPerturbation(base, {zero_map(n)});

  const Dense m = to_dense(a), mk = to_dense(base.generators[0]);
  PerturbationMap q;
  q.evaluate = [p, m, mk, n, power](const double* x, double* out) {
    std::array<double, kMaxDim> y{}, t{}, s{};
    std::copy(x, x + n, y.begin());
    for (int k = 0; k < power; ++k) {
      mat_vec(m, y.data(), t.data(), n);
      p.evaluate(y.data(), s.data());
      for (std::size_t d = 0; d < n; ++d) y[d] = t[d] + s[d];
    }
    mat_vec(mk, x, t.data(), n);
    for (std::size_t d = 0; d < n; ++d) out[d] = y[d] - t[d];
  };
  const double norm = inf_norm(m, n);
  double sup = 0;
  for (int k = 0; k < power; ++k) sup = norm * sup + p.sup_bound;
  q.sup_bound = sup;
  q.lipschitz_bound = std::pow(norm + p.lipschitz_bound, power) - std::pow(norm, power);
  q.kind = p.kind + "^" + std::to_string(power);
  return ToralPerturbation(base, {q});
}

double commutation_defect(const ToralPerturbation& pert, std::size_t i, std::size_t j, std::size_t samples,
                          std::uint64_t seed) {
  const std::size_t n = pert.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<double, kMaxDim> x{}, a{}, b{}, ab{}, ba{};
  double worst = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t d = 0; d < n; ++d) x[d] = unit(rng);
    pert.apply(j, x.data(), a.data());
    pert.apply(i, a.data(), ab.data());
    pert.apply(i, x.data(), b.data());
    pert.apply(j, b.data(), ba.data());
    for (std::size_t d = 0; d < n; ++d) worst = std::max(worst, wrap_distance(ab[d] - ba[d]));
  }
  return worst;
}

// ---- hyperbolic splitting ----

Splitting hyperbolic_splitting(const IntMatrix& a) {
  const std::size_t n = a.rows();
  if (!spectra::is_anosov_element(spectra::ActionSpec{static_cast<int>(n), {a}, {"A"}}, std::vector<long>{1}))
    throw Error(ErrorCode::NotAnosov, "matrix has an eigenvalue on the unit circle");
  const Eigen::MatrixXd m = to_eigen(to_dense(a), n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  // Cayley transform sends the open unit disk to the left half plane; the
  // matrix sign function then separates the two invariant subspaces.
  Eigen::MatrixXd s = (m + id) * (m - id).inverse();
  for (int it = 0; it < 100; ++it) {
    Eigen::MatrixXd next = 0.5 * (s + s.inverse());
    double change = (next - s).lpNorm<Eigen::Infinity>();
    s = next;
    if (change < 1e-15 * std::max(1.0, s.lpNorm<Eigen::Infinity>())) break;
  }
  Splitting out;
  out.stable_projection = from_eigen(0.5 * (id - s));
  out.unstable_projection = from_eigen(0.5 * (id + s));

  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double mod = std::abs(es.eigenvalues()(i));
    if (mod < 1) {
      out.contraction_rate = std::max(out.contraction_rate, mod);
      ++out.stable_dim;
    } else {
      out.contraction_rate = std::max(out.contraction_rate, 1 / mod);
    }
  }
  return out;
}

// ---- grid field ----

std::size_t ConjugacyField::points() const {
  std::size_t p = 1;
  for (std::size_t d = 0; d < dim; ++d) p *= resolution;
  return p;
}

std::vector<double> ConjugacyField::point(std::size_t index) const {
  return {u.begin() + static_cast<long>(index * dim), u.begin() + static_cast<long>((index + 1) * dim)};
}

double ConjugacyField::sup_norm() const {
  double best = 0;
  for (double v : u) best = std::max(best, std::abs(v));
  return best;
}

void ConjugacyField::interpolate(const double* x, double* out) const {
  std::array<std::size_t, kMaxDim> lo{}, hi{};
  std::array<double, kMaxDim> frac{};
  const auto res = static_cast<double>(resolution);
  for (std::size_t d = 0; d < dim; ++d) {
    double t = (x[d] - std::floor(x[d])) * res;
    double f = std::floor(t);
    lo[d] = static_cast<std::size_t>(f) % resolution;
    hi[d] = (lo[d] + 1) % resolution;
    frac[d] = t - f;
  }
  std::fill(out, out + dim, 0.0);
  for (std::size_t corner = 0; corner < (std::size_t{1} << dim); ++corner) {
    double w = 1;
    std::size_t index = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      bool up = (corner >> d) & 1;
      w *= up ? frac[d] : 1 - frac[d];
      index = index * resolution + (up ? hi[d] : lo[d]);
    }
    if (w == 0) continue;
    for (std::size_t c = 0; c < dim; ++c) out[c] += w * u[index * dim + c];
  }
}

namespace {

using Permutation = std::vector<std::uint32_t>;

// perm[i] = index of A x_i on the grid.
Permutation grid_permutation(const IntMatrix& a, std::size_t res, std::size_t count) {
  const std::size_t n = a.rows();
  std::vector<long> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j).get_si();
  Permutation perm(count);
  const long r = static_cast<long>(res);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    std::array<long, kMaxDim> j{};
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t t = idx;
      for (std::size_t d = n; d-- > 0;) {
        j[d] = static_cast<long>(t % res);
        t /= res;
      }
      std::size_t out = 0;
      for (std::size_t row = 0; row < n; ++row) {
        long s = 0;
        for (std::size_t c = 0; c < n; ++c) s = (s + m[row * n + c] * j[c]) % r;
        s = (s % r + r) % r;
        out = out * res + static_cast<std::size_t>(s);
      }
      perm[idx] = static_cast<std::uint32_t>(out);
    }
  });
  return perm;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  Permutation out(p.size());
  parallel_for(p.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = p[q[i]];
  });
  return out;
}

struct Grid {
  std::size_t n = 0, res = 0, count = 0;

  void coords(std::size_t idx, double* x) const {
    for (std::size_t d = n; d-- > 0;) {
      x[d] = static_cast<double>(idx % res) / static_cast<double>(res);
      idx /= res;
    }
  }
};

// out = sum over m >= 0 of B^m (v o perm^(m+1)) with v = proj * q, via doubling.
void transfer_sum(const Grid& g, const std::vector<double>& q, const Dense& proj, const Dense& step,
                  const Permutation& perm, bool pre_shift, std::vector<double>& out) {
  const std::size_t n = g.n, count = g.count;
  std::vector<double> cur(count * n), tmp(count * n);
  parallel_for(count, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::size_t src = pre_shift ? perm[i] : i;
      mat_vec(proj, &q[src * n], &cur[i * n], n);
    }
  });
  Dense power = step;
  Permutation p = perm;
  for (int level = 0; level < 64; ++level) {
    if (inf_norm(power, n) < 1e-18) break;
    parallel_for(count, [&](std::size_t b, std::size_t e) {
      std::array<double, kMaxDim> t{};
      for (std::size_t i = b; i < e; ++i) {
        mat_vec(power, &cur[p[i] * n], t.data(), n);
        for (std::size_t d = 0; d < n; ++d) tmp[i * n + d] = cur[i * n + d] + t[d];
      }
    });
    std::swap(cur, tmp);
    power = mat_mul(power, power, n);
    p = compose(p, p);
  }
  out = std::move(cur);
}

struct LinearSolver {
  Grid grid;
  Dense ps, pu, as, au_inv, a;
  Permutation forward, backward;

  LinearSolver(const IntMatrix& m, const Splitting& split, std::size_t res) {
    grid.n = m.rows();
    grid.res = res;
    grid.count = 1;
    for (std::size_t d = 0; d < grid.n; ++d) grid.count *= res;
    if (grid.count > std::numeric_limits<std::uint32_t>::max())
      throw Error(ErrorCode::Unsupported, "grid too large");
    a = to_dense(m);
    ps = split.stable_projection;
    pu = split.unstable_projection;
    as = mat_mul(a, ps, grid.n);
    au_inv = mat_mul(to_dense(unimodular_inverse(m)), pu, grid.n);
    forward = grid_permutation(m, res, grid.count);
    backward = grid_permutation(unimodular_inverse(m), res, grid.count);
  }

  // Solves u o A - A u = q.
  std::vector<double> solve(const std::vector<double>& q) const {
    std::vector<double> us, uu;
    transfer_sum(grid, q, ps, as, backward, true, us);
    transfer_sum(grid, q, mat_mul(au_inv, pu, grid.n), au_inv, forward, false, uu);
    for (std::size_t i = 0; i < us.size(); ++i) us[i] -= uu[i];
    return us;
  }
};

// q(x) = p(x + u(x)) on the grid.
void nonlinear_term(const Grid& g, const PerturbationMap& p, const std::vector<double>& u, std::vector<double>& q) {
  const std::size_t n = g.n;
  q.assign(g.count * n, 0.0);
  if (p.zero) return;
  parallel_for(g.count, [&](std::size_t b, std::size_t e) {
    std::array<double, kMaxDim> x{};
    for (std::size_t i = b; i < e; ++i) {
      g.coords(i, x.data());
      for (std::size_t d = 0; d < n; ++d) x[d] += u[i * n + d];
      p.evaluate(x.data(), &q[i * n]);
    }
  });
}

// sup |u(Ax) - A u(x) - q(x)|.
double residual_of(const Grid& g, const Dense& a, const Permutation& forward, const std::vector<double>& u,
                   const std::vector<double>& q) {
  const std::size_t n = g.n;
  std::mutex lock;
  double worst = 0;
  parallel_for(g.count, [&](std::size_t b, std::size_t e) {
    std::array<double, kMaxDim> t{};
    double local = 0;
    for (std::size_t i = b; i < e; ++i) {
      mat_vec(a, &u[i * n], t.data(), n);
      for (std::size_t d = 0; d < n; ++d)
        local = std::max(local, std::abs(u[forward[i] * n + d] - t[d] - q[i * n + d]));
    }
    std::lock_guard guard(lock);
    worst = std::max(worst, local);
  });
  return worst;
}

// Energy fraction of u in modes beyond a quarter of the grid on some axis.
double fourier_tail(const ConjugacyField& h);

}  // namespace

ConjugacyField solve_conjugacy(const ToralPerturbation& pert, std::size_t solving_generator,
                               const SolveOptions& options) {
  if (solving_generator >= pert.rank()) throw Error(ErrorCode::ShapeMismatch, "no such generator");
  if (options.resolution < 2) throw Error(ErrorCode::PreconditionFailed, "resolution must be at least 2");
  const IntMatrix& a = pert.base().generators[solving_generator];
  const Splitting split = hyperbolic_splitting(a);
  const PerturbationMap& p = pert.map(solving_generator);

  ConjugacyField h;
  h.dim = pert.dim();
  h.resolution = options.resolution;
  h.solving_generator = solving_generator;
  h.contraction_rate = split.contraction_rate;
  h.smallness = p.c1_bound() / (1 - split.contraction_rate);
  if (h.smallness > options.smallness_threshold)
    throw Error(ErrorCode::Diverged, "perturbation exceeds smallness threshold: " + std::to_string(h.smallness) +
                                         " > " + std::to_string(options.smallness_threshold));

  LinearSolver lin(a, split, options.resolution);
  h.u.assign(lin.grid.count * h.dim, 0.0);
  std::vector<double> q;
  nonlinear_term(lin.grid, p, h.u, q);
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    h.u = lin.solve(q);
    nonlinear_term(lin.grid, p, h.u, q);
    h.residual = residual_of(lin.grid, lin.a, lin.forward, h.u, q);
    h.residual_history.push_back(h.residual);
    h.iterations = it;
    if (!std::isfinite(h.residual) || h.sup_norm() > 0.25)
      throw Error(ErrorCode::Diverged, "displacement left the injectivity scale at iteration " + std::to_string(it));
    if (h.residual < options.tol) return h;
    const std::size_t w = options.window;
    if (w > 0 && it > w && h.residual >= h.residual_history[it - 1 - w]) {
      if (fourier_tail(h) > 1e-8)
        throw Error(ErrorCode::ResolutionInsufficient,
                    "residual plateau at " + std::to_string(h.residual) + " with significant Fourier tail");
      throw Error(ErrorCode::Diverged, "residual non-decreasing over " + std::to_string(w) + " iterations at " +
                                           std::to_string(h.residual));
    }
  }
  throw Error(ErrorCode::Diverged, "max_iter reached with residual " + std::to_string(h.residual));
}

IntertwiningReport verify_intertwining(const ConjugacyField& h, const ToralPerturbation& pert, double tol) {
  if (h.dim != pert.dim()) throw Error(ErrorCode::ShapeMismatch, "field and action dimensions differ");
  IntertwiningReport r;
  r.tol = tol;
  Grid g{h.dim, h.resolution, h.points()};
  std::vector<double> q;
  for (std::size_t i = 0; i < pert.rank(); ++i) {
    const IntMatrix& a = pert.base().generators[i];
    nonlinear_term(g, pert.map(i), h.u, q);
    r.residuals.push_back(residual_of(g, to_dense(a), grid_permutation(a, h.resolution, g.count), h.u, q));
  }
  r.rigid = std::all_of(r.residuals.begin(), r.residuals.end(),
                        [&](double v) { return v < tol + r.interpolation_budget; });
  return r;
}

double distance_to(const ConjugacyField& h, const TrigField& g) {
  Grid grid{h.dim, h.resolution, h.points()};
  std::mutex lock;
  double worst = 0;
  parallel_for(grid.count, [&](std::size_t b, std::size_t e) {
    std::array<double, kMaxDim> x{}, v{};
    double local = 0;
    for (std::size_t i = b; i < e; ++i) {
      grid.coords(i, x.data());
      g.evaluate(x.data(), v.data(), h.dim);
      for (std::size_t d = 0; d < h.dim; ++d) local = std::max(local, std::abs(h.u[i * h.dim + d] - v[d]));
    }
    std::lock_guard guard(lock);
    worst = std::max(worst, local);
  });
  return worst;
}

// ---- regularity probe ----

std::vector<ProbeDirection> coarse_directions(const ActionSpec& base,
                                              const std::vector<LyapunovFunctional>& functionals,
                                              const chambers::CoarseDecomposition& coarse) {
  const auto n = static_cast<Eigen::Index>(base.dim);
  std::vector<Eigen::MatrixXd> gens;
  Eigen::MatrixXd generic = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < base.rank(); ++a) {
    gens.push_back(to_eigen(to_dense(base.generators[a]), static_cast<std::size_t>(n)));
    generic += (1.0 + 0.6180339887 * static_cast<double>(a)) * gens.back();
  }
  std::vector<int> space_of(functionals.size(), -1);
  for (std::size_t s = 0; s < coarse.spaces.size(); ++s)
    for (int m : coarse.spaces[s].halfspace.members) space_of[static_cast<std::size_t>(m)] = static_cast<int>(s);

  Eigen::EigenSolver<Eigen::MatrixXd> es(generic);
  std::vector<ProbeDirection> out;
  std::vector<int> used(functionals.size(), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::complex<double> lambda = es.eigenvalues()(i);
    if (lambda.imag() < -1e-12) continue;
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    std::vector<double> chi;
    for (const auto& g : gens) {
      std::complex<double> mu = v.dot(g.cast<std::complex<double>>() * v) / v.squaredNorm();
      chi.push_back(std::log(std::abs(mu)));
    }
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < functionals.size(); ++f) {
      double d = 0;
      for (std::size_t a = 0; a < chi.size(); ++a) d = std::max(d, std::abs(chi[a] - functionals[f].coeffs[a].mid()));
      if (d < best_d) {
        best_d = d;
        best = f;
      }
    }
    if (space_of[best] < 0) continue;
    std::vector<Eigen::VectorXd> parts{v.real()};
    if (lambda.imag() > 1e-12) parts.push_back(v.imag());
    for (std::size_t k = 0; k < parts.size(); ++k) {
      Eigen::VectorXd w = parts[k].normalized();
      // Fix the sign so the largest coordinate is positive.
      Eigen::Index arg = 0;
      w.cwiseAbs().maxCoeff(&arg);
      if (w(arg) < 0) w = -w;
      ProbeDirection dir;
      dir.label = functionals[best].label + (used[best]++ ? "." + std::to_string(used[best]) : "");
      dir.space = static_cast<std::size_t>(space_of[best]);
      dir.vector.assign(w.data(), w.data() + n);
      out.push_back(dir);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ProbeDirection& x, const ProbeDirection& y) {
    return x.space < y.space;
  });
  return out;
}

namespace {

constexpr int kFracBits = 48;
constexpr std::uint64_t kMask = (std::uint64_t{1} << kFracBits) - 1;
constexpr double kScale = static_cast<double>(std::uint64_t{1} << kFracBits);

using Fixed = std::array<std::uint64_t, kMaxDim>;

Fixed apply_fixed(const std::vector<std::int64_t>& m, const Fixed& x, std::size_t n) {
  Fixed out{};
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < n; ++j) s += static_cast<std::uint64_t>(m[i * n + j]) * x[j];
    out[i] = s & kMask;
  }
  return out;
}

// Pointwise evaluation of u through an exact dyadic orbit segment: interior
// values are pinned by the grid field only at the segment ends.
class PointEvaluator {
 public:
  PointEvaluator(const ConjugacyField& h, const ToralPerturbation& pert)
      : h_(h), p_(pert.map(h.solving_generator)), n_(h.dim) {
    const IntMatrix& a = pert.base().generators[h.solving_generator];
    const Splitting split = hyperbolic_splitting(a);
    ps_ = split.stable_projection;
    pu_ = split.unstable_projection;
    a_ = mat_mul(to_dense(a), ps_, n_);
    a_inv_ = mat_mul(to_dense(unimodular_inverse(a)), pu_, n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) {
      fwd_.push_back(a(i / n_, i % n_).get_si());
      bwd_.push_back(unimodular_inverse(a)(i / n_, i % n_).get_si());
    }
    // Boundary error decays like rate^K; allow a margin for non-normal splittings.
    half_ = static_cast<std::size_t>(std::ceil(std::log(1e-17) / std::log(split.contraction_rate))) + 8;
  }

  std::size_t half_length() const { return half_; }

  void evaluate(const Fixed& x0, double* out) const {
    const std::size_t len = 2 * half_ + 1, n = n_;
    std::vector<Fixed> orbit(len);
    orbit[half_] = x0;
    for (std::size_t j = half_; j + 1 < len; ++j) orbit[j + 1] = apply_fixed(fwd_, orbit[j], n);
    for (std::size_t j = half_; j > 0; --j) orbit[j - 1] = apply_fixed(bwd_, orbit[j], n);
    std::vector<double> x(len * n), u(len * n), q(len * n), s(len * n), w(len * n);
    for (std::size_t j = 0; j < len; ++j) {
      for (std::size_t d = 0; d < n; ++d) x[j * n + d] = static_cast<double>(orbit[j][d]) / kScale;
      h_.interpolate(&x[j * n], &u[j * n]);
    }
    if (p_.zero) {
      std::fill(out, out + n, 0.0);
      return;
    }
    std::array<double, kMaxDim> t{}, y{}, pq{};
    for (int sweep = 0; sweep < 200; ++sweep) {
      for (std::size_t j = 0; j + 1 < len; ++j) {
        for (std::size_t d = 0; d < n; ++d) y[d] = x[j * n + d] + u[j * n + d];
        p_.evaluate(y.data(), &q[j * n]);
      }
      mat_vec(ps_, &u[0], &s[0], n);
      for (std::size_t j = 0; j + 1 < len; ++j) {
        mat_vec(a_, &s[j * n], t.data(), n);
        mat_vec(ps_, &q[j * n], pq.data(), n);
        for (std::size_t d = 0; d < n; ++d) s[(j + 1) * n + d] = t[d] + pq[d];
      }
      mat_vec(pu_, &u[(len - 1) * n], &w[(len - 1) * n], n);
      for (std::size_t j = len - 1; j > 0; --j) {
        mat_vec(pu_, &q[(j - 1) * n], pq.data(), n);
        for (std::size_t d = 0; d < n; ++d) y[d] = w[j * n + d] - pq[d];
        mat_vec(a_inv_, y.data(), &w[(j - 1) * n], n);
      }
      double change = 0;
      for (std::size_t i = 0; i < len * n; ++i) {
        double v = s[i] + w[i];
        if (i / n == half_) change = std::max(change, std::abs(v - u[i]));
        u[i] = v;
      }
      if (sweep > 0 && change < 1e-16) break;
    }
    std::copy(&u[half_ * n], &u[half_ * n] + n, out);
  }

 private:
  const ConjugacyField& h_;
  const PerturbationMap& p_;
  std::size_t n_;
  Dense a_, a_inv_, ps_, pu_;
  std::vector<std::int64_t> fwd_, bwd_;
  std::size_t half_ = 0;
};

Fixed shifted(const Fixed& x, const std::vector<double>& v, double delta, double sign, std::size_t n) {
  Fixed out{};
  for (std::size_t d = 0; d < n; ++d) {
    auto off = static_cast<std::int64_t>(std::llround(sign * delta * v[d] * kScale));
    out[d] = (x[d] + static_cast<std::uint64_t>(off)) & kMask;
  }
  return out;
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

std::vector<double> evaluate_displacement(const ConjugacyField& h, const ToralPerturbation& pert,
                                          const std::vector<double>& x) {
  if (x.size() != h.dim || h.dim != pert.dim()) throw Error(ErrorCode::ShapeMismatch, "point dimension mismatch");
  Fixed f{};
  for (std::size_t d = 0; d < h.dim; ++d)
    f[d] = static_cast<std::uint64_t>(std::llround((x[d] - std::floor(x[d])) * kScale)) & kMask;
  std::vector<double> out(h.dim);
  PointEvaluator(h, pert).evaluate(f, out.data());
  return out;
}

RegularityReport regularity_probe(const ConjugacyField& h, const ToralPerturbation& pert,
                                  const std::vector<ProbeDirection>& directions, const ProbeOptions& options) {
  if (options.finest <= options.coarsest || options.coarsest < 1 || options.finest > 40)
    throw Error(ErrorCode::PreconditionFailed, "invalid probe scale range");
  const std::size_t n = h.dim;
  RegularityReport report;
  const bool trivial = h.sup_norm() == 0 && pert.map(h.solving_generator).zero;
  PointEvaluator eval(h, pert);
  report.orbit_half_length = eval.half_length();

  std::mt19937_64 rng(options.seed);
  std::vector<Fixed> samples(options.samples);
  for (auto& s : samples)
    for (std::size_t d = 0; d < n; ++d) s[d] = rng() & kMask;
  std::vector<std::vector<double>> base(samples.size(), std::vector<double>(n));
  if (!trivial)
    for (std::size_t i = 0; i < samples.size(); ++i) eval.evaluate(samples[i], base[i].data());

  constexpr double kFirstFloor = 1e-12, kSecondFloor = 1e-11;
  for (const auto& dir : directions) {
    DirectionRegularity r;
    r.direction = dir;
    std::vector<double> lx1, ly1, lx2, ly2;
    for (int level = options.coarsest; level <= options.finest; ++level) {
      const double delta = std::ldexp(1.0, -level);
      double d1 = 0, d2 = 0;
      if (!trivial) {
        std::vector<double> plus(n), minus(n);
        for (std::size_t i = 0; i < samples.size(); ++i) {
          eval.evaluate(shifted(samples[i], dir.vector, delta, 1, n), plus.data());
          eval.evaluate(shifted(samples[i], dir.vector, delta, -1, n), minus.data());
          double n1 = 0, n2 = 0;
          for (std::size_t d = 0; d < n; ++d) {
            n1 += (plus[d] - base[i][d]) * (plus[d] - base[i][d]);
            double s2 = plus[d] - 2 * base[i][d] + minus[d];
            n2 += s2 * s2;
          }
          d1 = std::max(d1, std::sqrt(n1));
          d2 = std::max(d2, std::sqrt(n2));
        }
      }
      r.scales.push_back(delta);
      r.first_differences.push_back(d1);
      r.second_differences.push_back(d2);
      if (d1 > kFirstFloor) {
        lx1.push_back(std::log2(delta));
        ly1.push_back(std::log2(d1));
      }
      if (d2 > kSecondFloor) {
        lx2.push_back(std::log2(delta));
        ly2.push_back(std::log2(d2));
      }
    }
    if (trivial) {
      r.holder_exponent = 1;
      r.second_exponent = 2;
      r.classification = "smooth";
    } else {
      if (lx1.size() < 3)
        throw Error(ErrorCode::ResolutionInsufficient,
                    "first differences along " + dir.label + " fall below the evaluation floor");
      r.holder_exponent = slope(lx1, ly1);
      r.second_exponent = lx2.size() >= 3 ? slope(lx2, ly2) : 2.0;
      if (r.holder_exponent < 0.95)
        r.classification = "holder";
      else if (r.second_exponent >= 1.9)
        r.classification = "C2";
      else
        r.classification = "C1";
    }
    report.directions.push_back(std::move(r));
  }
  return report;
}

// ---- export ----

void write_grid_dump(const ConjugacyField& h, std::ostream& out) {
  static_assert(std::numeric_limits<double>::is_iec559);
  auto put32 = [&](std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  out.write("ANOSOVCF", 8);
  put32(static_cast<std::uint32_t>(h.dim));
  put32(static_cast<std::uint32_t>(h.resolution));
  for (double v : h.u) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  }
}

ConjugacyField read_grid_dump(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, "ANOSOVCF", 8) != 0)
    throw Error(ErrorCode::ParseError, "not a conjugacy field dump");
  auto get32 = [&]() {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw Error(ErrorCode::ParseError, "truncated dump header");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  };
  ConjugacyField h;
  h.dim = get32();
  h.resolution = get32();
  if (h.dim == 0 || h.dim > kMaxDim || h.resolution == 0) throw Error(ErrorCode::ParseError, "bad dump header");
  h.u.resize(h.points() * h.dim);
  for (double& v : h.u) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) throw Error(ErrorCode::ParseError, "truncated dump body");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    std::memcpy(&v, &bits, 8);
  }
  return h;
}

namespace {

// Forward DFT of one component, normalized by the point count.
std::vector<std::complex<double>> component_dft(const ConjugacyField& h, std::size_t c) {
  const std::size_t count = h.points();
  std::vector<int> dims(h.dim, static_cast<int>(h.resolution));
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count));
  static std::mutex planner;
  fftw_plan plan;
  {
    std::lock_guard guard(planner);
    plan = fftw_plan_dft(static_cast<int>(h.dim), dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < count; ++i) {
    buf[i][0] = h.u[i * h.dim + c];
    buf[i][1] = 0;
  }
  fftw_execute(plan);
  std::vector<std::complex<double>> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = {buf[i][0] / static_cast<double>(count), buf[i][1] / static_cast<double>(count)};
  {
    std::lock_guard guard(planner);
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return out;
}

std::vector<long> signed_frequency(std::size_t idx, const ConjugacyField& h) {
  std::vector<long> k(h.dim);
  const auto res = static_cast<long>(h.resolution);
  for (std::size_t d = h.dim; d-- > 0;) {
    long v = static_cast<long>(idx % h.resolution);
    idx /= h.resolution;
    k[d] = v > res / 2 ? v - res : v;
  }
  return k;
}

double fourier_tail(const ConjugacyField& h) {
  double total = 0, tail = 0;
  const long quarter = static_cast<long>(h.resolution / 4);
  for (std::size_t c = 0; c < h.dim; ++c) {
    auto coeffs = component_dft(h, c);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      double e = std::norm(coeffs[i]);
      total += e;
      auto k = signed_frequency(i, h);
      if (std::any_of(k.begin(), k.end(), [&](long v) { return std::abs(v) > quarter; })) tail += e;
    }
  }
  return total == 0 ? 0 : tail / total;
}

}  // namespace

std::vector<FourierCoefficient> fourier_table(const ConjugacyField& h, double cutoff) {
  std::vector<FourierCoefficient> out;
  for (std::size_t c = 0; c < h.dim; ++c) {
    auto coeffs = component_dft(h, c);
    std::vector<FourierCoefficient> part;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (std::abs(coeffs[i]) > cutoff) part.push_back({c, signed_frequency(i, h), coeffs[i]});
    std::sort(part.begin(), part.end(),
              [](const FourierCoefficient& a, const FourierCoefficient& b) { return a.frequency < b.frequency; });
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace anosov::conjugacy
