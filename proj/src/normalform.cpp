#include "anosov/normalform.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "anosov/error.hpp"

namespace anosov::normalform {

using resonance::satisfies_relation;

std::vector<Term> terms(const BlockedPolynomialMap& f) {
  std::vector<Term> out;
  for (int i = 0; i < f.dim(); ++i)
    for (const auto& [mono, c] : f.components()[static_cast<std::size_t>(i)])
      out.push_back({i, f.coordinate_blocks()[static_cast<std::size_t>(i)], mono, f.multidegree(mono), c});
  return out;
}

SubresonanceCheck is_subresonance_type(const BlockedPolynomialMap& f) {
  SubresonanceCheck r;
  for (auto& t : terms(f))
    if (!satisfies_relation(f.bands(), t.block, t.multidegree)) r.violations.push_back(t);
  r.ok = r.violations.empty();
  return r;
}

namespace {

std::vector<std::vector<double>> block_singular_logs(const RatMatrix& m, const SpectrumBands& bands, int period) {
  std::vector<std::vector<double>> out;
  std::size_t offset = 0;
  for (int dim : bands.block_dims) {
    const auto d = static_cast<std::size_t>(dim);
    Eigen::MatrixXd b(dim, dim);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(offset + i, offset + j));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
    std::vector<double> logs;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      logs.push_back(std::log(svd.singularValues()(i)) / period);
    out.push_back(logs);
    offset += d;
  }
  return out;
}

void check_preconditions(const std::vector<BlockedPolynomialMap>& maps, const NormalizeOptions& options) {
  const auto& bands = maps.front().bands();
  if (!(bands.mu.back() < 0)) throw Error(ErrorCode::PreconditionFailed, "not a contraction: mu_l >= 0");
  if (!resonance::is_narrow_band(bands)) throw Error(ErrorCode::NotNarrowBand, "mu_i + mu_l < lambda_i fails");
  const auto blocks = maps.front().coordinate_blocks();
  RatMatrix cycle = RatMatrix::identity(blocks.size());
  for (const auto& f : maps) {
    if (!(f.bands() == bands)) throw Error(ErrorCode::BandMismatch, "maps along the orbit use different bands");
    RatMatrix l = f.linear_part();
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (std::size_t j = 0; j < blocks.size(); ++j)
        if (blocks[i] != blocks[j] && l(i, j) != 0)
          throw Error(ErrorCode::PreconditionFailed, "linear part is not block diagonal");
    if (determinant(l) == 0) throw Error(ErrorCode::SingularLinearPart, "linear part is singular");
    cycle = l * cycle;
  }
  auto logs = block_singular_logs(cycle, bands, static_cast<int>(maps.size()));
  for (std::size_t i = 0; i < logs.size(); ++i)
    for (double v : logs[i])
      if (v < to_double(bands.lambda[i]) - options.band_tolerance || v > to_double(bands.mu[i]) + options.band_tolerance)
        throw Error(ErrorCode::PreconditionFailed,
                    "linear block " + std::to_string(i + 1) + " has rate " + std::to_string(v) + " outside its band");
}

// Solves one homogeneous degree for all maps of the cycle.
void solve_degree(int d, const std::vector<BlockedPolynomialMap>& maps, std::vector<BlockedPolynomialMap>& h,
                  std::vector<BlockedPolynomialMap>& n) {
  const std::size_t p = maps.size();
  const auto& bands = maps.front().bands();
  const int degree = maps.front().degree();
  const int dim = maps.front().dim();
  const auto& blocks = maps.front().coordinate_blocks();

  std::vector<BlockedPolynomialMap> e;
  std::vector<BlockedPolynomialMap> lin;
  for (std::size_t t = 0; t < p; ++t) {
    e.push_back((compose(h[(t + 1) % p], maps[t]) - compose(n[t], h[t])).homogeneous(d));
    lin.push_back(BlockedPolynomialMap::linear(bands, degree, maps[t].linear_part()));
  }

  const auto all = monomials_of_degree(dim, d);
  for (std::size_t i = 0; i < bands.count(); ++i)
    for (const auto& s : resonance::multi_indices(bands.count(), d)) {
      std::vector<std::pair<int, Monomial>> basis;
      for (int r = 0; r < dim; ++r) {
        if (blocks[static_cast<std::size_t>(r)] != static_cast<int>(i)) continue;
        for (const auto& mono : all)
          if (maps.front().multidegree(mono) == s) basis.emplace_back(r, mono);
      }
      if (basis.empty()) continue;

      if (satisfies_relation(bands, static_cast<int>(i), s)) {
        for (std::size_t t = 0; t < p; ++t)
          for (const auto& [r, mono] : basis) n[t].add(r, mono, e[t].coefficient(r, mono));
        continue;
      }

      const std::size_t nb = basis.size();
      std::map<std::pair<int, Monomial>, std::size_t> index;
      for (std::size_t b = 0; b < nb; ++b) index[basis[b]] = b;
      RatMatrix a(p * nb, p * nb);
      std::vector<Rational> rhs(p * nb);
      bool any = false;
      for (std::size_t t = 0; t < p; ++t) {
        RatMatrix l = maps[t].linear_part();
        for (std::size_t b = 0; b < nb; ++b) {
          const auto& [r, mono] = basis[b];
          rhs[t * nb + b] = e[t].coefficient(r, mono);
          any = any || rhs[t * nb + b] != 0;
          // L_t applied to the unknown x^mono e_r of h_t.
          for (int r2 = 0; r2 < dim; ++r2) {
            const Rational& v = l(static_cast<std::size_t>(r2), static_cast<std::size_t>(r));
            if (v == 0) continue;
            a(t * nb + index.at({r2, mono}), t * nb + b) += v;
          }
          // The unknown of h_{t+1} composed with L_t enters equation t.
          BlockedPolynomialMap single(bands, degree);
          single.add(r, mono, Rational(1));
          BlockedPolynomialMap sub = compose(single, lin[t]);
          const std::size_t next = (t + 1) % p;
          for (const auto& [m2, c] : sub.components()[static_cast<std::size_t>(r)])
            a(t * nb + index.at({r, m2}), next * nb + b) -= c;
        }
      }
      if (!any) continue;
      auto sol = solve(a, rhs);
      if (!sol)
        throw Error(ErrorCode::ResonantDenominator,
                    "homological operator singular on block " + std::to_string(i + 1) + ", degree " + std::to_string(d));
      for (std::size_t t = 0; t < p; ++t)
        for (std::size_t b = 0; b < nb; ++b) h[t].add(basis[b].first, basis[b].second, (*sol)[t * nb + b]);
    }
}

}  // namespace

std::vector<NormalFormResult> normalize_periodic_orbit(const std::vector<BlockedPolynomialMap>& input, int degree,
                                                       const NormalizeOptions& options) {
  if (input.empty()) throw Error(ErrorCode::PreconditionFailed, "empty orbit");
  const auto& bands = input.front().bands();
  check_preconditions(input, options);
  const int bound = resonance::degree_bound(bands);
  const int d_max = degree > 0 ? degree : input.front().degree();
  std::vector<BlockedPolynomialMap> maps;
  for (const auto& f : input) maps.push_back(f.with_degree(d_max));

  const std::size_t p = maps.size();
  std::vector<BlockedPolynomialMap> h, n;
  for (std::size_t t = 0; t < p; ++t) {
    h.push_back(BlockedPolynomialMap::identity(bands, d_max));
    n.push_back(BlockedPolynomialMap::linear(bands, d_max, maps[t].linear_part()));
  }
  for (int d = 2; d <= d_max; ++d) solve_degree(d, maps, h, n);

  std::vector<NormalFormResult> out;
  for (std::size_t t = 0; t < p; ++t) {
    Rational residual = (compose(h[(t + 1) % p], maps[t]) - compose(n[t], h[t])).max_abs_coefficient();
    for (const auto& term : terms(n[t]))
      if (total_degree(term.monomial) > bound)
        throw Error(ErrorCode::ResonantDenominator, "normal form kept a term above the degree bound");
    out.push_back({h[t], n[t], residual});
  }
  return out;
}

NormalFormResult normalize_contraction(const BlockedPolynomialMap& f, int degree, const NormalizeOptions& options) {
  return normalize_periodic_orbit({f}, degree, options).front();
}

Support sr_generated_support(const resonance::SpectrumBands& bands,
                             const std::vector<resonance::SubResonanceRelation>& relations, int degree) {
  Support support;
  for (const auto& r : relations)
    if (r.degree() <= degree) support.emplace(r.target_block, r.exponents);
  const std::size_t l = bands.count();
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<std::vector<int>>> per_block(l);
    for (const auto& [b, s] : support) per_block[static_cast<std::size_t>(b)].push_back(s);
    Support next = support;
    for (const auto& [i, s] : support) {
      // Substitute each variable of block j by any monomial allowed in block j.
      std::set<std::vector<int>> reach{std::vector<int>(l, 0)};
      for (std::size_t j = 0; j < l; ++j)
        for (int rep = 0; rep < s[j]; ++rep) {
          std::set<std::vector<int>> grown;
          for (const auto& a : reach)
            for (const auto& b : per_block[j]) {
              std::vector<int> c = a;
              int total = 0;
              for (std::size_t q = 0; q < l; ++q) total += (c[q] += b[q]);
              if (total <= degree) grown.insert(c);
            }
          reach = std::move(grown);
        }
      for (const auto& m : reach)
        if (next.emplace(i, m).second) changed = true;
    }
    support = std::move(next);
  }
  return support;
}

CentralizerVerdict verify_centralizer(const BlockedPolynomialMap& g, const BlockedPolynomialMap& n) {
  return verify_centralizer(g, n, resonance::enumerate_subresonance(n.bands()));
}

CentralizerVerdict verify_centralizer(const BlockedPolynomialMap& g, const BlockedPolynomialMap& n,
                                      const std::vector<resonance::SubResonanceRelation>& relations) {
  CentralizerVerdict v;
  v.commutation_residual = (compose(g, n) - compose(n, g)).max_abs_coefficient();
  if (v.commutation_residual != 0)
    throw Error(ErrorCode::NotCommuting, "commutation residual " + to_string(v.commutation_residual));
  auto support = sr_generated_support(g.bands(), relations, g.degree());
  for (auto& t : terms(g))
    if (!support.count({t.block, t.multidegree})) v.violations.push_back(t);
  v.member = v.violations.empty();
  return v;
}

}  // namespace anosov::normalform
