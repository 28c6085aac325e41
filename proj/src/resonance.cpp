#include "anosov/resonance.hpp"

#include <algorithm>
#include <functional>

#include "anosov/error.hpp"

namespace anosov::resonance {

int SpectrumBands::total_dim() const {
  int d = 0;
  for (int m : block_dims) d += m;
  return d;
}

std::vector<int> SpectrumBands::coordinate_blocks() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < block_dims.size(); ++i)
    for (int r = 0; r < block_dims[i]; ++r) out.push_back(static_cast<int>(i));
  return out;
}

SpectrumBands make_bands(std::vector<Rational> lambda, std::vector<Rational> mu, std::vector<int> block_dims) {
  if (lambda.empty()) throw Error(ErrorCode::InvalidBands, "no intervals");
  if (lambda.size() != mu.size() || lambda.size() != block_dims.size())
    throw Error(ErrorCode::InvalidBands, "interval and block-dimension counts differ");
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > mu[i]) throw Error(ErrorCode::InvalidBands, "interval " + std::to_string(i + 1) + " is inverted");
    if (block_dims[i] <= 0) throw Error(ErrorCode::InvalidBands, "block dimension must be positive");
    if (i > 0 && !(mu[i - 1] < lambda[i]))
      throw Error(ErrorCode::InvalidBands,
                  "intervals " + std::to_string(i) + " and " + std::to_string(i + 1) + " overlap or are out of order");
  }
  return {std::move(lambda), std::move(mu), std::move(block_dims)};
}

int SubResonanceRelation::degree() const {
  int d = 0;
  for (int s : exponents) d += s;
  return d;
}

bool is_narrow_band(const SpectrumBands& b) {
  const Rational& mul = b.mu.back();
  for (std::size_t i = 0; i < b.count(); ++i)
    if (!(b.mu[i] + mul < b.lambda[i])) return false;
  return true;
}

bool satisfies_relation(const SpectrumBands& b, int block, const std::vector<int>& s) {
  Rational sum = 0;
  for (std::size_t j = 0; j < s.size(); ++j) sum += Rational(s[j]) * b.mu[j];
  return b.lambda[static_cast<std::size_t>(block)] <= sum;
}

int degree_bound(const SpectrumBands& b) {
  if (!(b.mu.back() < 0)) throw Error(ErrorCode::InvalidBands, "not a contraction: mu_l >= 0");
  Rational r = b.lambda.front() / b.mu.back();
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return static_cast<int>(q.get_si());
}

std::vector<std::vector<int>> multi_indices(std::size_t l, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> s(l, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == l) {
      s[pos] = left;
      out.push_back(s);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      s[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  if (l == 0) return out;
  rec(0, d);
  return out;
}

std::vector<SubResonanceRelation> enumerate_subresonance(const SpectrumBands& b) {
  const int bound = degree_bound(b);
  std::vector<SubResonanceRelation> out;
  for (std::size_t i = 0; i < b.count(); ++i) {
    std::vector<SubResonanceRelation> block;
    for (int d = 1; d <= bound; ++d)
      for (auto& s : multi_indices(b.count(), d))
        if (satisfies_relation(b, static_cast<int>(i), s)) block.push_back({static_cast<int>(i), s, d == 1});
    std::sort(block.begin(), block.end(),
              [](const SubResonanceRelation& x, const SubResonanceRelation& y) { return x.exponents < y.exponents; });
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

Integer monomials(int m, int d) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(m + d - 1), static_cast<unsigned long>(d));
  return r;
}

SRGroupDescriptor sr_group_descriptor(const SpectrumBands& b) {
  if (!is_narrow_band(b)) throw Error(ErrorCode::NotNarrowBand, "mu_i + mu_l < lambda_i fails");
  SRGroupDescriptor d;
  d.bands = b;
  d.degree_bound = degree_bound(b);
  d.relations = enumerate_subresonance(b);
  d.monomial_count = 0;
  for (const auto& r : d.relations) {
    Integer c = b.block_dims[static_cast<std::size_t>(r.target_block)];
    for (std::size_t j = 0; j < r.exponents.size(); ++j) c *= monomials(b.block_dims[j], r.exponents[j]);
    d.monomial_count += c;
  }
  return d;
}

std::string normal_form_regime(const SRGroupDescriptor& d) {
  bool nontrivial = std::any_of(d.relations.begin(), d.relations.end(), [](const auto& r) { return !r.trivial; });
  return nontrivial ? "polynomial" : "linear";
}

}  // namespace anosov::resonance
