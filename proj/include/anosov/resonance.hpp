#pragma once

#include <string>
#include <vector>

#include "anosov/rational.hpp"

namespace anosov::resonance {

/// Disjoint intervals [lambda_i, mu_i], ordered so that
/// lambda_1 <= mu_1 < lambda_2 <= ... <= mu_l, with block dimensions m_i.
struct SpectrumBands {
  std::vector<Rational> lambda;
  std::vector<Rational> mu;
  std::vector<int> block_dims;

  std::size_t count() const { return lambda.size(); }
  int total_dim() const;
  /// Block index of each coordinate.
  std::vector<int> coordinate_blocks() const;
  friend bool operator==(const SpectrumBands&, const SpectrumBands&) = default;
};

/// Throws InvalidBands on empty, inverted, overlapping or unordered intervals
/// or nonpositive block dimensions.
SpectrumBands make_bands(std::vector<Rational> lambda, std::vector<Rational> mu, std::vector<int> block_dims);

struct SubResonanceRelation {
  int target_block = 0;  // 0-based
  std::vector<int> exponents;
  bool trivial = false;
  int degree() const;
  friend bool operator==(const SubResonanceRelation&, const SubResonanceRelation&) = default;
};

struct SRGroupDescriptor {
  SpectrumBands bands;
  int degree_bound = 0;
  std::vector<SubResonanceRelation> relations;
  Integer monomial_count;
};

bool is_narrow_band(const SpectrumBands& bands);

/// lambda_i <= sum_j s_j mu_j at the stored endpoints.
bool satisfies_relation(const SpectrumBands& bands, int block, const std::vector<int>& s);

/// floor(lambda_1 / mu_l); requires mu_l < 0.
int degree_bound(const SpectrumBands& bands);

/// All (i, s) with 1 <= |s| <= degree_bound satisfying the relation, ordered
/// by block, then lexicographically by s.
std::vector<SubResonanceRelation> enumerate_subresonance(const SpectrumBands& bands);

SRGroupDescriptor sr_group_descriptor(const SpectrumBands& bands);

/// Number of monomials of degree d in m variables.
Integer monomials(int m, int d);

/// Every multi-index s with |s| = d over l blocks, lexicographic.
std::vector<std::vector<int>> multi_indices(std::size_t l, int d);

/// Smoothness-class metadata for a spectrum: "linear" when only trivial
/// relations exist (a C^2 linear form for a C^4 extension), "polynomial"
/// otherwise.
std::string normal_form_regime(const SRGroupDescriptor& d);

}  // namespace anosov::resonance
