#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "anosov/polymap.hpp"
#include "anosov/resonance.hpp"

namespace anosov::normalform {

struct Term {
  int coordinate = 0;
  int block = 0;
  Monomial monomial;
  std::vector<int> multidegree;
  Rational value;
};

std::vector<Term> terms(const BlockedPolynomialMap& f);

struct SubresonanceCheck {
  bool ok = true;
  std::vector<Term> violations;
};

SubresonanceCheck is_subresonance_type(const BlockedPolynomialMap& f);

struct NormalFormResult {
  BlockedPolynomialMap change;
  BlockedPolynomialMap normal;
  Rational residual;
};

struct NormalizeOptions {
  /// Slack allowed between the log singular values of a linear block and
  /// its band.
  double band_tolerance = 1e-9;
};

/// h o F = N o h through degree D with h tangent to the identity and N of
/// sub-resonance type. D <= 0 keeps the truncation degree of the input.
NormalFormResult normalize_contraction(const BlockedPolynomialMap& f, int degree = 0, const NormalizeOptions& options = {});

/// Periodic fibers: h_{t+1} o F_t = N_t o h_t with h_p = h_0.
std::vector<NormalFormResult> normalize_periodic_orbit(const std::vector<BlockedPolynomialMap>& maps, int degree = 0,
                                                       const NormalizeOptions& options = {});

/// (block, multidegree) pairs reachable by composing maps supported on the
/// relations, capped at total degree `degree`.
using Support = std::set<std::pair<int, std::vector<int>>>;
Support sr_generated_support(const resonance::SpectrumBands& bands,
                             const std::vector<resonance::SubResonanceRelation>& relations, int degree);

struct CentralizerVerdict {
  bool member = true;
  Rational commutation_residual;
  std::vector<Term> violations;
};

/// Checks G o N = N o G exactly (NotCommuting otherwise) and that G is
/// supported on sub-resonance generated monomials.
CentralizerVerdict verify_centralizer(const BlockedPolynomialMap& g, const BlockedPolynomialMap& n,
                                      const std::vector<resonance::SubResonanceRelation>& relations);
CentralizerVerdict verify_centralizer(const BlockedPolynomialMap& g, const BlockedPolynomialMap& n);

}  // namespace anosov::normalform
