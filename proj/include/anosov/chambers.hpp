#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anosov/functional.hpp"
#include "anosov/interval.hpp"
#include "anosov/rational.hpp"

namespace anosov::chambers {

struct Coefficient {
  Interval value;
  std::optional<Rational> exact;
};

struct LyapunovHalfspace {
  /// Bottom functional scaled so its first nonzero coordinate is +-1.
  std::vector<Interval> normal;
  std::optional<std::vector<Rational>> exact_normal;
  std::vector<int> members;
};

struct CoarseLyapunovSpace {
  LyapunovHalfspace halfspace;
  int bottom = -1;
  /// Aligned with halfspace.members, ascending, first entry exactly 1.
  std::vector<Coefficient> coefficients;
  int dimension = 0;
};

struct CoarseDecomposition {
  std::size_t rank = 0;
  std::vector<CoarseLyapunovSpace> spaces;
  std::vector<int> neutral;
  int neutral_dimension = 0;
  int total_dimension() const;
};

/// Signed proportionality a = ratio * b, or nullopt when not proportional.
/// Throws UndecidedProportionality when neither enclosures nor the
/// certifier can settle the question.
struct Ratio {
  Interval value;
  std::optional<Rational> exact;
};
std::optional<Ratio> proportionality(const std::vector<LyapunovFunctional>& fs, std::size_t i, std::size_t j,
                                     const RelationCertifier* certifier);

CoarseDecomposition coarse_decomposition(const std::vector<LyapunovFunctional>& functionals,
                                         const RelationCertifier* certifier = nullptr);

struct Wall {
  /// First nonzero coordinate is exactly +1.
  std::vector<Interval> normal;
  std::optional<std::vector<Rational>> exact_normal;
  std::vector<Rational> lp_normal;
  /// Coarse spaces on this wall and the sign of their normal relative to it.
  std::vector<int> spaces;
  std::vector<int> orientation;
};

struct Chamber {
  std::vector<int> signs;
  std::vector<Rational> witness;
  std::vector<long> regular_element;
};

struct ChamberArrangement {
  std::size_t rank = 0;
  std::vector<Wall> walls;
  std::vector<Chamber> chambers;
  /// For each coarse space: index of its wall.
  std::vector<int> space_wall;
};

ChamberArrangement weyl_chambers(const std::vector<LyapunovFunctional>& functionals, const CoarseDecomposition& coarse,
                                 const RelationCertifier* certifier = nullptr);
ChamberArrangement weyl_chambers(const std::vector<LyapunovFunctional>& functionals,
                                 const RelationCertifier* certifier = nullptr);

/// Integer element strictly inside the chamber; every nonzero functional is
/// nonzero on it (certified).
std::vector<long> find_regular_element(const ChamberArrangement& arrangement, std::size_t chamber,
                                       const std::vector<LyapunovFunctional>& functionals,
                                       const CoarseDecomposition& coarse);

struct WallPoint {
  std::optional<std::vector<Integer>> lattice;
  std::vector<Interval> point;
};

struct Theorem1Entry {
  int space = -1;
  WallPoint wall_point;
  std::vector<std::vector<long>> elements;
  std::vector<int> intersection;
  bool matches = false;
};

struct Theorem1Report {
  std::vector<Theorem1Entry> entries;
  bool combinatorics_pass = false;
  bool ergodicity_verified = false;
  std::string ergodicity_note;
};

Theorem1Report check_theorem1_combinatorics(const std::vector<LyapunovFunctional>& functionals,
                                            const CoarseDecomposition& coarse,
                                            const ChamberArrangement& arrangement);

}  // namespace anosov::chambers
