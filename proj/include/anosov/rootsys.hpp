#pragma once

#include <map>
#include <string>
#include <vector>

#include "anosov/chambers.hpp"
#include "anosov/functional.hpp"
#include "anosov/rational.hpp"

namespace anosov::rootsys {

enum class RootType { A, B, C, D, BC };

/// Accepts "A", "BC", ... and the "A_2"/"BC2" forms (rank taken from the label).
RootType parse_type(const std::string& text);
std::string type_name(RootType t);

struct Root {
  /// Coefficients as a functional on the split Cartan R^rank. For A_n the
  /// Cartan is the trace-zero plane parametrized by its first n coordinates.
  std::vector<Rational> coords;
  std::string label;
  /// Multiplicity class: "ei", "2ei", "ei+-ej" or "ei-ej".
  std::string key;
  int multiplicity = 1;
};

struct RestrictedRootSystem {
  RootType type = RootType::A;
  int rank = 0;
  std::vector<Root> roots;

  std::string label() const { return type_name(type) + "_" + std::to_string(rank); }
};

/// Positive roots in a fixed order, then their negatives in the same order.
/// Multiplicities default to 1; unknown keys or invalid ranks throw InvalidType.
RestrictedRootSystem build_root_system(RootType type, int rank, const std::map<std::string, int>& multiplicities = {});

/// Standard root count of the type.
std::size_t expected_root_count(RootType type, int rank);

struct WeylFlowData {
  std::vector<LyapunovFunctional> functionals;
  chambers::CoarseDecomposition coarse;
  /// Every coarse coefficient lies in {1, 2}.
  bool coefficients_ok = true;
  std::vector<std::string> warnings;
};

WeylFlowData weyl_flow_lyapunov_data(const RestrictedRootSystem& system);

struct SmoothnessReport {
  std::string smoothness;  // C4 or C6
  std::string reason;
  std::vector<std::pair<std::string, std::string>> doubled_pairs;
  std::string regime;
};

SmoothnessReport smoothness_class_report(const RestrictedRootSystem& system, const WeylFlowData& data);

}  // namespace anosov::rootsys
