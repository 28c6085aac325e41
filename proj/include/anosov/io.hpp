#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "anosov/conjugacy.hpp"
#include "anosov/polymap.hpp"
#include "anosov/resonance.hpp"
#include "anosov/rootsys.hpp"
#include "anosov/spectra.hpp"

namespace anosov::io {

using Json = nlohmann::json;

/// Parses JSON keeping every non-integer number as its decimal text, so that
/// rationals read from it are exact. Throws ParseError.
Json parse_json(std::string_view text);

/// FNV-1a 64-bit hash, lowercase hex.
std::string input_hash(std::string_view bytes);

Rational read_rational(const Json& v);
double read_double(const Json& v);
long read_long(const Json& v);

/// Generators as flat row-major lists or as lists of rows. Returns the raw
/// matrices; validation is left to spectra::validate_action.
struct RawAction {
  int dim = 0;
  std::vector<IntMatrix> generators;
  std::vector<std::string> labels;
};
RawAction parse_action(const Json& j);

/// InvalidBands is reported as ParseError.
resonance::SpectrumBands parse_bands(const Json& j);

normalform::BlockedPolynomialMap parse_polynomial_map(const Json& j);

struct PerturbationInput {
  spectra::ActionSpec action;
  std::vector<conjugacy::TrigField> fields;
  std::optional<conjugacy::TrigField> psi;
  std::vector<std::size_t> psi_generators;
  std::size_t solving_generator = 0;

  conjugacy::ToralPerturbation build() const;
};
PerturbationInput parse_perturbation(const Json& j);

struct RootRequest {
  rootsys::RootType type = rootsys::RootType::A;
  int rank = 0;
  std::map<std::string, int> multiplicities;
};
RootRequest parse_root_request(const Json& j);

}  // namespace anosov::io
