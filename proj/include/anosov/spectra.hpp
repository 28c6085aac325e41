#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anosov/bigfloat.hpp"
#include "anosov/chambers.hpp"
#include "anosov/error.hpp"
#include "anosov/functional.hpp"
#include "anosov/matrix.hpp"
#include "anosov/poly.hpp"

namespace anosov::spectra {

struct ActionSpec {
  int dim = 0;
  std::vector<IntMatrix> generators;
  std::vector<std::string> labels;

  std::size_t rank() const { return generators.size(); }
  /// sigma(n) = prod A_i^{n_i}.
  IntMatrix element(const std::vector<long>& n) const;
};

struct Violation {
  ErrorCode code;
  std::vector<int> indices;
  std::string message;
};

class ActionRejected : public Error {
 public:
  explicit ActionRejected(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

ActionSpec validate_action(const std::vector<IntMatrix>& raw, std::vector<std::string> labels = {});

/// One irreducible factor q of the characteristic polynomial of a separating
/// combination M_c. Every generator acts on the q-primary block with joint
/// eigenvalue g_a(z) at each root z of q.
struct GaloisBlock {
  Poly field;
  int multiplicity = 0;
  std::vector<Poly> elements;
  std::vector<RootEnclosure> roots;
};

struct JointEigenvalueClass {
  int index = 0;
  std::vector<Interval> moduli_log;
  int dimension = 0;
  Poly minimal_polynomial;
  int block = 0;
  int root = 0;
};

struct JointSpectrum {
  std::vector<long> separator;
  std::vector<GaloisBlock> blocks;
  std::vector<JointEigenvalueClass> classes;
};

JointSpectrum joint_spectrum(const ActionSpec& action, double tol = 1e-12);

/// |g_a(z)|^2 at 50 digits with a rigorous radius.
struct ModulusValue {
  BigFloat center;
  BigFloat radius;
};
ModulusValue squared_modulus(const JointSpectrum& js, int cls, std::size_t generator);

/// Exact decision of |alpha_a|^{2q} = |beta_a|^{2p} for the eigenvalues of
/// generator a on two classes (p may be zero or negative). nullopt when the
/// isolating interval test is inconclusive.
std::optional<bool> power_relation(const ActionSpec& action, const JointSpectrum& js, std::size_t generator, int cls_i,
                                   int cls_j, long q, long p);

std::vector<LyapunovFunctional> lyapunov_functionals(const ActionSpec& action, const JointSpectrum& js);
std::vector<LyapunovFunctional> lyapunov_functionals(const ActionSpec& action);

/// Exact certificate chi_i = ratio * chi_j for functionals of one action.
class SpectralCertifier : public RelationCertifier {
 public:
  SpectralCertifier(const ActionSpec& action, const JointSpectrum& js, const std::vector<LyapunovFunctional>& fs)
      : action_(action), js_(js), fs_(fs) {}
  std::optional<bool> proportional(std::size_t i, std::size_t j, const Rational& ratio) const override;

 private:
  const ActionSpec& action_;
  const JointSpectrum& js_;
  const std::vector<LyapunovFunctional>& fs_;
};

struct SemisimplicityReport {
  std::vector<bool> per_generator;
  std::vector<Poly> minimal_polynomials;
  bool overall = true;
};
SemisimplicityReport is_semisimple(const ActionSpec& action);

bool is_anosov_element(const ActionSpec& action, const std::vector<LyapunovFunctional>& functionals,
                       const std::vector<long>& a);
bool is_anosov_element(const ActionSpec& action, const std::vector<long>& a);

bool is_weak_mixing(const IntMatrix& m);

enum class Verdict { Pass, Fail, Inconclusive };
std::string_view verdict_name(Verdict v);

struct RootOfUnityWitness {
  std::vector<long> element;
  int block = 0;
  long order = 0;
};

struct Corollary4Report {
  bool applicable = false;
  SemisimplicityReport semisimple;
  std::optional<std::vector<long>> anosov_element;
  std::string anosov_source;
  bool box_exhausted = false;
  Verdict roots_of_unity = Verdict::Inconclusive;
  std::vector<int> kernel_ranks;
  std::optional<RootOfUnityWitness> witness;
  bool weak_mixing_generators = false;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> notes;
};

struct Corollary4Options {
  long box = 8;
};

Corollary4Report check_corollary4_hypotheses(const ActionSpec& action, const Corollary4Options& options = {});

}  // namespace anosov::spectra
