#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "anosov/chambers.hpp"
#include "anosov/functional.hpp"
#include "anosov/spectra.hpp"

namespace anosov::conjugacy {

using spectra::ActionSpec;

/// One frequency of a trigonometric field:
/// sin_coeffs * sin(2 pi k.x) + cos_coeffs * cos(2 pi k.x).
struct TrigTerm {
  std::vector<long> frequency;
  std::vector<double> sin_coeffs;
  std::vector<double> cos_coeffs;  // empty means zero
};

/// Z^n-periodic field T^n -> R^n, scaled by epsilon.
struct TrigField {
  std::vector<TrigTerm> terms;
  double epsilon = 1.0;

  void evaluate(const double* x, double* out, std::size_t n) const;
  /// Row-major n x n Jacobian.
  void jacobian(const double* x, double* out, std::size_t n) const;
  double sup_bound() const;
  /// Bound on the operator infinity-norm of the Jacobian.
  double lipschitz_bound() const;
  bool is_zero() const;
};

/// Nonlinear part p of a lifted torus map x -> A x + p(x).
struct PerturbationMap {
  std::function<void(const double*, double*)> evaluate;
  double sup_bound = 0;
  double lipschitz_bound = 0;
  std::string kind;
  bool zero = false;

  double c1_bound() const { return sup_bound + lipschitz_bound; }
};

PerturbationMap zero_map(std::size_t n);
PerturbationMap trig_map(const TrigField& field, std::size_t n);

/// psi(x) = x + g(x) with g small.
class PsiDiffeo {
 public:
  PsiDiffeo(TrigField g, std::size_t n);

  void apply(const double* x, double* out) const;
  /// Newton iteration; throws PreconditionFailed if g is not a contraction.
  void inverse(const double* y, double* out) const;
  const TrigField& field() const { return g_; }
  std::size_t dim() const { return n_; }

 private:
  TrigField g_;
  std::size_t n_;
};

/// Nonlinear part of psi o A o psi^{-1}.
PerturbationMap psi_map(const IntMatrix& a, const PsiDiffeo& psi);

class ToralPerturbation {
 public:
  ToralPerturbation(ActionSpec base, std::vector<PerturbationMap> maps);

  const ActionSpec& base() const { return base_; }
  std::size_t dim() const { return static_cast<std::size_t>(base_.dim); }
  std::size_t rank() const { return base_.rank(); }
  const PerturbationMap& map(std::size_t i) const { return maps_.at(i); }
  /// Largest c1 bound over the generators.
  double c1_norm_bound() const;
  /// Lifted f_i(x) = A_i x + p_i(x).
  void apply(std::size_t i, const double* x, double* out) const;

 private:
  ActionSpec base_;
  std::vector<PerturbationMap> maps_;
};

/// Missing or empty fields leave the generator unperturbed.
ToralPerturbation trig_perturbation(const ActionSpec& base, const std::vector<TrigField>& fields);
/// Every generator conjugated by the same psi, so the result is a genuine action.
ToralPerturbation psi_conjugation(const ActionSpec& base, const PsiDiffeo& psi);
/// Single-generator action f_i^power, power >= 1.
ToralPerturbation iterate(const ToralPerturbation& pert, std::size_t generator, int power);

/// sup |f_i f_j - f_j f_i| (mod Z^n) over pseudo-random sample points.
double commutation_defect(const ToralPerturbation& pert, std::size_t i, std::size_t j, std::size_t samples = 256,
                          std::uint64_t seed = 1);

/// Hyperbolic splitting of an integer matrix.
struct Splitting {
  std::vector<double> stable_projection;  // row-major
  std::vector<double> unstable_projection;
  double contraction_rate = 0;            // max(|stable eig|, 1/|unstable eig|)
  std::size_t stable_dim = 0;
};
/// Throws NotAnosov when A has an eigenvalue on the unit circle.
Splitting hyperbolic_splitting(const IntMatrix& a);

/// h(x) = x + u(x) sampled on the grid (Z/N)^n.
struct ConjugacyField {
  std::size_t dim = 0;
  std::size_t resolution = 0;
  std::size_t solving_generator = 0;
  std::vector<double> u;  // point-major, last axis fastest, dim values per point
  std::size_t iterations = 0;
  double residual = 0;
  std::vector<double> residual_history;
  double contraction_rate = 0;
  double smallness = 0;

  std::size_t points() const;
  std::vector<double> point(std::size_t index) const;
  double sup_norm() const;
  /// Periodic multilinear interpolation.
  void interpolate(const double* x, double* out) const;
};

struct SolveOptions {
  std::size_t resolution = 512;
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  /// Refuse when c1_norm_bound / (1 - contraction rate) exceeds this.
  double smallness_threshold = 1.5;
  std::size_t window = 8;
};

/// Throws NotAnosov, Diverged or ResolutionInsufficient.
ConjugacyField solve_conjugacy(const ToralPerturbation& pert, std::size_t solving_generator,
                               const SolveOptions& options = {});

struct IntertwiningReport {
  std::vector<double> residuals;
  /// Grid points are permuted exactly by every generator, so no interpolation enters.
  double interpolation_budget = 0;
  double tol = 0;
  bool rigid = false;
};

IntertwiningReport verify_intertwining(const ConjugacyField& h, const ToralPerturbation& pert, double tol);

/// sup over the grid of |u - g|.
double distance_to(const ConjugacyField& h, const TrigField& g);

/// u at an arbitrary point (rounded to the 2^-48 lattice), from an exact orbit
/// segment whose ends are read off the grid field.
std::vector<double> evaluate_displacement(const ConjugacyField& h, const ToralPerturbation& pert,
                                          const std::vector<double>& x);

struct ProbeDirection {
  std::string label;
  std::size_t space = 0;
  std::vector<double> vector;
};

/// Eigen-directions of the base, grouped by coarse Lyapunov space.
std::vector<ProbeDirection> coarse_directions(const ActionSpec& base,
                                              const std::vector<LyapunovFunctional>& functionals,
                                              const chambers::CoarseDecomposition& coarse);

struct DirectionRegularity {
  ProbeDirection direction;
  std::vector<double> scales;
  std::vector<double> first_differences;
  std::vector<double> second_differences;
  double holder_exponent = 0;
  double second_exponent = 0;
  std::string classification;  // smooth, C2, C1, holder
};

struct RegularityReport {
  std::vector<DirectionRegularity> directions;
  std::size_t orbit_half_length = 0;
};

struct ProbeOptions {
  int coarsest = 3;
  int finest = 16;
  std::size_t samples = 48;
  std::uint64_t seed = 1;
};

/// Throws ResolutionInsufficient when differences drown in evaluation noise.
RegularityReport regularity_probe(const ConjugacyField& h, const ToralPerturbation& pert,
                                  const std::vector<ProbeDirection>& directions, const ProbeOptions& options = {});

/// Magic "ANOSOVCF", uint32 n, uint32 N, then N^n * n little-endian doubles.
void write_grid_dump(const ConjugacyField& h, std::ostream& out);
ConjugacyField read_grid_dump(std::istream& in);

struct FourierCoefficient {
  std::size_t component = 0;
  std::vector<long> frequency;
  std::complex<double> value;
};
/// Coefficients of u with modulus above cutoff, ordered by component then frequency.
std::vector<FourierCoefficient> fourier_table(const ConjugacyField& h, double cutoff = 1e-12);

}  // namespace anosov::conjugacy
