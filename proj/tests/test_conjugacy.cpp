#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "anosov/chambers.hpp"
#include "anosov/conjugacy.hpp"
#include "anosov/error.hpp"
#include "helpers.hpp"

using namespace anosov;
using namespace anosov::conjugacy;
using testing_util::action;

namespace {

constexpr double kTwoPi = 6.283185307179586;

TrigField cat_field(double eps) {
  return TrigField{{TrigTerm{{0, 1}, {1, 0}, {}}}, eps};
}

TrigField psi_field(double eps) {
  return TrigField{{TrigTerm{{0, 1, 0}, {1, 0, 0}, {}}, TrigTerm{{0, 0, 1}, {0, 1, 0}, {}},
                    TrigTerm{{1, 0, 0}, {0, 0, 1}, {}}},
                   eps};
}

double wrap(double v) { return v - std::round(v); }

// f(x + u(x)) = A x + u(A x) on every grid point, checked directly.
double grid_equation_residual(const ConjugacyField& h, const ToralPerturbation& pert, std::size_t gen) {
  const std::size_t n = h.dim, N = h.resolution;
  const auto& a = pert.base().generators[gen];
  double worst = 0;
  for (std::size_t idx = 0; idx < h.points(); ++idx) {
    std::vector<long> coord(n);
    std::size_t rest = idx;
    for (std::size_t d = n; d-- > 0;) {
      coord[d] = static_cast<long>(rest % N);
      rest /= N;
    }
    std::vector<double> x(n), hx(n), lhs(n);
    for (std::size_t d = 0; d < n; ++d) x[d] = static_cast<double>(coord[d]) / static_cast<double>(N);
    for (std::size_t d = 0; d < n; ++d) hx[d] = x[d] + h.u[idx * n + d];
    pert.apply(gen, hx.data(), lhs.data());
    std::size_t target = 0;
    std::vector<long> ac(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
      long s = 0;
      for (std::size_t c = 0; c < n; ++c) s += a(r, c).get_si() * coord[c];
      ac[r] = ((s % static_cast<long>(N)) + static_cast<long>(N)) % static_cast<long>(N);
      target = target * N + static_cast<std::size_t>(ac[r]);
    }
    for (std::size_t d = 0; d < n; ++d) {
      double rhs = static_cast<double>(ac[d]) / static_cast<double>(N) + h.u[target * n + d];
      worst = std::max(worst, std::abs(wrap(lhs[d] - rhs)));
    }
  }
  return worst;
}

ConjugacyField solve(const ToralPerturbation& p, std::size_t N, std::size_t gen = 0) {
  SolveOptions o;
  o.resolution = N;
  o.tol = 1e-12;
  return solve_conjugacy(p, gen, o);
}

ActionSpec cat() { return action({testing_util::cat_map()}); }
ActionSpec t3() { return action({testing_util::t3_m(), testing_util::t3_n()}); }

}  // namespace

TEST(Conjugacy, SplittingIsAProjectionPair) {
  for (const auto& a : {testing_util::cat_map(), testing_util::t3_m(), testing_util::t3_n()}) {
    auto s = hyperbolic_splitting(a);
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double sum = s.stable_projection[i * n + j] + s.unstable_projection[i * n + j];
        EXPECT_NEAR(sum, i == j ? 1.0 : 0.0, 1e-12);
        double sq = 0, ap = 0, pa = 0;
        for (std::size_t k = 0; k < n; ++k) {
          sq += s.stable_projection[i * n + k] * s.stable_projection[k * n + j];
          ap += a(i, k).get_d() * s.stable_projection[k * n + j];
          pa += s.stable_projection[i * n + k] * a(k, j).get_d();
        }
        EXPECT_NEAR(sq, s.stable_projection[i * n + j], 1e-12);
        EXPECT_NEAR(ap, pa, 1e-12);
      }
    EXPECT_LT(s.contraction_rate, 1.0);
  }
  EXPECT_NEAR(hyperbolic_splitting(testing_util::cat_map()).contraction_rate, 2 / (3 + std::sqrt(5.0)), 1e-12);
  EXPECT_THROW(hyperbolic_splitting(IntMatrix::identity(2)), Error);
}

TEST(Conjugacy, ZeroPerturbationGivesIdentity) {
  auto h = solve(trig_perturbation(cat(), {}), 64);
  EXPECT_LE(h.iterations, 1u);
  EXPECT_EQ(h.sup_norm(), 0.0);
}

TEST(Conjugacy, CatSolutionSatisfiesGridEquation) {
  auto pert = trig_perturbation(cat(), {cat_field(0.01)});
  auto h = solve(pert, 128);
  EXPECT_LT(h.residual, 1e-11);
  EXPECT_LT(grid_equation_residual(h, pert, 0), 1e-11);
  EXPECT_LT(h.sup_norm(), 0.05);
  auto rep = verify_intertwining(h, pert, 1e-9);
  EXPECT_TRUE(rep.rigid);
  EXPECT_EQ(rep.interpolation_budget, 0.0);
}

TEST(Conjugacy, GridResolutionsAgreeOnCommonPoints) {
  auto pert = trig_perturbation(cat(), {cat_field(0.02)});
  auto coarse = solve(pert, 40);
  auto fine = solve(pert, 120);
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 40; ++j)
      for (std::size_t d = 0; d < 2; ++d)
        EXPECT_NEAR(coarse.u[(i * 40 + j) * 2 + d], fine.u[(3 * i * 120 + 3 * j) * 2 + d], 1e-11);
}

TEST(Conjugacy, PowerOfGeneratorHasSameConjugacy) {
  auto pert = trig_perturbation(cat(), {cat_field(0.01)});
  auto h1 = solve(pert, 64);
  auto h2 = solve(iterate(pert, 0, 2), 64);
  double worst = 0;
  for (std::size_t i = 0; i < h1.u.size(); ++i) worst = std::max(worst, std::abs(h1.u[i] - h2.u[i]));
  EXPECT_LT(worst, 1e-11);
}

TEST(Conjugacy, PsiConjugationRecovered) {
  PsiDiffeo psi(psi_field(0.005), 3);
  auto pert = psi_conjugation(t3(), psi);
  auto h = solve(pert, 24);
  EXPECT_LT(distance_to(h, psi_field(0.005)), 1e-10);
  EXPECT_LT(grid_equation_residual(h, pert, 0), 1e-10);
  EXPECT_LT(grid_equation_residual(h, pert, 1), 1e-10);
  EXPECT_TRUE(verify_intertwining(h, pert, 1e-8).rigid);
  EXPECT_LT(commutation_defect(pert, 0, 1), 1e-12);
}

TEST(Conjugacy, NonCommutingControlIsNotRigid) {
  PsiDiffeo psi(psi_field(0.005), 3);
  auto base = t3();
  auto conj = psi_conjugation(base, psi);
  ToralPerturbation control(base, {conj.map(0), zero_map(3)});
  auto h = solve(control, 24);
  auto rep = verify_intertwining(h, control, 1e-8);
  EXPECT_FALSE(rep.rigid);
  EXPECT_LT(rep.residuals[0], 1e-10);
  EXPECT_GT(rep.residuals[1], 1e-3);
  EXPECT_GT(commutation_defect(control, 0, 1), 1e-4);
}

TEST(Conjugacy, PointEvaluatorMatchesFinerGrid) {
  auto pert = trig_perturbation(cat(), {cat_field(0.01)});
  auto coarse = solve(pert, 32);
  auto fine = solve(pert, 480);
  std::mt19937 rng(2);
  std::uniform_int_distribution<std::size_t> pick(0, 479);
  for (int s = 0; s < 40; ++s) {
    std::size_t i = pick(rng), j = pick(rng);
    std::vector<double> x{static_cast<double>(i) / 480.0, static_cast<double>(j) / 480.0};
    auto u = evaluate_displacement(coarse, pert, x);
    for (std::size_t d = 0; d < 2; ++d) EXPECT_NEAR(u[d], fine.u[(i * 480 + j) * 2 + d], 1e-11);
  }
}

TEST(Conjugacy, RankOneProbeIsHolder) {
  auto pert = trig_perturbation(cat(), {cat_field(0.01)});
  auto h = solve(pert, 64);
  auto fs = spectra::lyapunov_functionals(pert.base());
  auto dirs = coarse_directions(pert.base(), fs, chambers::coarse_decomposition(fs));
  ASSERT_EQ(dirs.size(), 2u);
  auto rep = regularity_probe(h, pert, dirs);
  for (const auto& d : rep.directions) {
    EXPECT_EQ(d.classification, "holder");
    EXPECT_LT(d.holder_exponent, 0.95);
    EXPECT_GT(d.holder_exponent, 0.5);
  }

  auto zero = trig_perturbation(cat(), {});
  auto hz = solve(zero, 16);
  for (const auto& d : regularity_probe(hz, zero, dirs).directions) EXPECT_EQ(d.classification, "smooth");
}

TEST(Conjugacy, SmoothConjugacyProbesAboveC1) {
  PsiDiffeo psi(psi_field(0.005), 3);
  auto smooth = psi_conjugation(t3(), psi);
  auto hs = solve(smooth, 24);
  auto fs3 = spectra::lyapunov_functionals(smooth.base());
  auto dirs3 = coarse_directions(smooth.base(), fs3, chambers::coarse_decomposition(fs3));
  ASSERT_EQ(dirs3.size(), 3u);
  ProbeOptions po;
  po.samples = 12;
  for (const auto& d : regularity_probe(hs, smooth, dirs3, po).directions) {
    EXPECT_TRUE(d.classification == "C2" || d.classification == "smooth") << d.classification;
    EXPECT_GT(d.holder_exponent, 0.95);
  }
}

TEST(Conjugacy, DumpRoundTrip) {
  auto pert = trig_perturbation(cat(), {cat_field(0.01)});
  auto h = solve(pert, 16);
  std::stringstream buf;
  write_grid_dump(h, buf);
  EXPECT_EQ(buf.str().size(), 8u + 8u + 16u * 16u * 2u * 8u);
  EXPECT_EQ(buf.str().substr(0, 8), "ANOSOVCF");
  auto back = read_grid_dump(buf);
  EXPECT_EQ(back.dim, 2u);
  EXPECT_EQ(back.resolution, 16u);
  EXPECT_EQ(back.u, h.u);
  std::stringstream bad("NOTADUMP");
  EXPECT_THROW(read_grid_dump(bad), Error);
}

TEST(Conjugacy, FourierTableOfPsiConjugacy) {
  const double eps = 0.005;
  PsiDiffeo psi(psi_field(eps), 3);
  auto h = solve(psi_conjugation(t3(), psi), 16);
  auto table = fourier_table(h, 1e-9);
  ASSERT_EQ(table.size(), 6u);
  for (const auto& c : table) {
    // sin(2 pi x_j) = (e^{2 pi i x_j} - e^{-2 pi i x_j}) / 2i.
    std::size_t axis = (c.component + 1) % 3;
    long sign = c.frequency[axis];
    EXPECT_EQ(std::abs(sign), 1);
    EXPECT_NEAR(c.value.real(), 0.0, 1e-12);
    EXPECT_NEAR(c.value.imag(), -0.5 * eps * static_cast<double>(sign), 1e-12);
  }
}

TEST(Conjugacy, TrigFieldDerivativesMatchFiniteDifferences) {
  auto g = psi_field(0.01);
  g.terms.push_back(TrigTerm{{1, -2, 1}, {0.3, 0.1, -0.2}, {0.05, 0, 0.4}});
  double x[3] = {0.13, 0.71, 0.42}, jac[9], fp[3], fm[3];
  g.jacobian(x, jac, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    double xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]};
    xp[c] += 1e-6;
    xm[c] -= 1e-6;
    g.evaluate(xp, fp, 3);
    g.evaluate(xm, fm, 3);
    for (std::size_t r = 0; r < 3; ++r) EXPECT_NEAR(jac[r * 3 + c], (fp[r] - fm[r]) / 2e-6, 1e-7);
  }
  double v[3];
  g.evaluate(x, v, 3);
  for (double e : v) EXPECT_LE(std::abs(e), g.sup_bound());
  const double theta = kTwoPi * (x[0] - 2 * x[1] + x[2]);
  EXPECT_NEAR(v[0], g.epsilon * (std::sin(kTwoPi * x[1]) + 0.3 * std::sin(theta) + 0.05 * std::cos(theta)), 1e-15);
}

TEST(Conjugacy, PsiInverseIsTwoSided) {
  PsiDiffeo psi(psi_field(0.02), 3);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int s = 0; s < 50; ++s) {
    double x[3] = {u(rng), u(rng), u(rng)}, y[3], z[3];
    psi.apply(x, y);
    psi.inverse(y, z);
    for (int d = 0; d < 3; ++d) EXPECT_NEAR(z[d], x[d], 1e-14);
  }
}

TEST(Conjugacy, FailuresAreTyped) {
  try {
    solve(trig_perturbation(action({IntMatrix::identity(2)}), {cat_field(0.01)}), 16);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAnosov);
  }
  TrigField big{{TrigTerm{{0, 1}, {1, 0}, {}}, TrigTerm{{1, 0}, {0, 1}, {}}}, 0.3};
  try {
    solve(trig_perturbation(cat(), {big}), 64);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Diverged);
  }
}
