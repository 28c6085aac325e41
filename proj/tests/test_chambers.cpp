#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "anosov/chambers.hpp"
#include "anosov/rootsys.hpp"
#include "anosov/spectra.hpp"
#include "helpers.hpp"

using namespace anosov;
using namespace anosov::chambers;
using testing_util::action;
using testing_util::mat;

namespace {

struct Case {
  std::string name;
  std::vector<LyapunovFunctional> fs;
  std::size_t expected_chambers;
};

std::vector<Case> cases() {
  std::vector<Case> out;
  out.push_back({"t3", spectra::lyapunov_functionals(action({testing_util::t3_m(), testing_util::t3_n()})), 6});
  out.push_back({"product",
                 spectra::lyapunov_functionals(action({mat({{2, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                                                       mat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 1}})})),
                 4});
  for (auto [type, rank, count] : {std::tuple{rootsys::RootType::BC, 2, 8}, std::tuple{rootsys::RootType::A, 3, 24},
                                   std::tuple{rootsys::RootType::B, 3, 48}}) {
    auto sys = rootsys::build_root_system(type, rank);
    out.push_back({sys.label(), rootsys::weyl_flow_lyapunov_data(sys).functionals, static_cast<std::size_t>(count)});
  }
  return out;
}

std::vector<double> mids(const LyapunovFunctional& f) {
  std::vector<double> c;
  for (const auto& iv : f.coeffs) c.push_back(iv.mid());
  return c;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Distinct sign patterns of all functionals over random directions.
std::size_t sampled_chambers(const std::vector<LyapunovFunctional>& fs) {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  std::set<std::vector<int>> seen;
  const std::size_t k = fs.front().rank();
  for (int s = 0; s < 40000; ++s) {
    std::vector<double> x(k);
    for (auto& v : x) v = g(rng);
    std::vector<int> sig;
    for (const auto& f : fs)
      if (!f.is_zero()) sig.push_back(dot(mids(f), x) > 0 ? 1 : -1);
    seen.insert(sig);
  }
  return seen.size();
}

}  // namespace

TEST(Chambers, CoarsePartitionCoversDimension) {
  for (const auto& c : cases()) {
    auto coarse = coarse_decomposition(c.fs);
    int total = 0;
    std::set<int> members;
    for (const auto& s : coarse.spaces) {
      total += s.dimension;
      for (int m : s.halfspace.members) EXPECT_TRUE(members.insert(m).second) << c.name;
      ASSERT_FALSE(s.coefficients.empty());
      ASSERT_TRUE(s.coefficients.front().exact.has_value());
      EXPECT_EQ(*s.coefficients.front().exact, 1);
      // Every member is a positive multiple of the bottom functional.
      auto bottom = mids(c.fs[static_cast<std::size_t>(s.bottom)]);
      for (std::size_t i = 0; i < s.halfspace.members.size(); ++i) {
        auto f = mids(c.fs[static_cast<std::size_t>(s.halfspace.members[i])]);
        double r = s.coefficients[i].value.mid();
        EXPECT_GE(r, 1.0 - 1e-12);
        for (std::size_t a = 0; a < f.size(); ++a) EXPECT_NEAR(f[a], r * bottom[a], 1e-9) << c.name;
      }
    }
    for (int z : coarse.neutral) EXPECT_TRUE(members.insert(z).second);
    EXPECT_EQ(members.size(), c.fs.size());
    int expected = 0;
    for (const auto& f : c.fs) expected += f.multiplicity;
    EXPECT_EQ(total + coarse.neutral_dimension, expected) << c.name;
  }
}

TEST(Chambers, ChamberCountMatchesSampling) {
  for (const auto& c : cases()) {
    auto arr = weyl_chambers(c.fs);
    EXPECT_EQ(arr.chambers.size(), c.expected_chambers) << c.name;
    EXPECT_EQ(arr.chambers.size(), sampled_chambers(c.fs)) << c.name;
  }
}

TEST(Chambers, RegularElementsLieInsideTheirChamber) {
  for (const auto& c : cases()) {
    auto coarse = coarse_decomposition(c.fs);
    auto arr = weyl_chambers(c.fs, coarse);
    std::set<std::vector<int>> patterns;
    for (std::size_t ch = 0; ch < arr.chambers.size(); ++ch) {
      const auto& e = arr.chambers[ch].regular_element;
      std::vector<double> x(e.begin(), e.end());
      for (std::size_t w = 0; w < arr.walls.size(); ++w) {
        std::vector<double> n;
        for (const auto& iv : arr.walls[w].normal) n.push_back(iv.mid());
        EXPECT_EQ(dot(n, x) > 0 ? 1 : -1, arr.chambers[ch].signs[w]) << c.name;
      }
      std::vector<int> sig;
      for (const auto& f : c.fs) {
        if (f.is_zero()) continue;
        double v = dot(mids(f), x);
        EXPECT_GT(std::abs(v), 1e-9);
        sig.push_back(v > 0);
      }
      EXPECT_TRUE(patterns.insert(sig).second);
    }
  }
}

TEST(Chambers, Theorem1CombinatoricsHoldOnExamples) {
  for (const auto& c : cases()) {
    auto coarse = coarse_decomposition(c.fs);
    auto arr = weyl_chambers(c.fs, coarse);
    auto rep = check_theorem1_combinatorics(c.fs, coarse, arr);
    EXPECT_TRUE(rep.combinatorics_pass) << c.name;
    EXPECT_FALSE(rep.ergodicity_verified);
    EXPECT_EQ(rep.entries.size(), coarse.spaces.size());
    for (const auto& e : rep.entries) {
      EXPECT_TRUE(e.matches);
      auto members = coarse.spaces[static_cast<std::size_t>(e.space)].halfspace.members;
      std::sort(members.begin(), members.end());
      EXPECT_EQ(e.intersection, members);
      auto bottom = mids(c.fs[static_cast<std::size_t>(coarse.spaces[static_cast<std::size_t>(e.space)].bottom)]);
      for (const auto& b : e.elements) EXPECT_LT(dot(bottom, std::vector<double>(b.begin(), b.end())), 0);
    }
  }
}

TEST(Chambers, ProportionalityIsSigned) {
  auto f1 = exact_functional({Rational(1), Rational(-1)});
  auto f2 = exact_functional({Rational(-2), Rational(2)});
  auto f3 = exact_functional({Rational(1), Rational(1)});
  std::vector<LyapunovFunctional> fs{f1, f2, f3};
  auto r = proportionality(fs, 1, 0, nullptr);
  ASSERT_TRUE(r.has_value());
  ASSERT_TRUE(r->exact.has_value());
  EXPECT_EQ(*r->exact, -2);
  EXPECT_FALSE(proportionality(fs, 0, 2, nullptr).has_value());
}

TEST(Chambers, RankOneHasTwoChambers) {
  auto fs = spectra::lyapunov_functionals(action({testing_util::cat_map()}));
  auto arr = weyl_chambers(fs);
  EXPECT_EQ(arr.chambers.size(), 2u);
}
