#include <gtest/gtest.h>

#include <set>

#include "anosov/error.hpp"
#include "anosov/rootsys.hpp"

using namespace anosov;
using namespace anosov::rootsys;

namespace {

using Vec = std::vector<Rational>;

Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec unit(std::size_t n, std::size_t i, int scale = 1) {
  Vec v(n, 0);
  v[i] = scale;
  return v;
}

Vec sub(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

// Closure of the simple roots under the reflections they generate.
std::set<Vec> reflection_closure(const std::vector<Vec>& simple) {
  std::set<Vec> roots(simple.begin(), simple.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Vec> cur(roots.begin(), roots.end());
    for (const auto& a : cur)
      for (const auto& b : cur) {
        Rational c = 2 * dot(b, a) / dot(a, a);
        Vec r = b;
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * a[i];
        if (roots.insert(r).second) grew = true;
      }
  }
  return roots;
}

std::set<Vec> oracle(RootType t, int rank) {
  const auto n = static_cast<std::size_t>(rank);
  std::vector<Vec> simple;
  if (t == RootType::A) {
    for (std::size_t i = 0; i < n; ++i) simple.push_back(sub(unit(n + 1, i), unit(n + 1, i + 1)));
    std::set<Vec> out;
    for (const auto& r : reflection_closure(simple)) {
      Vec c(n);
      for (std::size_t k = 0; k < n; ++k) c[k] = r[k] - r[n];
      out.insert(c);
    }
    return out;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) simple.push_back(sub(unit(n, i), unit(n, i + 1)));
  switch (t) {
    case RootType::B: simple.push_back(unit(n, n - 1)); break;
    case RootType::C: simple.push_back(unit(n, n - 1, 2)); break;
    case RootType::D: {
      Vec v = unit(n, n - 2);
      v[n - 1] = 1;
      simple.push_back(v);
      break;
    }
    case RootType::BC:
      simple.push_back(unit(n, n - 1));
      simple.push_back(unit(n, n - 1, 2));
      break;
    default: break;
  }
  return reflection_closure(simple);
}

}  // namespace

TEST(RootSystems, RootsMatchReflectionClosure) {
  for (RootType t : {RootType::A, RootType::B, RootType::C, RootType::D, RootType::BC})
    for (int rank = 1; rank <= 5; ++rank) {
      if (t == RootType::D && rank < 2) continue;
      auto sys = build_root_system(t, rank);
      std::set<Vec> got;
      for (const auto& r : sys.roots) got.insert(r.coords);
      EXPECT_EQ(got.size(), sys.roots.size());
      EXPECT_EQ(got, oracle(t, rank)) << sys.label();
      EXPECT_EQ(sys.roots.size(), expected_root_count(t, rank));
    }
}

TEST(RootSystems, PositivesThenNegatives) {
  auto sys = build_root_system(RootType::BC, 3);
  const std::size_t half = sys.roots.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    Vec neg = sys.roots[i].coords;
    for (auto& v : neg) v = -v;
    EXPECT_EQ(sys.roots[half + i].coords, neg);
    EXPECT_EQ(sys.roots[half + i].key, sys.roots[i].key);
  }
}

TEST(RootSystems, MultiplicitiesByKey) {
  auto sys = build_root_system(RootType::BC, 2, {{"ei", 4}, {"2ei", 3}, {"ei+-ej", 2}});
  for (const auto& r : sys.roots) {
    if (r.key == "ei") EXPECT_EQ(r.multiplicity, 4);
    if (r.key == "2ei") EXPECT_EQ(r.multiplicity, 3);
    if (r.key == "ei+-ej") EXPECT_EQ(r.multiplicity, 2);
  }
  EXPECT_THROW(build_root_system(RootType::A, 2, {{"2ei", 1}}), Error);
  EXPECT_THROW(build_root_system(RootType::D, 1), Error);
  EXPECT_THROW(build_root_system(RootType::B, 0), Error);
  EXPECT_THROW(parse_type("E"), Error);
  EXPECT_EQ(parse_type("BC_2"), RootType::BC);
  EXPECT_EQ(type_name(RootType::D), "D");
}

TEST(RootSystems, CoarseCoefficientsAreOneOrTwo) {
  for (RootType t : {RootType::A, RootType::B, RootType::C, RootType::D, RootType::BC})
    for (int rank = 2; rank <= 4; ++rank) {
      auto sys = build_root_system(t, rank);
      auto data = weyl_flow_lyapunov_data(sys);
      EXPECT_TRUE(data.coefficients_ok) << sys.label();
      std::size_t members = 0;
      for (const auto& s : data.coarse.spaces) {
        members += s.halfspace.members.size();
        for (const auto& c : s.coefficients) {
          ASSERT_TRUE(c.exact.has_value());
          EXPECT_TRUE(*c.exact == 1 || *c.exact == 2) << sys.label();
        }
      }
      EXPECT_EQ(members, sys.roots.size());
      // In BC_n the 2n roots 2e_i share a space with e_i.
      std::size_t expected_spaces = t == RootType::BC ? sys.roots.size() - 2 * static_cast<std::size_t>(rank) : sys.roots.size();
      EXPECT_EQ(data.coarse.spaces.size(), expected_spaces) << sys.label();
    }
}

TEST(RootSystems, SmoothnessClass) {
  auto bc = build_root_system(RootType::BC, 2);
  auto rep = smoothness_class_report(bc, weyl_flow_lyapunov_data(bc));
  EXPECT_EQ(rep.smoothness, "C6");
  EXPECT_EQ(rep.doubled_pairs.size(), 4u);
  for (RootType t : {RootType::A, RootType::B, RootType::C, RootType::D}) {
    auto sys = build_root_system(t, 3);
    EXPECT_EQ(smoothness_class_report(sys, weyl_flow_lyapunov_data(sys)).smoothness, "C4") << sys.label();
  }
  auto a1 = build_root_system(RootType::A, 1);
  EXPECT_FALSE(weyl_flow_lyapunov_data(a1).warnings.empty());
}
