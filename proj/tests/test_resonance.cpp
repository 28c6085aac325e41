#include <gtest/gtest.h>

#include <random>
#include <set>

#include "anosov/error.hpp"
#include "anosov/resonance.hpp"

using namespace anosov;
using namespace anosov::resonance;

namespace {

SpectrumBands bands(std::vector<std::pair<const char*, const char*>> iv, std::vector<int> dims) {
  std::vector<Rational> lo, hi;
  for (auto [a, b] : iv) {
    lo.push_back(parse_rational(a));
    hi.push_back(parse_rational(b));
  }
  return make_bands(lo, hi, dims);
}

Rational frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

// Narrow random bands with denominators up to 100.
SpectrumBands random_bands(std::mt19937& rng, std::size_t l) {
  std::uniform_int_distribution<int> step(1, 60), width(0, 20);
  while (true) {
    std::vector<Rational> lo, hi;
    Rational cursor = frac(-(100 + step(rng) * 5), 100);
    for (std::size_t i = 0; i < l; ++i) {
      Rational a = cursor;
      Rational b = a + frac(width(rng), 100);
      lo.push_back(a);
      hi.push_back(b);
      cursor = b + frac(step(rng), 100);
    }
    if (!(hi.back() < 0)) continue;
    auto b = make_bands(lo, hi, std::vector<int>(l, 1));
    if (is_narrow_band(b)) return b;
  }
}

void all_indices(std::size_t l, int max_total, std::vector<int>& s, std::size_t pos, std::vector<std::vector<int>>& out) {
  if (pos == l) {
    int t = 0;
    for (int v : s) t += v;
    if (t >= 1) out.push_back(s);
    return;
  }
  int used = 0;
  for (std::size_t i = 0; i < pos; ++i) used += s[i];
  for (int v = 0; v + used <= max_total; ++v) {
    s[pos] = v;
    all_indices(l, max_total, s, pos + 1, out);
  }
  s[pos] = 0;
}

}  // namespace

TEST(Resonance, MakeBandsValidates) {
  EXPECT_THROW(bands({{"-1", "-2"}}, {1}), Error);
  EXPECT_THROW(bands({{"-1", "-0.5"}, {"-0.6", "-0.4"}}, {1, 1}), Error);
  EXPECT_THROW(bands({{"-0.5", "-0.4"}, {"-1", "-0.9"}}, {1, 1}), Error);
  EXPECT_THROW(bands({{"-1", "-0.9"}}, {0}), Error);
  EXPECT_THROW(make_bands({}, {}, {}), Error);
}

TEST(Resonance, TwoToOneHasSingleNontrivialRelation) {
  auto b = bands({{"-1.3863", "-1.3862"}, {"-0.6932", "-0.6931"}}, {1, 1});
  EXPECT_EQ(degree_bound(b), 2);
  auto d = sr_group_descriptor(b);
  std::vector<SubResonanceRelation> nontrivial;
  for (const auto& r : d.relations)
    if (!r.trivial) nontrivial.push_back(r);
  ASSERT_EQ(nontrivial.size(), 1u);
  EXPECT_EQ(nontrivial[0].target_block, 0);
  EXPECT_EQ(nontrivial[0].exponents, (std::vector<int>{0, 2}));
  EXPECT_EQ(normal_form_regime(d), "polynomial");
  EXPECT_EQ(d.monomial_count, 4);
}

TEST(Resonance, NarrowBandsWithoutRelationsAreLinear) {
  auto b = bands({{"-1", "-0.95"}, {"-0.7", "-0.65"}}, {1, 1});
  auto d = sr_group_descriptor(b);
  EXPECT_EQ(degree_bound(b), 1);
  EXPECT_EQ(normal_form_regime(d), "linear");
  for (const auto& r : d.relations) EXPECT_TRUE(r.trivial);
}

TEST(Resonance, EqualityAtTwiceTheSlowRateIsResonant) {
  // lambda_1 = 2 mu_2 exactly, so (1, (0, 2)) holds with equality.
  auto b = bands({{"-1.0", "-0.9"}, {"-0.6", "-0.5"}}, {1, 1});
  EXPECT_TRUE(satisfies_relation(b, 0, {0, 2}));
  EXPECT_EQ(normal_form_regime(sr_group_descriptor(b)), "polynomial");
}

TEST(Resonance, NonNarrowRejected) {
  auto b = bands({{"-3", "-0.5"}, {"-0.4", "-0.3"}}, {1, 1});
  EXPECT_FALSE(is_narrow_band(b));
  EXPECT_THROW(sr_group_descriptor(b), Error);
}

TEST(Resonance, MonomialCountMatchesBinomial) {
  for (int m = 1; m <= 5; ++m)
    for (int d = 0; d <= 6; ++d) {
      Integer c;
      mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(m + d - 1), static_cast<unsigned long>(d));
      EXPECT_EQ(monomials(m, d), c);
    }
}

TEST(Resonance, EnumerationMatchesBruteForce) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t l = 1 + static_cast<std::size_t>(trial % 4);
    auto b = random_bands(rng, l);
    int bound = degree_bound(b);
    auto got = enumerate_subresonance(b);
    std::set<std::pair<int, std::vector<int>>> want, have;
    std::vector<std::vector<int>> idx;
    std::vector<int> s(l, 0);
    all_indices(l, bound + 2, s, 0, idx);
    for (std::size_t i = 0; i < l; ++i)
      for (const auto& e : idx) {
        Rational sum = 0;
        for (std::size_t j = 0; j < l; ++j) sum += e[j] * b.mu[j];
        if (b.lambda[i] <= sum) want.insert({static_cast<int>(i), e});
      }
    for (const auto& r : got) {
      have.insert({r.target_block, r.exponents});
      int deg = 0;
      for (int v : r.exponents) deg += v;
      EXPECT_EQ(r.trivial, deg == 1);
      if (!r.trivial)
        for (int j = 0; j <= r.target_block; ++j) EXPECT_EQ(r.exponents[static_cast<std::size_t>(j)], 0);
      if (b.lambda.front() > 2 * b.mu.back()) EXPECT_TRUE(r.trivial);
    }
    EXPECT_EQ(have, want);
  }
}

TEST(Resonance, DescriptorCountsMonomialsPerRelation) {
  auto b = bands({{"-1.0", "-0.9"}, {"-0.6", "-0.55"}}, {2, 1});
  auto d = sr_group_descriptor(b);
  Integer total = 0;
  for (const auto& r : d.relations) {
    Integer c = b.block_dims[static_cast<std::size_t>(r.target_block)];
    for (std::size_t j = 0; j < r.exponents.size(); ++j) {
      Integer bin;
      mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(b.block_dims[j] + r.exponents[j] - 1),
                   static_cast<unsigned long>(r.exponents[j]));
      c *= bin;
    }
    total += c;
  }
  EXPECT_EQ(d.monomial_count, total);
  EXPECT_EQ(d.monomial_count, 7);
  EXPECT_EQ(d.degree_bound, 1);
}

TEST(Resonance, MultiIndicesAreLexicographic) {
  auto idx = multi_indices(3, 2);
  EXPECT_EQ(idx.size(), 6u);
  EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
}
