#include <gtest/gtest.h>

#include <random>

#include "gkernel/cochain.hpp"

using namespace gkernel;

namespace {

Cochain random_b(const FiniteGroup& G, std::mt19937& rng, int den) {
  std::uniform_int_distribution<int> pick(0, den - 1);
  const int n = G.order();
  std::vector<Phase> v(static_cast<std::size_t>(n * n));
  for (int g = 1; g < n; ++g)
    for (int h = 1; h < n; ++h) v[static_cast<std::size_t>(g * n + h)] = Phase(pick(rng), den);
  return Cochain(G, 2, v);
}

// Independent formula evaluation with raw rationals, not Phase arithmetic.
bool db_matches_formula(const Cochain& b, const Cochain& db) {
  const auto& G = b.group();
  const int n = G.order();
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) {
        const Phase parts[] = {b(g, h), b(G.mul(g, h), k), b(g, G.mul(h, k)), b(h, k)};
        const int sign[] = {1, 1, -1, -1};
        long double angle = 0;
        for (int i = 0; i < 4; ++i)
          angle += sign[i] * static_cast<long double>(parts[i].numerator()) / parts[i].denominator();
        angle -= std::floor(angle);
        const Phase got = db(g, h, k);
        const long double want = static_cast<long double>(got.numerator()) / got.denominator();
        const long double diff = std::fabs(angle - want);
        if (std::min(diff, 1 - diff) > 1e-12) return false;
      }
  return true;
}

std::vector<FiniteGroup> small_groups() {
  return {make_cyclic(1), make_cyclic(2), make_cyclic(3), make_cyclic(4),
          direct_product(make_cyclic(2), make_cyclic(2))};
}

}  // namespace

TEST(Phase, ArithmeticIsExact) {
  EXPECT_EQ(Phase(1, 2) * Phase(1, 2), Phase::trivial());
  EXPECT_EQ(Phase(1, 3) * Phase(1, 6), Phase(1, 2));
  EXPECT_EQ(Phase(-1, 4), Phase(3, 4));
  EXPECT_EQ(Phase(6, 4), Phase(1, 2));
  EXPECT_EQ(Phase(2, 3).inverse(), Phase(1, 3));
  EXPECT_EQ(Phase(1, 5).pow(7), Phase(2, 5));
  EXPECT_THROW(Phase(1, 0), std::invalid_argument);
}

TEST(Phase, ParseAndPrint) {
  EXPECT_EQ(Phase::parse("3/4"), Phase(3, 4));
  EXPECT_EQ(Phase::parse(" -1/4 "), Phase(3, 4));
  EXPECT_EQ(Phase::parse("2"), Phase::trivial());
  EXPECT_EQ(Phase(1, 2).to_string(), "1/2");
  EXPECT_EQ(Phase().to_string(), "0");
  EXPECT_THROW(Phase::parse("x/2"), std::invalid_argument);
  EXPECT_THROW(Phase::parse("1/0"), std::invalid_argument);
}

TEST(Phase, SnapFindsSmallestDenominator) {
  const auto p = Phase::snap(std::polar(1.0, 2 * M_PI / 3), 27, 1e-8);
  ASSERT_TRUE(p);
  EXPECT_EQ(*p, Phase(1, 3));
  EXPECT_FALSE(Phase::snap(std::polar(1.0, 1.0), 8, 1e-8));
}

TEST(Group, MakeCyclicExamples) {
  EXPECT_EQ(make_cyclic(1).table(), (std::vector<std::vector<int>>{{0}}));
  EXPECT_EQ(make_cyclic(2).table(), (std::vector<std::vector<int>>{{0, 1}, {1, 0}}));
  const auto z4 = make_cyclic(4);
  int inverse = -1;
  for (int x = 0; x < 4; ++x)
    if (z4.table()[3][static_cast<std::size_t>(x)] == 0) inverse = x;
  EXPECT_EQ(inverse, 1);
  EXPECT_EQ(z4.inv(3), 1);
  EXPECT_THROW(make_cyclic(0), std::invalid_argument);
}

TEST(Group, RejectsNonGroupTables) {
  EXPECT_THROW(FiniteGroup({{0, 1}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(FiniteGroup({{1, 0}, {0, 1}}), std::invalid_argument);
  EXPECT_THROW(FiniteGroup({{0, 1}}), std::invalid_argument);
  EXPECT_THROW(FiniteGroup({{0, 2}, {1, 0}}), std::invalid_argument);
  // Latin square with identity but not associative.
  EXPECT_THROW(FiniteGroup({{0, 1, 2, 3, 4},
                            {1, 0, 3, 4, 2},
                            {2, 4, 0, 1, 3},
                            {3, 2, 4, 0, 1},
                            {4, 3, 1, 2, 0}}),
               std::invalid_argument);
}

TEST(Group, DirectProductIndexing) {
  const auto g = direct_product(make_cyclic(2), make_cyclic(3));
  EXPECT_EQ(g.order(), 6);
  // (1,2)·(1,2) = (0,1) -> index 1
  EXPECT_EQ(g.mul(1 * 3 + 2, 1 * 3 + 2), 1);
}

TEST(Cochain, NormalizationEnforced) {
  const auto G = make_cyclic(2);
  std::vector<Phase> v(4);
  v[1] = Phase(1, 2);
  EXPECT_THROW(Cochain(G, 2, v), std::invalid_argument);
  EXPECT_THROW(Cochain(G, 4, {}), std::invalid_argument);
  EXPECT_THROW(Cochain(G, 2, std::vector<Phase>(3)), std::invalid_argument);
}

TEST(Coboundary, TrivialAndZ2Examples) {
  const auto G = make_cyclic(2);
  EXPECT_TRUE(coboundary(Cochain::trivial(G, 2)).is_trivial());
  std::vector<Phase> v(4);
  v[3] = Phase(1, 2);
  const Cochain b(G, 2, v);
  const auto db = coboundary(b);
  EXPECT_TRUE(db_matches_formula(b, db));
  EXPECT_EQ(db(1, 1, 1), Phase::trivial());
  EXPECT_THROW(coboundary(Cochain::trivial(G, 3)), std::invalid_argument);
}

TEST(Coboundary, DSquaredIsZeroExhaustively) {
  // Every normalized 2-cochain with angles in {0, 1/2} (|G| <= 4) or a
  // random sample for larger tables.
  for (const auto& G : small_groups()) {
    const int n = G.order();
    const int free = (n - 1) * (n - 1);
    if (free <= 9) {
      for (int mask = 0; mask < (1 << free); ++mask) {
        std::vector<Phase> v(static_cast<std::size_t>(n * n));
        for (int i = 0; i < free; ++i) {
          const int g = i / (n - 1) + 1, h = i % (n - 1) + 1;
          if (mask >> i & 1) v[static_cast<std::size_t>(g * n + h)] = Phase(1, 2);
        }
        const Cochain b(G, 2, v);
        ASSERT_TRUE(is_cocycle(coboundary(b)));
      }
    }
    std::mt19937 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      const auto b = random_b(G, rng, 12);
      const auto db = coboundary(b);
      ASSERT_TRUE(is_cocycle(db));
      ASSERT_TRUE(db_matches_formula(b, db));
    }
  }
}

TEST(Coboundary, RandomLargerGroups) {
  std::mt19937 rng(5);
  for (int n : {5, 6, 7}) {
    const auto G = make_cyclic(n);
    for (int trial = 0; trial < 10; ++trial) EXPECT_TRUE(is_cocycle(coboundary(random_b(G, rng, 30))));
  }
  const auto G = direct_product(make_cyclic(2), make_cyclic(3));
  EXPECT_TRUE(is_cocycle(coboundary(random_b(G, rng, 8))));
}

TEST(IsCocycle, Examples) {
  EXPECT_TRUE(is_cocycle(Cochain::trivial(make_cyclic(3), 3)));
  std::mt19937 rng(3);
  EXPECT_TRUE(is_cocycle(coboundary(random_b(make_cyclic(3), rng, 9))));
  std::vector<Phase> v(8);
  v[7] = Phase(1, 2);
  EXPECT_TRUE(is_cocycle(Cochain(make_cyclic(2), 3, v)));
  // A 3-cochain that violates the condition.
  std::vector<Phase> w(27);
  w[1 * 9 + 1 * 3 + 1] = Phase(1, 3);
  EXPECT_FALSE(is_cocycle(Cochain(make_cyclic(3), 3, w)));
}

TEST(StandardCocycle, Examples) {
  const auto w2 = standard_cyclic_3cocycle(2, 1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        EXPECT_EQ(w2(a, b, c), (a && b && c) ? Phase(1, 2) : Phase::trivial());
  EXPECT_TRUE(is_cocycle(w2));
  EXPECT_TRUE(standard_cyclic_3cocycle(5, 0).is_trivial());
  EXPECT_EQ(standard_cyclic_3cocycle(3, 1)(1, 2, 2), Phase(1, 3));
}

TEST(StandardCocycle, AdditiveInK) {
  for (int n = 1; n <= 6; ++n)
    for (int k = 0; k < n; ++k)
      for (int k2 = 0; k2 < n; ++k2) {
        const auto a = standard_cyclic_3cocycle(n, k);
        ASSERT_TRUE(is_cocycle(a));
        ASSERT_EQ(a * standard_cyclic_3cocycle(n, k2), standard_cyclic_3cocycle(n, (k + k2) % n));
      }
}

TEST(Cohomologous, ReflexiveGivesVerifiedWitness) {
  const auto w = standard_cyclic_3cocycle(3, 1);
  const auto b = cohomologous(w, w);
  ASSERT_TRUE(b);
  EXPECT_TRUE(coboundary(*b).is_trivial());
}

TEST(Cohomologous, RecoversCoboundaries) {
  std::mt19937 rng(11);
  for (const auto& G : small_groups()) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto b0 = random_b(G, rng, 6);
      const auto c1 = coboundary(b0);
      const auto b = cohomologous(c1, Cochain::trivial(G, 3));
      ASSERT_TRUE(b) << serialize(c1);
      EXPECT_EQ(coboundary(*b), c1);
    }
  }
}

TEST(Cohomologous, Z2NontrivialClassAgainstBruteForce) {
  const auto G = make_cyclic(2);
  const auto w = standard_cyclic_3cocycle(2, 1);
  EXPECT_FALSE(cohomologous(w, Cochain::trivial(G, 3)));
  // Oracle: b(1,1) ranges over all angles with denominator dividing 4.
  bool found = false;
  for (int p = 0; p < 4; ++p) {
    std::vector<Phase> v(4);
    v[3] = Phase(p, 4);
    if (coboundary(Cochain(G, 2, v)) == w) found = true;
  }
  EXPECT_FALSE(found);
}

TEST(Cohomologous, DistinguishesCyclicClasses) {
  for (int n = 2; n <= 5; ++n)
    for (int k = 0; k < n; ++k)
      for (int k2 = 0; k2 < n; ++k2) {
        const bool same = cohomologous(standard_cyclic_3cocycle(n, k), standard_cyclic_3cocycle(n, k2)).has_value();
        EXPECT_EQ(same, k == k2) << n << " " << k << " " << k2;
      }
}

TEST(Cohomologous, SymmetricByInversion) {
  std::mt19937 rng(23);
  const auto G = make_cyclic(4);
  const auto w = standard_cyclic_3cocycle(4, 2);
  const auto twisted = w * coboundary(random_b(G, rng, 8));
  const auto b12 = cohomologous(twisted, w);
  const auto b21 = cohomologous(w, twisted);
  ASSERT_TRUE(b12);
  ASSERT_TRUE(b21);
  EXPECT_EQ(coboundary(b12->inverse()), w * twisted.inverse());
  EXPECT_EQ(coboundary(*b21), w * twisted.inverse());
}

TEST(Cohomologous, RejectsNonCocycles) {
  std::vector<Phase> w(27);
  w[1 * 9 + 1 * 3 + 1] = Phase(1, 3);
  const Cochain bad(make_cyclic(3), 3, w);
  EXPECT_THROW(cohomologous(bad, Cochain::trivial(make_cyclic(3), 3)), std::invalid_argument);
}

TEST(Cochain, SerializeRoundTrip) {
  std::mt19937 rng(2);
  const auto G = make_cyclic(3);
  const auto b = random_b(G, rng, 7);
  EXPECT_EQ(parse_cochain(G, 2, serialize(b)), b);
  const auto w = standard_cyclic_3cocycle(3, 2);
  const auto text = serialize(w);
  EXPECT_EQ(text.substr(0, 10), "0,0,0 = 0\n");
  EXPECT_EQ(parse_cochain(G, 3, text), w);
  EXPECT_THROW(parse_cochain(G, 2, "1 = 1/2"), std::invalid_argument);
  EXPECT_THROW(parse_cochain(G, 2, "1,1 1/2"), std::invalid_argument);
  EXPECT_THROW(parse_cochain(G, 2, "0,1 = 1/2"), std::invalid_argument);
}
