#include <gtest/gtest.h>

#include <random>

#include "gkernel/cuntz.hpp"

using namespace gkernel;

namespace {

CuntzElement P(int n, const std::string& s) { return parse_cuntz(n, s); }

// Oracle: the representation of O_n on ℓ² of infinite sequences,
// v_i δ_x = δ_{ix}. Vectors are sequences with a common unspecified tail
// after the stored prefix; an element of level ≤ L is determined by its
// action on all prefixes of length L.
using Vec = std::map<std::vector<int>, ExactComplex>;

Vec act(const CuntzElement& a, const std::vector<int>& prefix) {
  Vec out;
  for (const auto& [w, c] : a.terms()) {
    if (w.nu.size() > prefix.size()) throw std::logic_error("prefix too short");
    if (!std::equal(w.nu.begin(), w.nu.end(), prefix.begin())) continue;
    std::vector<int> res = w.mu;
    res.insert(res.end(), prefix.begin() + static_cast<long>(w.nu.size()), prefix.end());
    out[res] += c;
  }
  for (auto it = out.begin(); it != out.end();) it = (it->second == ExactComplex()) ? out.erase(it) : std::next(it);
  return out;
}

bool equal_by_action(const CuntzElement& a, const CuntzElement& b) {
  std::size_t level = 0;
  for (const auto* e : {&a, &b})
    for (const auto& [w, c] : e->terms()) level = std::max(level, w.nu.size());
  const int n = a.n();
  std::vector<int> p(level, 1);
  while (true) {
    if (act(a, p) != act(b, p)) return false;
    std::size_t i = level;
    while (i > 0 && p[i - 1] == n) p[--i] = 1;
    if (i == 0) return true;
    ++p[i - 1];
  }
}

CuntzElement random_element(int n, std::mt19937& rng, int max_len = 2, int max_terms = 3) {
  std::uniform_int_distribution<int> len(0, max_len), gen(1, n), terms(1, max_terms), coef(-3, 3);
  CuntzElement e(n);
  const int t = terms(rng);
  for (int k = 0; k < t; ++k) {
    std::vector<int> mu(static_cast<std::size_t>(len(rng))), nu(static_cast<std::size_t>(len(rng)));
    for (auto& x : mu) x = gen(rng);
    for (auto& x : nu) x = gen(rng);
    e = e + CuntzElement::word(n, mu, nu, ExactComplex(Rational(coef(rng), 2), Rational(coef(rng))));
  }
  return e;
}

// Rewrites one random term with the relation v_μ v_ν* = Σ_i v_{μi} v_{νi}*.
CuntzElement perturb(const CuntzElement& a, std::mt19937& rng) {
  if (a.is_zero()) return a;
  std::uniform_int_distribution<std::size_t> pick(0, a.terms().size() - 1);
  auto it = a.terms().begin();
  std::advance(it, static_cast<long>(pick(rng)));
  CuntzElement single(a.n());
  single.add_term(it->first, it->second);
  return (a - single) + expand_to_level(single, it->first.nu.size() + 1);
}

CuntzMatrix random_matrix(int n, int rows, int cols, std::mt19937& rng) {
  CuntzMatrix m(n, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = random_element(n, rng, 2, 2);
  return m;
}

}  // namespace

TEST(Cuntz, MultiplyExamples) {
  EXPECT_EQ(to_string(P(2, "v1* v1")), "1");
  EXPECT_EQ(to_string(P(2, "v1* v2")), "0");
  EXPECT_EQ(to_string(P(2, "v1 v2*") * P(2, "v2 v1*")), "v1 v1*");
  EXPECT_EQ(to_string(P(3, "v12* v123")), "v3");
  EXPECT_EQ(to_string(P(3, "v123* v12")), "v3*");
}

TEST(Cuntz, FormalSymbolRules) {
  EXPECT_EQ(to_string(P(2, "v1 m v2*") * P(2, "v2 v1*")), "v1 m v1*");
  EXPECT_EQ(to_string(P(2, "v1 m v2*").adjoint()), "v2 m* v1*");
  EXPECT_THROW(P(2, "m v1"), UnsupportedExpression);
  EXPECT_THROW(P(2, "v1* m"), UnsupportedExpression);
  EXPECT_THROW(P(2, "m m"), UnsupportedExpression);
  EXPECT_EQ(equals(P(2, "v1 m v1* + v2 m v2*"), P(2, "m")), Equality::NotEqual);
}

TEST(Cuntz, EqualsExamples) {
  for (int n = 1; n <= 4; ++n) {
    CuntzElement sum(n);
    for (int i = 1; i <= n; ++i) sum = sum + CuntzElement::word(n, {i}, {i});
    EXPECT_EQ(equals(sum, CuntzElement::one(n)), Equality::Equal);
  }
  EXPECT_EQ(equals(P(2, "v1 v1*"), P(2, "1")), Equality::NotEqual);
  EXPECT_EQ(equals(P(2, "v11 v11* + v12 v12*"), P(2, "v1 v1*")), Equality::Equal);
  EXPECT_EQ(equals(P(2, "v111111111*"), P(2, "v111111111*")), Equality::Equal);
  EXPECT_EQ(equals(P(2, "v111111111*"), P(2, "0")), Equality::Undecided);
  EXPECT_EQ(equals(P(2, "v111111111*"), P(2, "0"), 9), Equality::NotEqual);
}

TEST(Cuntz, EqualsAgreesWithSequenceRepresentation) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    const auto a = random_element(n, rng);
    const auto b = trial % 2 ? perturb(perturb(a, rng), rng) : random_element(n, rng);
    const bool oracle = equal_by_action(a, b);
    EXPECT_EQ(equals(a, b) == Equality::Equal, oracle) << to_string(a) << " vs " << to_string(b);
  }
}

TEST(Cuntz, LevelExpansionIsConsistent) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const auto a = random_element(n, rng), b = perturb(a, rng);
    const auto d = a - b;
    std::size_t L = 0;
    for (const auto& [w, c] : d.terms()) L = std::max(L, w.nu.size());
    const bool at_l = expand_to_level(d, L).is_zero();
    const bool at_l1 = expand_to_level(expand_to_level(d, L), L + 1).is_zero();
    const bool direct = expand_to_level(d, L + 1).is_zero();
    EXPECT_EQ(at_l, at_l1);
    EXPECT_EQ(at_l1, direct);
    EXPECT_TRUE(at_l);
  }
}

TEST(Cuntz, AssociativityAndCongruence) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 3;
    const auto a = random_element(n, rng), b = random_element(n, rng), c = random_element(n, rng);
    ASSERT_EQ(equals((a * b) * c, a * (b * c), 8), Equality::Equal);
    const auto a2 = perturb(a, rng), b2 = perturb(b, rng);
    ASSERT_EQ(equals(a, a2, 4), Equality::Equal);
    ASSERT_EQ(equals(a * b, a2 * b2, 8), Equality::Equal);
    ASSERT_EQ(equals(a + b, a2 + b2, 4), Equality::Equal);
  }
}

TEST(Cuntz, RowUnitaryCheck) {
  for (int n = 1; n <= 4; ++n) EXPECT_TRUE(row_unitary_check(n).pass) << n;
  const auto bad = row_unitary_check(2, {P(2, "v1"), P(2, "v1")});
  EXPECT_FALSE(bad.pass);
  ASSERT_TRUE(bad.entry);
  EXPECT_EQ(*bad.entry, std::make_pair(1, 2));
  const auto short_row = row_unitary_check(2, {P(2, "v1")});
  EXPECT_FALSE(short_row.pass);
  EXPECT_TRUE(short_row.sum_failed);
}

TEST(Cuntz, ConjugateAmplified) {
  const int n = 2;
  std::vector<std::vector<ExactComplex>> id{{1, 0}, {0, 1}};
  EXPECT_EQ(equals(conjugate_amplified(n, std::nullopt, id), CuntzElement::one(n)), Equality::Equal);
  std::vector<std::vector<ExactComplex>> e12{{0, 1}, {0, 0}};
  EXPECT_EQ(to_string(conjugate_amplified(n, FormalSymbol{"m"}, e12)), "v1 m v2*");
  EXPECT_THROW(conjugate_amplified(3, std::nullopt, id), std::invalid_argument);

  std::mt19937 rng(4);
  std::uniform_int_distribution<int> c(-4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<ExactComplex>> T(3, std::vector<ExactComplex>(3)), Ts = T;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) T[i][j] = ExactComplex(Rational(c(rng), 3), Rational(c(rng)));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) Ts[j][i] = CoeffTraits<ExactComplex>::conj(T[i][j]);
    const auto lhs = conjugate_amplified(3, FormalSymbol{"m"}, T).adjoint();
    const auto rhs = conjugate_amplified(3, FormalSymbol{"m", true}, Ts);
    EXPECT_EQ(equals(lhs, rhs), Equality::Equal);
  }
}

TEST(Cuntz, EndofunctorExamples) {
  const int n = 2;
  std::mt19937 rng(5);
  const auto A = random_matrix(n, 2, 2, rng);
  EXPECT_EQ(equals(amp_endofunctor(CuntzEndomorphism::identity(n), A), A), Equality::Equal);

  const auto swap = CuntzEndomorphism::lambda(P(n, "v2 v1* + v1 v2*"));
  EXPECT_EQ(to_string(swap.images()[0]), "v2");

  CuntzMatrix row(n, 1, n);
  for (int i = 0; i < n; ++i) row(0, i) = CuntzElement::generator(n, i + 1);
  const auto lifted = amp_endofunctor(swap, row);
  EXPECT_EQ(equals(lifted * lifted.adjoint(), CuntzMatrix::identity(n, 1)), Equality::Equal);
  EXPECT_EQ(equals(lifted.adjoint() * lifted, CuntzMatrix::identity(n, n)), Equality::Equal);

  EXPECT_THROW(CuntzEndomorphism::lambda(P(n, "v1 v1*")), InvalidEndomorphism);
  EXPECT_THROW(CuntzEndomorphism(n, {P(n, "v1"), P(n, "v1")}), InvalidEndomorphism);
  EXPECT_THROW(swap.apply(P(n, "m")), UnsupportedExpression);
}

TEST(Cuntz, EndofunctorIsFunctorial) {
  std::mt19937 rng(6);
  const int n = 2;
  const std::vector<CuntzEndomorphism> rhos{
      CuntzEndomorphism::lambda(P(n, "v2 v1* + v1 v2*")),
      CuntzEndomorphism::lambda(P(n, "(i) v1 v1* + (-1) v2 v2*")),
      CuntzEndomorphism::lambda(P(n, "v12 v11* + v11 v12* + v21 v21* + (-i) v22 v22*")),
  };
  for (const auto& rho : rhos)
    for (const auto& sig : rhos)
      for (int trial = 0; trial < 4; ++trial) {
        const auto A = random_matrix(n, 2, 3, rng), B = random_matrix(n, 3, 2, rng);
        EXPECT_EQ(equals(amp_endofunctor(rho, A * B), amp_endofunctor(rho, A) * amp_endofunctor(rho, B)), Equality::Equal);
        EXPECT_EQ(equals(amp_endofunctor(rho, A.adjoint()), amp_endofunctor(rho, A).adjoint()), Equality::Equal);
        EXPECT_EQ(equals(amp_endofunctor(rho.after(sig), A), amp_endofunctor(rho, amp_endofunctor(sig, A))),
                  Equality::Equal);
        const auto a = random_element(n, rng);
        EXPECT_EQ(equals(rho.apply(a), rho.apply(perturb(a, rng))), Equality::Equal);
      }
}

TEST(Cuntz, ParsePrintRoundTrip) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 3;
    const auto a = random_element(n, rng);
    EXPECT_EQ(P(n, to_string(a)).terms(), a.terms()) << to_string(a);
  }
  const auto big = CuntzElement::word(12, {10, 2}, {12}, ExactComplex(Rational(1, 2), -3));
  EXPECT_EQ(to_string(big), "(1/2-3i) v[10,2] v[12]*");
  EXPECT_EQ(parse_cuntz(12, to_string(big)).terms(), big.terms());
  EXPECT_EQ(to_string(P(2, "v1 v2* + (1/2) v12 v21*")), "v1 v2* + (1/2) v12 v21*");
  EXPECT_EQ(to_string(P(2, "(i) 1 - (2) v1 v1*")), "(i) 1 + (-2) v1 v1*");
  EXPECT_EQ(ExactComplex::parse("1/2-3i"), ExactComplex(Rational(1, 2), -3));
  EXPECT_EQ(ExactComplex::parse("-i"), ExactComplex(0, -1));
}

TEST(Cuntz, ParseErrors) {
  EXPECT_THROW(P(2, ""), ParseError);
  EXPECT_THROW(P(2, "v3"), ParseError);
  EXPECT_THROW(P(2, "v1 +"), ParseError);
  EXPECT_THROW(P(2, "(1/2 v1"), ParseError);
  EXPECT_THROW(P(2, "(x) v1"), ParseError);
  EXPECT_THROW(P(2, "v1 # v2"), ParseError);
  try {
    P(2, "v1 v3");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position, 5u);
  }
}

TEST(Cuntz, FloatModeMatchesExact) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_element(2, rng), b = random_element(2, rng);
    const auto fa = to_float(a), fb = to_float(b);
    EXPECT_EQ(equals(fa * fb, to_float(a * b)), Equality::Equal);
    EXPECT_EQ(equals(fa, to_float(perturb(a, rng))), Equality::Equal);
  }
}
