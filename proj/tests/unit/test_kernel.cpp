#include <gtest/gtest.h>

#include "gkernel/kernel.hpp"

using namespace gkernel;

namespace {

using C = std::complex<double>;

GradedObject object(const FiniteGroup& G, std::vector<std::pair<double, int>> pts) {
  std::vector<GradedPoint> p;
  for (std::size_t i = 0; i < pts.size(); ++i) p.push_back({"p" + std::to_string(i), pts[i].first, pts[i].second});
  return GradedObject(G, p);
}

GradedObject random_object(const FiniteGroup& G, std::mt19937_64& rng, int size) {
  std::uniform_int_distribution<int> grade(0, G.order() - 1);
  std::uniform_real_distribution<double> weight(0.5, 3.0);
  std::vector<std::pair<double, int>> pts;
  for (int i = 0; i < size; ++i) pts.emplace_back(weight(rng), grade(rng));
  return object(G, pts);
}

NumericKernelModel z2_diag(Phase b11 = Phase()) {
  const auto G = make_cyclic(2);
  std::vector<Phase> b(4);
  b[3] = b11;
  return make_model(G, 2, {CMatrix::Identity(2, 2), diag_unitary({Phase(), Phase(1, 2)})}, Cochain(G, 2, b));
}

NumericKernelModel trivial_model(const FiniteGroup& G, int d) {
  return make_model(G, d, std::vector<CMatrix>(static_cast<std::size_t>(G.order()), CMatrix::Identity(d, d)),
                    Cochain::trivial(G, 2));
}

// Dimension of the null space of a complex matrix by Gaussian elimination
// with partial pivoting.
int null_dimension(CMatrix a, double tol = 1e-9) {
  const int rows = static_cast<int>(a.rows()), cols = static_cast<int>(a.cols());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = rank;
    for (int r = rank + 1; r < rows; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (std::abs(a(piv, c)) < tol) continue;
    a.row(piv).swap(a.row(rank));
    for (int r = rank + 1; r < rows; ++r) {
      const C f = a(r, c) / a(rank, c);
      if (f != C(0)) a.row(r) -= f * a.row(rank);
    }
    ++rank;
  }
  return cols - rank;
}

// The intertwiner equations written out entry by entry, independent of the
// Kronecker formulation used by the library.
int intertwiner_dim_by_elimination(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y) {
  const int d = model.d(), nx = d * x.size(), ny = d * y.size();
  if (nx == 0 || ny == 0) return 0;
  CMatrix A = CMatrix::Zero(d * d * ny * nx, ny * nx);
  int row = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMatrix sx = CMatrix::Zero(nx, nx), sy = CMatrix::Zero(ny, ny);
      const CMatrix m = matrix_unit(d, i, j);
      for (int p = 0; p < x.size(); ++p) sx.block(p * d, p * d, d, d) = model.V(x.grade(p)) * m * model.V(x.grade(p)).adjoint();
      for (int q = 0; q < y.size(); ++q) sy.block(q * d, q * d, d, d) = model.V(y.grade(q)) * m * model.V(y.grade(q)).adjoint();
      // (T sx − sy T)(r, c) = Σ_k T(r,k) sx(k,c) − Σ_k sy(r,k) T(k,c); unknown T(r,c) at r*nx + c.
      for (int r = 0; r < ny; ++r)
        for (int c = 0; c < nx; ++c, ++row) {
          for (int k = 0; k < nx; ++k) A(row, r * nx + k) += sx(k, c);
          for (int k = 0; k < ny; ++k) A(row, k * nx + c) -= sy(r, k);
        }
    }
  return null_dimension(A);
}

}  // namespace

TEST(Model, TrivialModelHasTrivialData) {
  const auto m = trivial_model(make_cyclic(3), 2);
  for (int g = 0; g < 3; ++g)
    for (int h = 0; h < 3; ++h) EXPECT_EQ(u_pair(m, g, h), CMatrix::Identity(2, 2));
  EXPECT_TRUE(measure_omega(m).is_trivial());
}

TEST(Model, Z2DiagExample) {
  const auto m = z2_diag();
  EXPECT_LT(op_norm(u_pair(m, 1, 1) - CMatrix::Identity(2, 2)), 1e-15);
  EXPECT_EQ(u_pair(m, 0, 1), CMatrix::Identity(2, 2));
}

TEST(Model, RejectsBadUnitaries) {
  const auto G = make_cyclic(2);
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 0) = 1.1;
  try {
    make_model(G, 2, {CMatrix::Identity(2, 2), bad}, Cochain::trivial(G, 2));
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("V_1"), std::string::npos);
  }
  EXPECT_THROW(make_model(G, 2, {diag_unitary({Phase(), Phase(1, 2)}), CMatrix::Identity(2, 2)}, Cochain::trivial(G, 2)),
               std::invalid_argument);
  EXPECT_THROW(make_model(G, 2, {CMatrix::Identity(2, 2)}, Cochain::trivial(G, 2)), std::invalid_argument);
}

TEST(Model, NamedUnitaries) {
  EXPECT_EQ(permutation_unitary({1, 0}) * permutation_unitary({1, 0}), CMatrix::Identity(2, 2));
  const auto f = fourier_unitary(3);
  EXPECT_LT(op_norm(f.adjoint() * f - CMatrix::Identity(3, 3)), 1e-14);
  EXPECT_THROW(permutation_unitary({0, 0}), std::invalid_argument);
  std::mt19937_64 rng(1);
  for (int d = 1; d <= 4; ++d) {
    const auto u = random_unitary(d, rng);
    EXPECT_LT(op_norm(u.adjoint() * u - CMatrix::Identity(d, d)), 1e-13);
  }
}

TEST(Model, ConjugationIdentity) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_model(make_cyclic(3), 3, 6, rng);
    EXPECT_LT(lift_residual(m), 1e-10);
    const CMatrix x = CMatrix::Random(3, 3);
    for (int g = 0; g < 3; ++g)
      for (int h = 0; h < 3; ++h) {
        const auto& u = u_pair(m, g, h);
        EXPECT_LT(op_norm(u * m.alpha((g + h) % 3, x) * u.adjoint() - m.alpha(g, m.alpha(h, x))), 1e-10);
      }
  }
}

TEST(MeasureOmega, EqualsCoboundary) {
  EXPECT_TRUE(measure_omega(z2_diag()).is_trivial());
  const auto m = z2_diag(Phase(1, 2));
  const auto w = measure_omega(m);
  EXPECT_EQ(w, coboundary(m.b()));
  const auto& b = m.b();
  EXPECT_EQ(w(1, 1, 0), b(1, 1) * b(0, 0) / b(1, 1) / b(1, 0));
  std::mt19937_64 rng(3);
  for (const auto& G : {make_cyclic(2), make_cyclic(3), make_cyclic(4), direct_product(make_cyclic(2), make_cyclic(2))})
    for (int d : {1, 2, 3}) {
      const auto model = random_model(G, d, 2 * G.order(), rng);
      const auto omega = measure_omega(model);
      EXPECT_EQ(omega, coboundary(model.b()));
      EXPECT_TRUE(is_cocycle(omega));
      EXPECT_LT(kernel_identity_residual(model, omega), 1e-10);
    }
}

TEST(MeasureOmega, MutantIsInconsistent) {
  std::mt19937_64 rng(4);
  const auto model = random_model(make_cyclic(3), 2, 3, rng);
  const auto mutant = model.with_u_override(1, 2, model.u(1, 2) * diag_unitary({Phase(1, 2), Phase()}));
  EXPECT_THROW(measure_omega(mutant), ModelInconsistency);
}

TEST(Embed, MatchesExplicitIndexing) {
  std::mt19937_64 rng(5);
  const std::vector<int> dims{2, 3, 2};
  auto index = [&](int i, int a, int b) { return (a * dims[2] + b) * dims[0] + i; };
  const CMatrix op_m = CMatrix::Random(2, 2), op_a = CMatrix::Random(3, 3), op_b = CMatrix::Random(2, 2);
  const CMatrix op_ma = CMatrix::Random(6, 6);
  const CMatrix e_m = embed(op_m, dims, {0}), e_a = embed(op_a, dims, {1}), e_b = embed(op_b, dims, {2});
  const CMatrix e_ma = embed(op_ma, dims, {0, 1});
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 2; ++b)
        for (int i2 = 0; i2 < 2; ++i2)
          for (int a2 = 0; a2 < 3; ++a2)
            for (int b2 = 0; b2 < 2; ++b2) {
              const int r = index(i, a, b), c = index(i2, a2, b2);
              EXPECT_EQ(e_m(r, c), (a == a2 && b == b2) ? op_m(i, i2) : C(0));
              EXPECT_EQ(e_a(r, c), (i == i2 && b == b2) ? op_a(a, a2) : C(0));
              EXPECT_EQ(e_b(r, c), (i == i2 && a == a2) ? op_b(b, b2) : C(0));
              EXPECT_EQ(e_ma(r, c), b == b2 ? op_ma(a * 2 + i, a2 * 2 + i2) : C(0));
            }
  // rectangular: t : A(3) -> A'(1) on slot 1
  const CMatrix t = CMatrix::Random(1, 3);
  const CMatrix e_t = embed(t, dims, {2, 1, 2}, {1});
  EXPECT_EQ(e_t.rows(), 4);
  EXPECT_EQ(e_t.cols(), 12);
  EXPECT_EQ(e_t(1 * 2 + 1, index(1, 2, 1)), t(0, 2));
}

TEST(Sigma, Examples) {
  const auto m = z2_diag();
  const auto& G = m.group();
  const auto x = object(G, {{1, 0}, {1, 1}});
  EXPECT_EQ(sigma(m, x, CMatrix::Identity(2, 2)), CMatrix::Identity(4, 4));
  const CMatrix r = CMatrix::Random(2, 2);
  EXPECT_EQ(sigma(m, object(G, {{1, 0}}), r), r);
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 1) = 1.0;
  expected(2, 3) = -1.0;
  EXPECT_LT(op_norm(sigma(m, x, matrix_unit(2, 0, 1)) - expected), 1e-15);
  EXPECT_THROW(sigma(m, x, CMatrix::Identity(3, 3)), std::invalid_argument);
}

TEST(Sigma, IsUnitalStarHomomorphism) {
  std::mt19937_64 rng(6);
  const auto model = random_model(make_cyclic(4), 2, 8, rng);
  const auto x = random_object(model.group(), rng, 3);
  EXPECT_LT(op_norm(sigma(model, x, CMatrix::Identity(2, 2)) - CMatrix::Identity(6, 6)), 1e-12);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const CMatrix a = matrix_unit(2, i / 2, i % 2), b = matrix_unit(2, j / 2, j % 2);
      EXPECT_LT(op_norm(sigma(model, x, a * b) - sigma(model, x, a) * sigma(model, x, b)), 1e-10);
      EXPECT_LT(op_norm(sigma(model, x, a.adjoint()) - sigma(model, x, a).adjoint()), 1e-10);
    }
}

TEST(SigmaTensor, ResidualsAndMutant) {
  const auto triv = trivial_model(make_cyclic(2), 2);
  const auto G2 = triv.group();
  EXPECT_EQ(verify_sigma_tensor(triv, object(G2, {{1, 0}, {1, 1}}), object(G2, {{1, 1}})), 0.0);
  std::mt19937_64 rng(7);
  const auto G = make_cyclic(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto model = random_model(G, 2, 9, rng);
    const auto x = random_object(G, rng, 2), y = random_object(G, rng, 2);
    EXPECT_LE(verify_sigma_tensor(model, x, y), 1e-10);
    EXPECT_GE(verify_sigma_tensor(model, x, y, corrupted_u_object(model, x, y)), 0.5);
    const CMatrix u = u_object(model, x, y);
    EXPECT_LT(op_norm(u.adjoint() * u - CMatrix::Identity(u.rows(), u.rows())), 1e-12);
  }
  const auto e = object(G, {{1, 0}, {2, 0}});
  EXPECT_EQ(u_object(random_model(G, 2, 3, rng), e, e), CMatrix::Identity(8, 8));
}

TEST(PentagonSigma, Examples) {
  const auto triv = trivial_model(make_cyclic(2), 2);
  const auto x2 = object(triv.group(), {{1, 0}, {1, 1}});
  EXPECT_EQ(verify_pentagon_sigma(triv, x2, x2, x2), 0.0);

  const auto m = z2_diag(Phase(1, 2));
  const auto one = object(m.group(), {{1, 1}});
  EXPECT_LE(verify_pentagon_sigma(m, one, one, one), 1e-12);

  std::mt19937_64 rng(8);
  const auto G = make_cyclic(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto model = random_model(G, 2, 16, rng);
    const auto x = random_object(G, rng, 2), y = random_object(G, rng, 2), z = random_object(G, rng, 2);
    EXPECT_LE(verify_pentagon_sigma(model, x, y, z), 1e-10);
    // Blockwise oracle for the left side: u_{gx,gy} u_{gxgy,gz} on block (x,y,z).
    const auto sides = pentagon_sigma_sides(model, x, y, z, measure_omega(model));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          const int at = ((a * 2 + b) * 2 + c) * 2;
          const int gx = x.grade(a), gy = y.grade(b), gz = z.grade(c);
          const CMatrix want = model.u(gx, gy) * model.u(G.mul(gx, gy), gz);
          EXPECT_LT(op_norm(sides.lhs.block(at, at, 2, 2) - want), 1e-12);
        }
  }
}

TEST(Intertwiners, Examples) {
  const auto m = z2_diag();
  const auto& G = m.group();
  const auto e = object(G, {{1, 0}}), one = object(G, {{1, 1}});
  EXPECT_EQ(intertwiners(m, e, e).size(), 1u);
  const auto t = intertwiners(m, e, one);
  ASSERT_EQ(t.size(), 1u);
  const CMatrix V1 = m.V(1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const CMatrix u = matrix_unit(2, i, j);
      EXPECT_LT(op_norm(V1 * sigma(m, e, u) - sigma(m, one, u) * V1), 1e-14);
      EXPECT_LT(op_norm(t[0] * sigma(m, e, u) - sigma(m, one, u) * t[0]), 1e-10);
    }
  EXPECT_TRUE(intertwiners(m, e, object(G, {})).empty());
}

TEST(Intertwiners, OrthonormalAndMatchElimination) {
  std::mt19937_64 rng(9);
  for (const auto& G : {make_cyclic(2), make_cyclic(3)})
    for (int d : {1, 2, 3})
      for (int trial = 0; trial < 3; ++trial) {
        const auto model = random_model(G, d, 6, rng);
        const auto x = random_object(G, rng, 1 + trial % 2), y = random_object(G, rng, 1 + (trial + 1) % 3);
        const auto basis = intertwiners(model, x, y);
        EXPECT_EQ(static_cast<int>(basis.size()), intertwiner_dim_by_elimination(model, x, y));
        EXPECT_EQ(static_cast<int>(basis.size()), x.size() * y.size());
        for (std::size_t i = 0; i < basis.size(); ++i)
          for (std::size_t j = 0; j < basis.size(); ++j) {
            const C ip = (basis[i].adjoint() * basis[j]).trace();
            EXPECT_LT(std::abs(ip - C(i == j ? 1.0 : 0.0)), 1e-10);
          }
      }
}

TEST(Intertwiners, BruteForceGridForSmallModels) {
  // With V in {1, diag(1,-1), swap} the solution space is spanned by
  // single-block matrices whose entries lie in {0, ±1}; σ_X and σ_Y are
  // block diagonal so single-block solutions span everything.
  const auto G = make_cyclic(2);
  const std::vector<CMatrix> choices{diag_unitary({Phase(), Phase(1, 2)}), permutation_unitary({1, 0})};
  for (const auto& v1 : choices) {
    const auto model = make_model(G, 2, {CMatrix::Identity(2, 2), v1}, Cochain::trivial(G, 2));
    for (int sx = 1; sx <= 2; ++sx)
      for (int sy = 1; sy <= 2; ++sy)
        for (int gmask = 0; gmask < (1 << (sx + sy)); ++gmask) {
          std::vector<std::pair<double, int>> px, py;
          for (int i = 0; i < sx; ++i) px.emplace_back(1.0, gmask >> i & 1);
          for (int i = 0; i < sy; ++i) py.emplace_back(2.0, gmask >> (sx + i) & 1);
          const auto x = object(G, px), y = object(G, py);
          std::vector<CVector> found;
          for (int bx = 0; bx < sx; ++bx)
            for (int by = 0; by < sy; ++by)
              for (int code = 0; code < 81; ++code) {
                CMatrix T = CMatrix::Zero(2 * sy, 2 * sx);
                int c = code;
                for (int e = 0; e < 4; ++e, c /= 3) T(2 * by + e / 2, 2 * bx + e % 2) = double(c % 3) - 1.0;
                bool ok = true;
                for (int e = 0; e < 4 && ok; ++e) {
                  const CMatrix u = matrix_unit(2, e / 2, e % 2);
                  ok = (T * sigma(model, x, u) - sigma(model, y, u) * T).norm() < 1e-12;
                }
                if (ok) found.push_back(Eigen::Map<const CVector>(T.data(), T.size()));
              }
          CMatrix span(4 * sx * sy, static_cast<Eigen::Index>(found.size()));
          for (std::size_t i = 0; i < found.size(); ++i) span.col(static_cast<Eigen::Index>(i)) = found[i];
          Eigen::FullPivLU<CMatrix> lu(span);
          EXPECT_EQ(static_cast<int>(lu.rank()), static_cast<int>(intertwiners(model, x, y).size()));
        }
  }
}

TEST(Intertwiners, WeightRescalingInvariant) {
  std::mt19937_64 rng(10);
  const auto G = make_cyclic(3);
  const auto model = random_model(G, 2, 3, rng);
  const auto x = object(G, {{1, 0}, {2, 1}}), y = object(G, {{1, 2}});
  const auto xs = object(G, {{7, 0}, {0.1, 1}}), ys = object(G, {{3.5, 2}});
  EXPECT_EQ(intertwiners(model, x, y).size(), intertwiners(model, xs, ys).size());
}

TEST(Minimality, TrivialGroupIsVacuouslyMinimal) {
  const auto model = trivial_model(make_cyclic(1), 2);
  const auto rep = minimality_report(model, {1.0});
  EXPECT_TRUE(rep.minimal());
  EXPECT_TRUE(rep.condition_i.empty());
  EXPECT_TRUE(rep.conditions_agree);
  EXPECT_THROW(minimality_report(model, {0.0}), std::invalid_argument);
  EXPECT_THROW(minimality_report(model, {1.0, 1.0}), std::invalid_argument);
}

TEST(Minimality, MatrixModelsAreNotMinimal) {
  std::mt19937_64 rng(11);
  for (const auto& G : {make_cyclic(2), make_cyclic(3), make_cyclic(4), direct_product(make_cyclic(2), make_cyclic(2))}) {
    const auto model = random_model(G, 2, 4, rng);
    std::vector<double> mu(static_cast<std::size_t>(G.order()), 0.5);
    const auto rep = minimality_report(model, mu);
    EXPECT_EQ(rep.verdict(), "not minimal");
    EXPECT_TRUE(rep.conditions_agree);
    EXPECT_TRUE(rep.exhaustive);
    EXPECT_FALSE(rep.functor_full);
    for (const auto& r : rep.condition_i) {
      EXPECT_GE(r.intertwiner_dim, 1);
      EXPECT_EQ(r.intertwiner_dim, static_cast<int>(r.e.size() * r.f.size()));
      EXPECT_EQ(r.hom_dim, 0);
    }
  }
}

TEST(Minimality, SamplesBeyondCutoff) {
  std::mt19937_64 rng(12);
  const auto G = make_cyclic(6);
  const auto model = random_model(G, 1, 6, rng);
  const auto rep = minimality_report(model, std::vector<double>(6, 1.0), 5, 10);
  EXPECT_FALSE(rep.exhaustive);
  EXPECT_EQ(rep.condition_i.size(), 10u);
  EXPECT_FALSE(rep.minimal());
}

TEST(Functor, ImageAndResidual) {
  std::mt19937_64 rng(13);
  const auto G = make_cyclic(3);
  const auto model = random_model(G, 2, 3, rng);
  const auto x = object(G, {{1, 0}, {1, 1}, {2, 1}});
  const GradedMap id(x, x, CMatrix::Identity(3, 3));
  const auto f = functor_F_sigma(model, id);
  EXPECT_EQ(f.image, CMatrix::Identity(6, 6));
  EXPECT_EQ(f.intertwiner_residual, 0.0);
  for (const auto& t : hom_basis(x, x)) EXPECT_EQ(functor_F_sigma(model, t).intertwiner_residual, 0.0);
  EXPECT_TRUE(functor_F_faithful(model, x, x));
  EXPECT_THROW(GradedMap(x, x, CMatrix::Ones(3, 3)), std::invalid_argument);
}

TEST(Functor, PreservesComposition) {
  std::mt19937_64 rng(14);
  const auto G = make_cyclic(2);
  const auto model = random_model(G, 2, 2, rng);
  auto random_map = [&](const GradedObject& a, const GradedObject& b) {
    CMatrix m = CMatrix::Zero(b.size(), a.size());
    for (const auto& e : hom_basis(a, b)) m += C(double(rng() % 5) - 2, double(rng() % 3) - 1) * e.matrix();
    return GradedMap(a, b, m);
  };
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_object(G, rng, 2), y = random_object(G, rng, 3), z = random_object(G, rng, 2);
    const auto t1 = random_map(x, y), t2 = random_map(y, z);
    const CMatrix lhs = functor_F_sigma(model, compose(t2, t1)).image;
    const CMatrix rhs = functor_F_sigma(model, t2).image * functor_F_sigma(model, t1).image;
    EXPECT_LT((lhs - rhs).norm(), 1e-12);
    EXPECT_LE(functor_F_sigma(model, t1).intertwiner_residual, 1e-10);
    EXPECT_LE(tensorator_naturality(model, t1, z, 0), 1e-10);
    EXPECT_LE(tensorator_naturality(model, t1, z, 1), 1e-10);
  }
}
