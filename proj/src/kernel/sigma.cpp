#include <algorithm>

#include "gkernel/kernel.hpp"

namespace gkernel {

namespace {

void require_group(const NumericKernelModel& model, const GradedObject& x) {
  if (!(model.group() == x.group())) throw std::invalid_argument("object and model live over different groups");
}

CMatrix one_tensor(const CMatrix& t, int d) {
  return Eigen::kroneckerProduct(t, CMatrix::Identity(d, d));
}

}  // namespace

CMatrix sigma(const NumericKernelModel& model, const GradedObject& x, const CMatrix& m) {
  require_group(model, x);
  const int d = model.d();
  if (m.rows() != d || m.cols() != d)
    throw std::invalid_argument("sigma: expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  CMatrix out = CMatrix::Zero(d * x.size(), d * x.size());
  for (int i = 0; i < x.size(); ++i) out.block(i * d, i * d, d, d) = model.alpha(x.grade(i), m);
  return out;
}

CMatrix sigma_lift(const NumericKernelModel& model, const GradedObject& x, const CMatrix& t, int a_size) {
  require_group(model, x);
  const int d = model.d();
  const int inner = a_size * d;
  if (t.rows() != inner || t.cols() != inner) throw std::invalid_argument("sigma_lift: operator size mismatch");
  CMatrix out = CMatrix::Zero(x.size() * inner, x.size() * inner);
  for (int i = 0; i < x.size(); ++i) {
    const CMatrix w = Eigen::kroneckerProduct(CMatrix::Identity(a_size, a_size), model.V(x.grade(i)));
    out.block(i * inner, i * inner, inner, inner) = w * t * w.adjoint();
  }
  return out;
}

CMatrix u_object(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y) {
  require_group(model, x);
  require_group(model, y);
  const int d = model.d();
  const int n = d * x.size() * y.size();
  CMatrix out = CMatrix::Zero(n, n);
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < y.size(); ++j) {
      const int at = (i * y.size() + j) * d;
      out.block(at, at, d, d) = model.u(x.grade(i), y.grade(j));
    }
  return out;
}

CMatrix corrupted_u_object(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y) {
  CMatrix u = u_object(model, x, y);
  if (u.size() == 0) return u;
  if (model.d() < 2) throw std::invalid_argument("corrupted_u_object needs d >= 2 to be visible under conjugation");
  u.col(0) *= -1.0;
  return u;
}

double verify_sigma_tensor(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y,
                           const CMatrix& u_xy) {
  const int d = model.d();
  const auto xy = tensor(x, y);
  const CMatrix one_iota = one_tensor(iota(x, y), d);
  double worst = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const CMatrix m = matrix_unit(d, i, j);
      const CMatrix lhs = sigma_lift(model, x, sigma(model, y, m), y.size());
      const CMatrix rhs = u_xy * one_iota * sigma(model, xy, m) * one_iota.adjoint() * u_xy.adjoint();
      worst = std::max(worst, op_norm(lhs - rhs));
    }
  return worst;
}

double verify_sigma_tensor(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y) {
  return verify_sigma_tensor(model, x, y, u_object(model, x, y));
}

PentagonSides pentagon_sigma_sides(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y,
                                   const GradedObject& z, const Cochain& omega) {
  const int d = model.d();
  const std::vector<int> dims{d, x.size(), y.size(), z.size()};
  const CMatrix one_iota_xy = one_tensor(iota(x, y), d);
  const CMatrix lhs = embed(u_object(model, x, y) * one_iota_xy, dims, {0, 1, 2}) *
                      u_object(model, tensor(x, y), z) * embed(one_iota_xy.adjoint(), dims, {0, 1, 2});
  const CMatrix rhs = one_tensor(associator_phase(x, y, z, omega), d) *
                      sigma_lift(model, x, u_object(model, y, z), y.size() * z.size()) *
                      u_object(model, x, tensor(y, z)) * embed(iota(y, z).adjoint(), dims, {2, 3});
  return {lhs, rhs};
}

double verify_pentagon_sigma(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y,
                             const GradedObject& z) {
  const auto sides = pentagon_sigma_sides(model, x, y, z, measure_omega(model));
  return op_norm(sides.lhs - sides.rhs);
}

std::vector<CMatrix> intertwiners(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y) {
  require_group(model, x);
  require_group(model, y);
  const int d = model.d();
  const int nx = d * x.size(), ny = d * y.size();
  if (nx == 0 || ny == 0) return {};
  const int unknowns = nx * ny;
  CMatrix A(d * d * unknowns, unknowns);
  const CMatrix Ix = CMatrix::Identity(nx, nx), Iy = CMatrix::Identity(ny, ny);
  int block = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j, ++block) {
      const CMatrix m = matrix_unit(d, i, j);
      // vec(T σ_X(m) − σ_Y(m) T) with column-major vec.
      A.middleRows(block * unknowns, unknowns) =
          Eigen::kroneckerProduct(sigma(model, x, m).transpose(), Iy) - Eigen::kroneckerProduct(Ix, sigma(model, y, m));
    }
  Eigen::BDCSVD<CMatrix> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  int rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  std::vector<CMatrix> basis;
  for (int c = rank; c < unknowns; ++c) {
    const CVector v = svd.matrixV().col(c);
    basis.push_back(Eigen::Map<const CMatrix>(v.data(), ny, nx));
  }
  return basis;
}

GradedObject measure_object(const FiniteGroup& group, const std::vector<double>& mu, const std::vector<int>& subset) {
  std::vector<GradedPoint> pts;
  for (int g : subset) pts.push_back({"g" + std::to_string(g), mu[static_cast<std::size_t>(g)], g});
  return GradedObject(group, std::move(pts));
}

MinimalityReport minimality_report(const NumericKernelModel& model, const std::vector<double>& mu, std::uint64_t seed,
                                   int samples) {
  const auto& G = model.group();
  if (static_cast<int>(mu.size()) != G.order())
    throw std::invalid_argument("minimality: need one weight per group element (" + std::to_string(G.order()) + ")");
  MinimalityReport rep;
  for (int g = 0; g < G.order(); ++g) {
    if (mu[static_cast<std::size_t>(g)] < 0) throw std::invalid_argument("minimality: negative weight");
    if (mu[static_cast<std::size_t>(g)] > 0) rep.support.push_back(g);
  }
  if (rep.support.empty()) throw std::invalid_argument("minimality: measure has empty support");
  const int s = static_cast<int>(rep.support.size());

  auto subset = [&](unsigned mask) {
    std::vector<int> out;
    for (int i = 0; i < s; ++i)
      if (mask >> i & 1u) out.push_back(rep.support[static_cast<std::size_t>(i)]);
    return out;
  };
  auto record = [&](unsigned e, unsigned f) {
    PairRecord r{subset(e), subset(f), 0, 0};
    const auto oe = measure_object(G, mu, r.e), of = measure_object(G, mu, r.f);
    r.intertwiner_dim = static_cast<int>(intertwiners(model, oe, of).size());
    r.hom_dim = hom_dimension(oe, of);
    if (r.hom_dim < r.intertwiner_dim) rep.functor_full = false;
    return r;
  };

  const unsigned all = (1u << s) - 1u;
  if (s <= 5) {
    for (unsigned e = 1; e < all; ++e) rep.condition_ii.push_back(record(e, all & ~e));
    for (unsigned e = 1; e <= all; ++e)
      for (unsigned f = 1; f <= all; ++f)
        if ((e & f) == 0) rep.condition_i.push_back(record(e, f));
  } else {
    rep.exhaustive = false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, 2);
    while (static_cast<int>(rep.condition_i.size()) < samples) {
      unsigned e = 0, f = 0;
      for (int i = 0; i < s; ++i) {
        const int c = pick(rng);
        if (c == 1) e |= 1u << i;
        if (c == 2) f |= 1u << i;
      }
      if (e && f) rep.condition_i.push_back(record(e, f));
    }
    std::uniform_int_distribution<unsigned> mask(1, all - 1);
    for (int i = 0; i < samples; ++i) {
      const unsigned e = mask(rng);
      rep.condition_ii.push_back(record(e, all & ~e));
    }
  }
  rep.condition_i_minimal = std::all_of(rep.condition_i.begin(), rep.condition_i.end(),
                                        [](const PairRecord& r) { return r.intertwiner_dim == 0; });
  rep.condition_ii_minimal = std::all_of(rep.condition_ii.begin(), rep.condition_ii.end(),
                                         [](const PairRecord& r) { return r.intertwiner_dim == 0; });
  rep.conditions_agree = rep.condition_i_minimal == rep.condition_ii_minimal;
  return rep;
}

FunctorImage functor_F_sigma(const NumericKernelModel& model, const GradedMap& t) {
  require_group(model, t.source());
  const int d = model.d();
  FunctorImage out{one_tensor(t.matrix(), d), 0.0};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const CMatrix m = matrix_unit(d, i, j);
      const CMatrix diff = out.image * sigma(model, t.source(), m) - sigma(model, t.target(), m) * out.image;
      out.intertwiner_residual = std::max(out.intertwiner_residual, op_norm(diff));
    }
  return out;
}

bool functor_F_faithful(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y) {
  const auto basis = hom_basis(x, y);
  if (basis.empty()) return true;
  const int d = model.d();
  const Eigen::Index len = static_cast<Eigen::Index>(d) * d * x.size() * y.size();
  CMatrix stacked(len, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const CMatrix img = one_tensor(basis[c].matrix(), d);
    stacked.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const CVector>(img.data(), len);
  }
  Eigen::FullPivLU<CMatrix> lu(stacked);
  return lu.rank() == static_cast<Eigen::Index>(basis.size());
}

double tensorator_naturality(const NumericKernelModel& model, const GradedMap& t, const GradedObject& other,
                             int slot) {
  const int d = model.d();
  const auto& x = t.source();
  const auto& xp = t.target();
  if (slot == 0) {
    const std::vector<int> in{d, x.size(), other.size()}, out{d, xp.size(), other.size()};
    const CMatrix tt = embed(t.matrix(), in, out, {1});
    return op_norm(u_object(model, xp, other) * tt - tt * u_object(model, x, other));
  }
  if (slot == 1) {
    const std::vector<int> in{d, other.size(), x.size()}, out{d, other.size(), xp.size()};
    const CMatrix tt = embed(t.matrix(), in, out, {2});
    return op_norm(u_object(model, other, xp) * tt - tt * u_object(model, other, x));
  }
  throw std::invalid_argument("tensorator_naturality: slot must be 0 or 1");
}

}  // namespace gkernel
