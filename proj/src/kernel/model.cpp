#include <cmath>
#include <numeric>
#include <sstream>

#include "gkernel/kernel.hpp"

namespace gkernel {

namespace {

constexpr double kUnitaryTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

NumericKernelModel::NumericKernelModel(FiniteGroup group, int d, std::vector<CMatrix> unitaries, Cochain b)
    : group_(std::move(group)), d_(d), V_(std::move(unitaries)), b_(std::move(b)) {
  const int n = group_.order();
  if (d_ < 1) throw std::invalid_argument("model dimension must be positive");
  if (static_cast<int>(V_.size()) != n)
    throw std::invalid_argument("model needs " + std::to_string(n) + " unitaries, got " + std::to_string(V_.size()));
  if (b_.degree() != 2 || !(b_.group() == group_))
    throw std::invalid_argument("model scalar cochain must be a 2-cochain on the model group");
  const CMatrix I = CMatrix::Identity(d_, d_);
  for (int g = 0; g < n; ++g) {
    const auto& v = V_[static_cast<std::size_t>(g)];
    if (v.rows() != d_ || v.cols() != d_)
      throw std::invalid_argument("V_" + std::to_string(g) + " is not " + std::to_string(d_) + "x" + std::to_string(d_));
    const double dev = op_norm(v.adjoint() * v - I);
    if (!(dev <= kUnitaryTol))
      throw std::invalid_argument("V_" + std::to_string(g) + " is not unitary (deviation " + fmt(dev) + ")");
  }
  const double dev_e = op_norm(V_[0] - I);
  if (!(dev_e <= kUnitaryTol)) throw std::invalid_argument("V_e must be the identity (deviation " + fmt(dev_e) + ")");
  u_.reserve(static_cast<std::size_t>(n * n));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      u_.push_back(b_(g, h).value() * (V(g) * V(h) * V(group_.mul(g, h)).adjoint()));
}

CMatrix NumericKernelModel::alpha(int g, const CMatrix& m) const { return V(g) * m * V(g).adjoint(); }

NumericKernelModel NumericKernelModel::with_u_override(int g, int h, const CMatrix& u) const {
  if (!group_.contains(g) || !group_.contains(h)) throw std::out_of_range("u override index out of range");
  if (u.rows() != d_ || u.cols() != d_) throw std::invalid_argument("u override has the wrong size");
  NumericKernelModel copy = *this;
  copy.u_[static_cast<std::size_t>(g * group_.order() + h)] = u;
  return copy;
}

NumericKernelModel make_model(const FiniteGroup& group, int d, std::vector<CMatrix> V, const Cochain& b) {
  return NumericKernelModel(group, d, std::move(V), b);
}

CMatrix diag_unitary(const std::vector<Phase>& phases) {
  const auto n = static_cast<Eigen::Index>(phases.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = phases[static_cast<std::size_t>(i)].value();
  return m;
}

CMatrix permutation_unitary(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(perm.size(), false);
  CMatrix m = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const int i = perm[static_cast<std::size_t>(j)];
    if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)])
      throw std::invalid_argument("permutation entry " + std::to_string(i) + " is invalid");
    seen[static_cast<std::size_t>(i)] = true;
    m(i, j) = 1.0;
  }
  return m;
}

CMatrix fourier_unitary(int d) {
  CMatrix m(d, d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = s * Phase(static_cast<std::int64_t>(i) * j, d).value();
  return m;
}

CMatrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  CMatrix z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = {N(rng), N(rng)};
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases of R's diagonal so the distribution is Haar.
  for (int j = 0; j < d; ++j) {
    const auto rjj = r(j, j);
    if (std::abs(rjj) > 0) q.col(j) *= rjj / std::abs(rjj);
  }
  // One re-orthonormalization pass keeps V*V − 1 well below 1e-12.
  Eigen::HouseholderQR<CMatrix> again(q);
  CMatrix q2 = again.householderQ();
  const CMatrix r2 = again.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const auto rjj = r2(j, j);
    if (std::abs(rjj) > 0) q2.col(j) *= rjj / std::abs(rjj);
  }
  return q2;
}

Cochain random_cochain2(const FiniteGroup& group, std::int64_t denominator, std::mt19937_64& rng) {
  if (denominator < 1) throw std::invalid_argument("random cochain denominator must be positive");
  std::uniform_int_distribution<std::int64_t> pick(0, denominator - 1);
  const int n = group.order();
  std::vector<Phase> v(static_cast<std::size_t>(n * n));
  for (int g = 1; g < n; ++g)
    for (int h = 1; h < n; ++h) v[static_cast<std::size_t>(g * n + h)] = Phase(pick(rng), denominator);
  return Cochain(group, 2, std::move(v));
}

NumericKernelModel random_model(const FiniteGroup& group, int d, std::int64_t denominator, std::mt19937_64& rng) {
  std::vector<CMatrix> V;
  V.push_back(CMatrix::Identity(d, d));
  for (int g = 1; g < group.order(); ++g) V.push_back(random_unitary(d, rng));
  return NumericKernelModel(group, d, std::move(V), random_cochain2(group, denominator, rng));
}

CMatrix matrix_unit(int n, int i, int j) {
  CMatrix m = CMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

CMatrix embed(const CMatrix& op, const std::vector<int>& in_dims, const std::vector<int>& out_dims,
              const std::vector<int>& slots) {
  const std::size_t k = in_dims.size();
  if (out_dims.size() != k) throw std::invalid_argument("embed: dimension lists differ in length");
  std::vector<bool> selected(k, false);
  for (int s : slots) {
    if (s < 0 || static_cast<std::size_t>(s) >= k) throw std::invalid_argument("embed: slot out of range");
    selected[static_cast<std::size_t>(s)] = true;
  }
  for (std::size_t i = 0; i < k; ++i)
    if (!selected[i] && in_dims[i] != out_dims[i]) throw std::invalid_argument("embed: unselected slot changes size");

  // Significance order: slots 1..k-1 (most to least), then slot 0.
  std::vector<std::size_t> order;
  for (std::size_t i = 1; i < k; ++i) order.push_back(i);
  if (k) order.push_back(0);

  auto total = [&](const std::vector<int>& dims, bool only_selected) {
    long n = 1;
    for (std::size_t i = 0; i < k; ++i)
      if (!only_selected || selected[i]) n *= dims[i];
    return n;
  };
  const long rows = total(out_dims, false), cols = total(in_dims, false);
  if (op.rows() != total(out_dims, true) || op.cols() != total(in_dims, true))
    throw std::invalid_argument("embed: operator size does not match the selected slots");

  auto digits = [&](long idx, const std::vector<int>& dims) {
    std::vector<int> dg(k);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      dg[*it] = static_cast<int>(idx % dims[*it]);
      idx /= dims[*it];
    }
    return dg;
  };
  auto sub_index = [&](const std::vector<int>& dg, const std::vector<int>& dims) {
    long idx = 0;
    for (std::size_t i : order)
      if (selected[i]) idx = idx * dims[i] + dg[i];
    return idx;
  };
  auto rest_index = [&](const std::vector<int>& dg, const std::vector<int>& dims) {
    long idx = 0;
    for (std::size_t i : order)
      if (!selected[i]) idx = idx * dims[i] + dg[i];
    return idx;
  };

  std::vector<long> row_sub(static_cast<std::size_t>(rows)), row_rest(static_cast<std::size_t>(rows));
  for (long r = 0; r < rows; ++r) {
    const auto dg = digits(r, out_dims);
    row_sub[static_cast<std::size_t>(r)] = sub_index(dg, out_dims);
    row_rest[static_cast<std::size_t>(r)] = rest_index(dg, out_dims);
  }
  CMatrix full = CMatrix::Zero(rows, cols);
  for (long c = 0; c < cols; ++c) {
    const auto dg = digits(c, in_dims);
    const long cs = sub_index(dg, in_dims), cr = rest_index(dg, in_dims);
    for (long r = 0; r < rows; ++r)
      if (row_rest[static_cast<std::size_t>(r)] == cr) full(r, c) = op(row_sub[static_cast<std::size_t>(r)], cs);
  }
  return full;
}

CMatrix embed(const CMatrix& op, const std::vector<int>& dims, const std::vector<int>& slots) {
  return embed(op, dims, dims, slots);
}

CMatrix u_pair(const NumericKernelModel& model, int g, int h) { return model.u(g, h); }

Cochain measure_omega(const NumericKernelModel& model) {
  const auto& G = model.group();
  const int n = G.order();
  const double d = model.d();
  std::int64_t bound = static_cast<std::int64_t>(n) * n * n;
  bound = std::max(bound, denominator_lcm(model.b()));
  std::vector<Phase> values;
  values.reserve(static_cast<std::size_t>(n * n * n));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) {
        const CMatrix L = model.u(g, h) * model.u(G.mul(g, h), k);
        const CMatrix R = model.alpha(g, model.u(h, k)) * model.u(g, G.mul(h, k));
        const std::complex<double> c = (R.adjoint() * L).trace() / d;
        const double residual = op_norm(L - c * R);
        const std::string where = "(" + std::to_string(g) + "," + std::to_string(h) + "," + std::to_string(k) + ")";
        if (!(residual <= 1e-10))
          throw ModelInconsistency("kernel identity sides are not proportional at " + where + ", residual " +
                                   fmt(residual));
        const auto p = Phase::snap(c, bound, 1e-8);
        if (!p) throw ModelInconsistency("kernel identity ratio at " + where + " does not snap to an exact phase");
        values.push_back(*p);
      }
  return Cochain(G, 3, std::move(values));
}

double kernel_identity_residual(const NumericKernelModel& model, const Cochain& omega) {
  const auto& G = model.group();
  const int n = G.order();
  double worst = 0;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) {
        const CMatrix L = model.u(g, h) * model.u(G.mul(g, h), k);
        const CMatrix R = omega(g, h, k).value() * (model.alpha(g, model.u(h, k)) * model.u(g, G.mul(h, k)));
        worst = std::max(worst, op_norm(L - R));
      }
  return worst;
}

double lift_residual(const NumericKernelModel& model) {
  const auto& G = model.group();
  const int n = G.order(), d = model.d();
  double worst = 0;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const CMatrix m = matrix_unit(d, i, j);
          const CMatrix& u = model.u(g, h);
          const CMatrix diff = model.alpha(g, model.alpha(h, m)) - u * model.alpha(G.mul(g, h), m) * u.adjoint();
          worst = std::max(worst, op_norm(diff));
        }
  return worst;
}

}  // namespace gkernel
