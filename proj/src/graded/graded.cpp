#include "gkernel/graded.hpp"

#include <stdexcept>

namespace gkernel {

namespace {

void require_same_group(const GradedObject& a, const GradedObject& b, const char* what) {
  if (!(a.group() == b.group())) throw std::invalid_argument(std::string(what) + ": objects live over different groups");
}

}  // namespace

GradedObject::GradedObject(FiniteGroup group, std::vector<GradedPoint> points)
    : group_(std::move(group)), points_(std::move(points)) {
  for (const auto& p : points_) {
    if (!(p.weight > 0.0))
      throw std::invalid_argument("point '" + p.label + "' has non-positive weight " + std::to_string(p.weight));
    if (!group_.contains(p.grade))
      throw std::invalid_argument("point '" + p.label + "' has grade " + std::to_string(p.grade) +
                                  " outside a group of order " + std::to_string(group_.order()));
  }
}

GradedObject GradedObject::unit(const FiniteGroup& group) {
  return GradedObject(group, {GradedPoint{"*", 1.0, 0}});
}

std::vector<int> GradedObject::fiber(int g) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (grade(i) == g) out.push_back(i);
  return out;
}

GradedMap::GradedMap(GradedObject source, GradedObject target, CMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  require_same_group(source_, target_, "graded map");
  if (matrix_.rows() != target_.size() || matrix_.cols() != source_.size())
    throw std::invalid_argument("graded map matrix is " + std::to_string(matrix_.rows()) + "x" +
                                std::to_string(matrix_.cols()) + ", expected " + std::to_string(target_.size()) +
                                "x" + std::to_string(source_.size()));
  for (int y = 0; y < target_.size(); ++y)
    for (int x = 0; x < source_.size(); ++x)
      if (target_.grade(y) != source_.grade(x) && matrix_(y, x) != std::complex<double>(0.0))
        throw std::invalid_argument("graded map has entry (" + std::to_string(y) + "," + std::to_string(x) +
                                    ") between different grades");
}

int l2_dim(const GradedObject& x) { return x.size(); }

GradedObject tensor(const GradedObject& x, const GradedObject& y) {
  require_same_group(x, y, "tensor");
  std::vector<GradedPoint> pts;
  pts.reserve(static_cast<std::size_t>(x.size() * y.size()));
  for (const auto& a : x.points())
    for (const auto& b : y.points())
      pts.push_back({"(" + a.label + "," + b.label + ")", a.weight * b.weight, x.group().mul(a.grade, b.grade)});
  return GradedObject(x.group(), std::move(pts));
}

std::vector<GradedMap> hom_basis(const GradedObject& x, const GradedObject& y) {
  require_same_group(x, y, "hom_basis");
  std::vector<GradedMap> out;
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < y.size(); ++j)
      if (x.grade(i) == y.grade(j)) {
        CMatrix m = CMatrix::Zero(y.size(), x.size());
        m(j, i) = 1.0;
        out.emplace_back(x, y, std::move(m));
      }
  return out;
}

int hom_dimension(const GradedObject& x, const GradedObject& y) {
  int dim = 0;
  for (int g = 0; g < x.group().order(); ++g)
    dim += static_cast<int>(x.fiber(g).size() * y.fiber(g).size());
  return dim;
}

GradedMap compose(const GradedMap& t2, const GradedMap& t1) {
  const auto& mid1 = t1.target();
  const auto& mid2 = t2.source();
  bool chain = mid1.size() == mid2.size() && mid1.group() == mid2.group();
  for (int i = 0; chain && i < mid1.size(); ++i)
    chain = mid1.grade(i) == mid2.grade(i) && mid1.weight(i) == mid2.weight(i);
  if (!chain) throw std::invalid_argument("compose: target of the first map is not the source of the second");
  return GradedMap(t1.source(), t2.target(), t2.matrix() * t1.matrix());
}

GradedMap adjoint(const GradedMap& t) {
  const auto& x = t.source();
  const auto& y = t.target();
  CMatrix m(x.size(), y.size());
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < y.size(); ++j) m(i, j) = std::conj(t.matrix()(j, i)) * (y.weight(j) / x.weight(i));
  return GradedMap(y, x, std::move(m));
}

std::complex<double> inner(const GradedObject& x, const CVector& xi, const CVector& eta) {
  if (xi.size() != x.size() || eta.size() != x.size()) throw std::invalid_argument("inner: vector length mismatch");
  std::complex<double> s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += x.weight(i) * xi(i) * std::conj(eta(i));
  return s;
}

Pvm pvm(const GradedObject& x) {
  Pvm p;
  for (int g = 0; g < x.group().order(); ++g) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(x.size(), x.size());
    for (int i : x.fiber(g)) e(i, i) = 1.0;
    p.projections.push_back(std::move(e));
  }
  return p;
}

CMatrix iota(const GradedObject& x, const GradedObject& y) {
  require_same_group(x, y, "iota");
  return CMatrix::Identity(x.size() * y.size(), x.size() * y.size());
}

std::vector<Phase> associator_phases(const GradedObject& x, const GradedObject& y, const GradedObject& z,
                                     const Cochain& omega) {
  require_same_group(x, y, "associator");
  require_same_group(y, z, "associator");
  if (!(omega.group() == x.group())) throw std::invalid_argument("associator: cocycle lives over a different group");
  if (!is_cocycle(omega)) throw std::invalid_argument("associator: omega is not a 3-cocycle");
  std::vector<Phase> d;
  d.reserve(static_cast<std::size_t>(x.size() * y.size() * z.size()));
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < y.size(); ++j)
      for (int k = 0; k < z.size(); ++k) d.push_back(omega(x.grade(i), y.grade(j), z.grade(k)));
  return d;
}

CMatrix associator_phase(const GradedObject& x, const GradedObject& y, const GradedObject& z,
                         const Cochain& omega) {
  const auto d = associator_phases(x, y, z, omega);
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i].value();
  return m;
}

CVector alpha_omega_action(const GradedObject& x, const GradedObject& y, const GradedObject& z,
                           const Cochain& omega, const CVector& f, bool inverse) {
  const auto d = associator_phases(x, y, z, omega);
  if (f.size() != static_cast<Eigen::Index>(d.size()))
    throw std::invalid_argument("alpha_omega_action: vector has length " + std::to_string(f.size()) + ", expected " +
                                std::to_string(d.size()));
  // ((x,y),z) and (x,(y,z)) share the flat index x·|Y||Z| + y·|Z| + z.
  CVector out(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const Phase p = inverse ? d[static_cast<std::size_t>(i)].inverse() : d[static_cast<std::size_t>(i)];
    out(i) = p.value() * f(i);
  }
  return out;
}

}  // namespace gkernel
