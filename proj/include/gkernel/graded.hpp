#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gkernel/cochain.hpp"
#include "gkernel/group.hpp"

namespace gkernel {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct GradedPoint {
  std::string label;
  double weight = 1.0;
  int grade = 0;
};

/// A finite weighted set graded by a finite group: the triple (X, μ_X, g_X).
class GradedObject {
 public:
  /// Throws std::invalid_argument on a non-positive weight or a grade that
  /// is not an element of `group`.
  GradedObject(FiniteGroup group, std::vector<GradedPoint> points);

  /// The singleton of weight 1 and identity grade.
  static GradedObject unit(const FiniteGroup& group);

  const FiniteGroup& group() const { return group_; }
  const std::vector<GradedPoint>& points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }
  double weight(int i) const { return points_[static_cast<std::size_t>(i)].weight; }
  int grade(int i) const { return points_[static_cast<std::size_t>(i)].grade; }

  /// Indices of points with grade g.
  std::vector<int> fiber(int g) const;

 private:
  FiniteGroup group_;
  std::vector<GradedPoint> points_;
};

/// A C(G)-equivariant map L²X → L²Y, stored as a |Y|×|X| matrix.
class GradedMap {
 public:
  /// Throws std::invalid_argument if the matrix has the wrong shape or a
  /// nonzero entry between points of different grade.
  GradedMap(GradedObject source, GradedObject target, CMatrix matrix);

  const GradedObject& source() const { return source_; }
  const GradedObject& target() const { return target_; }
  const CMatrix& matrix() const { return matrix_; }

 private:
  GradedObject source_;
  GradedObject target_;
  CMatrix matrix_;
};

/// Grade-fiber projections E_X(g), one per group element.
struct Pvm {
  std::vector<Eigen::MatrixXd> projections;
};

int l2_dim(const GradedObject& x);

/// Points in row-major pair order; weights and grades multiply.
GradedObject tensor(const GradedObject& x, const GradedObject& y);

/// Matrix units e_{y,x} for every grade-matching pair, ordered by (x, y).
std::vector<GradedMap> hom_basis(const GradedObject& x, const GradedObject& y);

/// Σ_g |X_g|·|Y_g|.
int hom_dimension(const GradedObject& x, const GradedObject& y);

/// t2 ∘ t1. Throws std::invalid_argument when the objects do not chain.
GradedMap compose(const GradedMap& t2, const GradedMap& t1);

/// Adjoint for the weighted inner products ⟨ξ,η⟩ = Σ μ(x) ξ(x) conj(η(x)).
GradedMap adjoint(const GradedMap& t);

/// Weighted inner product on L²X.
std::complex<double> inner(const GradedObject& x, const CVector& xi, const CVector& eta);

Pvm pvm(const GradedObject& x);

/// The canonical unitary L²(X×Y) → L²X ⊗ L²Y. Under row-major point order
/// this is the identity matrix of size |X|·|Y|.
CMatrix iota(const GradedObject& x, const GradedObject& y);

/// Exact diagonal of the associator phase, entry ω(g_X(x), g_Y(y), g_Z(z))
/// at (x,y,z) in row-major order. Throws if ω is not a 3-cocycle on the
/// ambient group.
std::vector<Phase> associator_phases(const GradedObject& x, const GradedObject& y,
                                     const GradedObject& z, const Cochain& omega);

/// associator_phases() as a diagonal complex matrix.
CMatrix associator_phase(const GradedObject& x, const GradedObject& y, const GradedObject& z,
                         const Cochain& omega);

/// [α^ω f](x,(y,z)) = ω(g_X(x), g_Y(y), g_Z(z))·f((x,y),z). With `inverse`
/// the conjugate phase is applied and indices are reassociated back.
CVector alpha_omega_action(const GradedObject& x, const GradedObject& y, const GradedObject& z,
                           const Cochain& omega, const CVector& f, bool inverse = false);

}  // namespace gkernel
