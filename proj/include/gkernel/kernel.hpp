#pragma once

#include <cstdint>
#include <random>
#include <unsupported/Eigen/KroneckerProduct>
#include <string>
#include <vector>

#include "gkernel/cochain.hpp"
#include "gkernel/errors.hpp"
#include "gkernel/graded.hpp"

namespace gkernel {

/// Finite matrix model of a lift α_g = Ad V_g on M = M_d(C) together with
/// u_{g,h} = b(g,h)·V_g V_h V_{gh}*.
///
/// Storage convention for M ⊗ B(L²A1) ⊗ … ⊗ B(L²Ak): the basis index of
/// L²M ⊗ L²A1 ⊗ … ⊗ L²Ak is ((a1·|A2| + a2)·… )·d + i, so M is the fastest
/// digit and m ⊗ t is the Kronecker product kron(t, m).
class NumericKernelModel {
 public:
  /// Validates V_e = 1 and unitarity of every V_g to 1e-12. Throws
  /// std::invalid_argument naming the offending element and deviation.
  NumericKernelModel(FiniteGroup group, int d, std::vector<CMatrix> V, Cochain b);

  const FiniteGroup& group() const { return group_; }
  int d() const { return d_; }
  const CMatrix& V(int g) const { return V_[static_cast<std::size_t>(g)]; }
  const Cochain& b() const { return b_; }

  /// α_g(m) = V_g m V_g*.
  CMatrix alpha(int g, const CMatrix& m) const;

  const CMatrix& u(int g, int h) const { return u_[static_cast<std::size_t>(g * group_.order() + h)]; }

  /// Copy of the model whose u_{g,h} table entry is replaced. The result no
  /// longer needs to satisfy the model identities; used for mutation tests.
  NumericKernelModel with_u_override(int g, int h, const CMatrix& u) const;

 private:
  FiniteGroup group_;
  int d_;
  std::vector<CMatrix> V_;
  Cochain b_;
  std::vector<CMatrix> u_;
};

NumericKernelModel make_model(const FiniteGroup& group, int d, std::vector<CMatrix> V, const Cochain& b);

/// Named unitaries used by model files.
CMatrix diag_unitary(const std::vector<Phase>& phases);
CMatrix permutation_unitary(const std::vector<int>& perm);  // column j -> row perm[j]
CMatrix fourier_unitary(int d);
CMatrix random_unitary(int d, std::mt19937_64& rng);
Cochain random_cochain2(const FiniteGroup& group, std::int64_t denominator, std::mt19937_64& rng);
NumericKernelModel random_model(const FiniteGroup& group, int d, std::int64_t denominator, std::mt19937_64& rng);

/// Matrix unit e_{ij} of size n.
CMatrix matrix_unit(int n, int i, int j);

/// Largest singular value; 0 for empty matrices.
double op_norm(const CMatrix& m);

/// Embeds `op` acting on the tensor slots `slots` (ascending) of a space
/// with factor sizes `in_dims` (slot 0 is M) into the full space, padding
/// with identities. `op` maps the selected slots of `in_dims` to those of
/// `out_dims`; the two dimension lists may differ only on `slots`.
CMatrix embed(const CMatrix& op, const std::vector<int>& in_dims, const std::vector<int>& out_dims,
              const std::vector<int>& slots);
CMatrix embed(const CMatrix& op, const std::vector<int>& dims, const std::vector<int>& slots);

CMatrix u_pair(const NumericKernelModel& model, int g, int h);

/// ω(g,h,k) from u_{g,h}u_{gh,k} = ω(g,h,k)·α_g(u_{h,k})·u_{g,hk}, snapped to
/// an exact phase. Throws ModelInconsistency if the sides are not
/// proportional to 1e-10 or the ratio does not snap within 1e-8.
Cochain measure_omega(const NumericKernelModel& model);

/// max over (g,h,k) of ‖u_{g,h}u_{gh,k} − ω(g,h,k)α_g(u_{h,k})u_{g,hk}‖.
double kernel_identity_residual(const NumericKernelModel& model, const Cochain& omega);

/// max over matrix units of ‖α_g α_h(m) − u_{g,h} α_{gh}(m) u_{g,h}*‖.
double lift_residual(const NumericKernelModel& model);

/// σ_X(m) = ⊕_x α_{g_X(x)}(m). Throws std::invalid_argument if m is not d×d.
CMatrix sigma(const NumericKernelModel& model, const GradedObject& x, const CMatrix& m);

/// σ_X applied to the M leg of an operator on M ⊗ A (A of total size
/// `a_size`); the result acts on M ⊗ X ⊗ A.
CMatrix sigma_lift(const NumericKernelModel& model, const GradedObject& x, const CMatrix& t, int a_size);

/// Block-diagonal unitary on M ⊗ X ⊗ Y with block u_{g_X(x), g_Y(y)}.
CMatrix u_object(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y);

/// u_object() with its first diagonal entry negated (u·diag(−1,1,…,1)).
/// Conjugation by a negated block is invisible, so the mutation right
/// multiplies by a non-scalar diagonal instead.
CMatrix corrupted_u_object(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y);

/// max over matrix units m of
/// ‖(σ_X⊗id)σ_Y(m) − u_{X,Y}(1⊗ι)σ_{X×Y}(m)(1⊗ι)*u_{X,Y}*‖.
double verify_sigma_tensor(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y);
double verify_sigma_tensor(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y,
                           const CMatrix& u_xy);

/// Both sides of the σ-level cocycle identity on M ⊗ X ⊗ Y ⊗ Z.
struct PentagonSides {
  CMatrix lhs;
  CMatrix rhs;
};
PentagonSides pentagon_sigma_sides(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y,
                                   const GradedObject& z, const Cochain& omega);
double verify_pentagon_sigma(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y,
                             const GradedObject& z);

/// Orthonormal (Frobenius) basis of {T : T σ_X(m) = σ_Y(m) T}, each T of
/// size d|Y| × d|X|.
std::vector<CMatrix> intertwiners(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y);

/// The object μ_E: one point per element g of E with weight μ(g), grade g.
GradedObject measure_object(const FiniteGroup& group, const std::vector<double>& mu, const std::vector<int>& subset);

struct PairRecord {
  std::vector<int> e;
  std::vector<int> f;
  int intertwiner_dim = 0;
  int hom_dim = 0;
};

struct MinimalityReport {
  std::vector<int> support;
  std::vector<PairRecord> condition_i;   // disjoint nonempty pairs
  std::vector<PairRecord> condition_ii;  // E against its complement
  bool condition_i_minimal = true;
  bool condition_ii_minimal = true;
  bool conditions_agree = true;
  bool exhaustive = true;
  bool functor_full = true;  // false once some pair has hom_dim < intertwiner_dim
  bool minimal() const { return condition_i_minimal; }
  std::string verdict() const { return minimal() ? "minimal" : "not minimal"; }
};

/// Enumerates all subset pairs for a support of size <= 5 and `samples`
/// seeded random pairs beyond. Throws std::invalid_argument when μ has
/// empty support or the wrong length.
MinimalityReport minimality_report(const NumericKernelModel& model, const std::vector<double>& mu,
                                   std::uint64_t seed = 0, int samples = 64);

struct FunctorImage {
  CMatrix image;               // 1_M ⊗ t
  double intertwiner_residual; // max over matrix units of ‖F(t)σ_X(m) − σ_Y(m)F(t)‖
};
FunctorImage functor_F_sigma(const NumericKernelModel& model, const GradedMap& t);

/// True iff the images of hom_basis(X, Y) are linearly independent.
bool functor_F_faithful(const NumericKernelModel& model, const GradedObject& x, const GradedObject& y);

/// Naturality of u_{X,Y} in each slot for t: X → X′ (slot 0) or t: Y → Y′
/// (slot 1): ‖u_{X′,Y}(1⊗t⊗1) − (1⊗t⊗1)u_{X,Y}‖ and its mirror.
double tensorator_naturality(const NumericKernelModel& model, const GradedMap& t, const GradedObject& other,
                             int slot);

}  // namespace gkernel
