#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gkernel/group.hpp"
#include "gkernel/phase.hpp"

namespace gkernel {

/// A normalized Phase-valued function on G^k, k ∈ {1, 2, 3}.
///
/// Values are stored row-major over argument tuples. Normalization (trivial
/// value whenever an argument is the identity) is checked on construction.
class Cochain {
 public:
  /// Throws std::invalid_argument on bad degree, wrong value count or a
  /// non-normalized table.
  Cochain(FiniteGroup group, int degree, std::vector<Phase> values);

  static Cochain trivial(const FiniteGroup& group, int degree);

  const FiniteGroup& group() const { return group_; }
  int degree() const { return degree_; }
  const std::vector<Phase>& values() const { return values_; }

  Phase at(std::span<const int> args) const;
  Phase operator()(int g) const;
  Phase operator()(int g, int h) const;
  Phase operator()(int g, int h, int k) const;

  /// Pointwise product and inverse; operands must share group and degree.
  friend Cochain operator*(const Cochain& a, const Cochain& b);
  Cochain inverse() const;

  bool is_trivial() const;

  friend bool operator==(const Cochain&, const Cochain&) = default;

 private:
  std::size_t index(std::span<const int> args) const;

  FiniteGroup group_;
  int degree_;
  std::vector<Phase> values_;
};

/// (db)(g,h,k) = b(g,h)·b(gh,k)·b(g,hk)⁻¹·b(h,k)⁻¹.
Cochain coboundary(const Cochain& b);

/// True iff ω(h,k,l)·ω(g,hk,l)·ω(g,h,k) = ω(gh,k,l)·ω(g,h,kl) everywhere.
bool is_cocycle(const Cochain& c);

/// ω_k(a,b,c) = exp(2πi · k·a·⌊(b+c)/n⌋ / n) on Z_n.
Cochain standard_cyclic_3cocycle(int n, long long k);

/// A normalized 2-cochain b with db = c1·c2⁻¹, or nullopt if none exists with
/// angle denominators dividing lcm(denominators of c1·c2⁻¹)·|G|².
/// Throws std::invalid_argument if either input is not a cocycle.
std::optional<Cochain> cohomologous(const Cochain& c1, const Cochain& c2);

/// Least common multiple of the value denominators.
std::int64_t denominator_lcm(const Cochain& c);

/// Deterministic text table: one "g,h,k = p/q" line per argument tuple.
std::string serialize(const Cochain& c);

/// Inverse of serialize(). Throws std::invalid_argument on malformed input.
Cochain parse_cochain(const FiniteGroup& group, int degree, const std::string& text);

}  // namespace gkernel
