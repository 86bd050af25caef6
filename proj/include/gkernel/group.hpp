#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gkernel {

/// A finite group given by its multiplication table.
///
/// Elements are the indices 0..order-1 and the identity is always 0. The
/// constructor validates the table (closure, identity, inverses and
/// associativity over all triples) so every FiniteGroup in the program is a
/// genuine group.
class FiniteGroup {
 public:
  /// `table[a][b]` is the index of a·b. Throws std::invalid_argument if the
  /// table is not a group law with identity at index 0.
  explicit FiniteGroup(std::vector<std::vector<int>> table);

  int order() const { return order_; }
  int identity() const { return 0; }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a * order_ + b)]; }
  int inv(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
  bool contains(int a) const { return a >= 0 && a < order_; }

  std::vector<std::vector<int>> table() const;

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.order_ == b.order_ && a.table_ == b.table_;
  }

 private:
  int order_;
  std::vector<int> table_;
  std::vector<int> inverse_;
};

/// Z_n under addition mod n. Throws std::invalid_argument when n == 0.
FiniteGroup make_cyclic(int n);

/// G × H with element (g, h) at index g·|H| + h.
FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);

/// Multiplication table as text, one row per line.
std::string serialize(const FiniteGroup& g);

}  // namespace gkernel
