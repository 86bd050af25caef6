#include "gkernel/group.hpp"

#include <sstream>
#include <stdexcept>

namespace gkernel {

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table)
    : order_(static_cast<int>(table.size())) {
  if (order_ == 0) throw std::invalid_argument("group table is empty");
  table_.reserve(static_cast<std::size_t>(order_ * order_));
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != order_)
      throw std::invalid_argument("group table is not square");
    for (int v : row) {
      if (v < 0 || v >= order_) throw std::invalid_argument("group table entry out of range");
      table_.push_back(v);
    }
  }
  for (int a = 0; a < order_; ++a) {
    if (mul(0, a) != a || mul(a, 0) != a)
      throw std::invalid_argument("element 0 is not the identity");
  }
  inverse_.assign(static_cast<std::size_t>(order_), -1);
  for (int a = 0; a < order_; ++a) {
    for (int b = 0; b < order_; ++b) {
      if (mul(a, b) == 0 && mul(b, a) == 0) {
        inverse_[static_cast<std::size_t>(a)] = b;
        break;
      }
    }
    if (inverse_[static_cast<std::size_t>(a)] < 0)
      throw std::invalid_argument("element " + std::to_string(a) + " has no inverse");
  }
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b)
      for (int c = 0; c < order_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw std::invalid_argument("group table is not associative at (" + std::to_string(a) +
                                      "," + std::to_string(b) + "," + std::to_string(c) + ")");
}

std::vector<std::vector<int>> FiniteGroup::table() const {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(order_));
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b) rows[static_cast<std::size_t>(a)].push_back(mul(a, b));
  return rows;
}

FiniteGroup make_cyclic(int n) {
  if (n <= 0) throw std::invalid_argument("cyclic group order must be positive");
  std::vector<std::vector<int>> table(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[static_cast<std::size_t>(a)].push_back((a + b) % n);
  return FiniteGroup(std::move(table));
}

FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const int n = g.order() * h.order();
  std::vector<std::vector<int>> table(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int gp = g.mul(a / h.order(), b / h.order());
      const int hp = h.mul(a % h.order(), b % h.order());
      table[static_cast<std::size_t>(a)].push_back(gp * h.order() + hp);
    }
  }
  return FiniteGroup(std::move(table));
}

std::string serialize(const FiniteGroup& g) {
  std::ostringstream os;
  for (int a = 0; a < g.order(); ++a) {
    for (int b = 0; b < g.order(); ++b) os << (b ? " " : "") << g.mul(a, b);
    os << '\n';
  }
  return os.str();
}

}  // namespace gkernel
