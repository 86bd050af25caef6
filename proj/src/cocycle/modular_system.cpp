#include "modular_system.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <utility>

namespace gkernel::detail {

namespace {

using boost::multiprecision::cpp_int;
using Matrix = std::vector<std::vector<cpp_int>>;

cpp_int mod(const cpp_int& a, const cpp_int& m) {
  cpp_int r = a % m;
  if (r < 0) r += m;
  return r;
}

// Extended gcd: returns g and s with s·a ≡ g (mod m) when g = gcd(a, m).
cpp_int inverse_mod(cpp_int a, const cpp_int& m) {
  cpp_int old_r = mod(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    cpp_int q = old_r / r;
    std::swap(old_r, r);
    r -= q * old_r;
    std::swap(old_s, s);
    s -= q * old_s;
  }
  if (old_r != 1) throw std::logic_error("inverse_mod on non-unit");
  return mod(old_s, m);
}

}  // namespace

std::optional<std::vector<std::int64_t>> solve_mod(const std::vector<std::vector<std::int64_t>>& a,
                                                   const std::vector<std::int64_t>& b,
                                                   std::int64_t modulus) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a.front().size() : 0;
  const cpp_int n = modulus;

  Matrix d(rows, std::vector<cpp_int>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) d[i][j] = a[i][j];
  std::vector<cpp_int> rhs(b.begin(), b.end());  // U·b, kept reduced
  Matrix v(cols, std::vector<cpp_int>(cols));
  for (std::size_t j = 0; j < cols; ++j) v[j][j] = 1;

  auto row_op = [&](std::size_t target, std::size_t src, const cpp_int& q) {
    for (std::size_t j = 0; j < cols; ++j) d[target][j] -= q * d[src][j];
    rhs[target] = mod(rhs[target] - q * rhs[src], n);
  };
  auto col_op = [&](std::size_t target, std::size_t src, const cpp_int& q) {
    for (std::size_t i = 0; i < rows; ++i) d[i][target] -= q * d[i][src];
    for (std::size_t i = 0; i < cols; ++i) v[i][target] = mod(v[i][target] - q * v[i][src], n);
  };
  auto swap_rows = [&](std::size_t i, std::size_t k) {
    std::swap(d[i], d[k]);
    std::swap(rhs[i], rhs[k]);
  };
  auto swap_cols = [&](std::size_t j, std::size_t k) {
    for (auto& row : d) std::swap(row[j], row[k]);
    for (auto& row : v) std::swap(row[j], row[k]);
  };

  const std::size_t diag = std::min(rows, cols);
  std::size_t rank = 0;
  for (std::size_t t = 0; t < diag; ++t) {
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (d[i][j] != 0 && (pi == rows || abs(d[i][j]) < abs(d[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == rows) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d[i][t] == 0) continue;
        row_op(i, t, d[i][t] / d[t][t]);
        if (d[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d[t][j] == 0) continue;
        col_op(j, t, d[t][j] / d[t][t]);
        if (d[t][j] != 0) clean = false;
      }
      if (clean) {
        rank = t + 1;
        break;
      }
    }
    if (rank != t + 1) break;
  }

  for (std::size_t i = rank; i < rows; ++i)
    if (mod(rhs[i], n) != 0) return std::nullopt;

  std::vector<cpp_int> y(cols, 0);
  for (std::size_t i = 0; i < rank; ++i) {
    const cpp_int di = mod(d[i][i], n);
    const cpp_int g = gcd(di, n);  // gcd(0, n) = n
    if (mod(rhs[i], g) != 0) return std::nullopt;
    const cpp_int reduced = n / g;
    if (reduced == 1) continue;
    y[i] = mod((rhs[i] / g) * inverse_mod(di / g, reduced), reduced);
  }

  std::vector<std::int64_t> x(cols);
  for (std::size_t i = 0; i < cols; ++i) {
    cpp_int acc = 0;
    for (std::size_t j = 0; j < cols; ++j) acc += v[i][j] * y[j];
    x[i] = static_cast<std::int64_t>(mod(acc, n));
  }
  return x;
}

}  // namespace gkernel::detail
