#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace gkernel::detail {

/// Solves A·x ≡ b (mod modulus) over the integers via a Smith normal form
/// U·A·V = D. Returns one solution with entries in [0, modulus) or nullopt.
std::optional<std::vector<std::int64_t>> solve_mod(const std::vector<std::vector<std::int64_t>>& a,
                                                   const std::vector<std::int64_t>& b,
                                                   std::int64_t modulus);

}  // namespace gkernel::detail
