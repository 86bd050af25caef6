#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace gkernel {

/// An exact element of U(1): exp(2πi·angle) with a rational angle in [0, 1).
///
/// Angles are kept in lowest terms, so two phases compare equal exactly when
/// they denote the same unit complex number. Multiplication adds angles
/// modulo 1. No floating point is involved unless value() is asked for.
class Phase {
 public:
  Phase() = default;

  /// The phase exp(2πi·num/den). Throws std::invalid_argument if den <= 0.
  Phase(std::int64_t num, std::int64_t den);

  static Phase trivial() { return {}; }

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  bool is_trivial() const { return num_ == 0; }

  Phase inverse() const;
  Phase pow(std::int64_t k) const;
  std::complex<double> value() const;

  friend Phase operator*(const Phase& a, const Phase& b);
  friend Phase operator/(const Phase& a, const Phase& b) { return a * b.inverse(); }
  Phase& operator*=(const Phase& o) { return *this = *this * o; }

  friend bool operator==(const Phase&, const Phase&) = default;
  friend auto operator<=>(const Phase&, const Phase&) = default;

  /// "p/q" (or "0" for the trivial phase).
  std::string to_string() const;

  /// Accepts "p/q", "p" (an integer angle, hence trivial) and negative
  /// numerators; throws std::invalid_argument on malformed text.
  static Phase parse(std::string_view text);

  /// Snaps a unit complex number to the exact phase with the smallest
  /// denominator <= max_denominator lying within `tolerance` of it.
  static std::optional<Phase> snap(std::complex<double> z, std::int64_t max_denominator,
                                   double tolerance);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Phase& p);

}  // namespace gkernel

template <>
struct std::hash<gkernel::Phase> {
  std::size_t operator()(const gkernel::Phase& p) const noexcept {
    return std::hash<std::int64_t>{}(p.numerator()) * 1000003u ^
           std::hash<std::int64_t>{}(p.denominator());
  }
};
