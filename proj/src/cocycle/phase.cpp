#include "gkernel/phase.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace gkernel {

namespace {

std::int64_t floor_mod(__int128 a, __int128 m) {
  __int128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("malformed phase integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

Phase::Phase(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("phase denominator must be positive");
  std::int64_t n = floor_mod(num, den);
  std::int64_t g = std::gcd(n, den);
  if (g == 0) g = den;
  num_ = n / g;
  den_ = den / g;
}

Phase Phase::inverse() const { return {-num_, den_}; }

Phase Phase::pow(std::int64_t k) const {
  return {floor_mod(static_cast<__int128>(num_) * k, den_), den_};
}

std::complex<double> Phase::value() const {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
  return std::polar(1.0, angle);
}

Phase operator*(const Phase& a, const Phase& b) {
  const std::int64_t l = std::lcm(a.den_, b.den_);
  const __int128 n = static_cast<__int128>(a.num_) * (l / a.den_) +
                     static_cast<__int128>(b.num_) * (l / b.den_);
  return {floor_mod(n, l), l};
}

std::string Phase::to_string() const {
  if (num_ == 0) return "0";
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Phase Phase::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return {parse_int(text), 1};
  const auto den = parse_int(text.substr(slash + 1));
  if (den <= 0) throw std::invalid_argument("phase denominator must be positive");
  return {parse_int(text.substr(0, slash)), den};
}

std::optional<Phase> Phase::snap(std::complex<double> z, std::int64_t max_denominator,
                                 double tolerance) {
  double angle = std::arg(z) / (2.0 * std::numbers::pi);
  if (angle < 0) angle += 1.0;
  for (std::int64_t q = 1; q <= max_denominator; ++q) {
    const auto p = static_cast<std::int64_t>(std::llround(angle * static_cast<double>(q)));
    Phase candidate(p, q);
    if (std::abs(candidate.value() - z) <= tolerance) return candidate;
  }
  return std::nullopt;
}

std::ostream& operator<<(std::ostream& os, const Phase& p) { return os << p.to_string(); }

}  // namespace gkernel
