#pragma once

#include <stdexcept>
#include <string>

namespace gkernel {

/// Raised when the two sides of an identity that must be proportional are not.
struct ModelInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A Cuntz-algebra expression outside the supported fragment.
struct UnsupportedExpression : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Generator images that do not satisfy the Cuntz relations.
struct InvalidEndomorphism : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Text input that does not parse. `position` is a 1-based column or line.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at " + std::to_string(position) + ")"), position(position) {}
  std::size_t position;
};

}  // namespace gkernel
