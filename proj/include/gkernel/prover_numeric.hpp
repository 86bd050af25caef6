#pragma once

#include <map>
#include <string>

#include "gkernel/kernel.hpp"
#include "gkernel/prover.hpp"

namespace gkernel::prover {

/// Raised by evaluate() on U, W, Fa and ρ-lifts, which have no finite model.
struct SymbolicOnly : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Matrix of a term in the kernel model, objects resolved through `objects`.
/// Atoms of a type are indexed with M fastest, the others row-major.
CMatrix evaluate(const Term& t, const NumericKernelModel& model, const Cochain& omega,
                 const std::map<std::string, GradedObject>& objects);

struct Soundness {
  bool symbolic_only = false;
  double residual = 0;
  std::string lhs;
  std::string rhs;
};

/// Evaluates both sides of the rule's canonical instance over objects X, Y, Z.
Soundness numeric_soundness(const std::string& rule, const NumericKernelModel& model, const GradedObject& x,
                            const GradedObject& y, const GradedObject& z);

}  // namespace gkernel::prover
