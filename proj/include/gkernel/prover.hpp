#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gkernel/errors.hpp"

namespace gkernel::prover {

/// An object name or a product (A,B) of two spaces.
struct Space {
  std::string name;          // empty for products
  std::vector<Space> parts;  // two entries for products
  static Space leaf(std::string n) { return {std::move(n), {}}; }
  static Space product(Space a, Space b) { return {"", {std::move(a), std::move(b)}}; }
  bool is_product() const { return !parts.empty(); }
  friend bool operator==(const Space&, const Space&) = default;
};

/// A tensor factor of a Hilbert space: L²M or L²(space).
struct Atom {
  bool m = false;
  Space space;
  static Atom M() { return {true, {}}; }
  static Atom of(Space s) { return {false, std::move(s)}; }
  friend bool operator==(const Atom&, const Atom&) = default;
};

using Type = std::vector<Atom>;

struct Marker {
  enum Kind { Rho, Sigma } kind = Rho;
  Space space;
  friend bool operator==(const Marker&, const Marker&) = default;
};

/// U, iota, u, omega, Omega, W or Fa with space arguments.
struct Generator {
  std::string name;
  std::vector<Space> args;
  bool adjoint = false;
  friend bool operator==(const Generator&, const Generator&) = default;
};

struct Factor;

/// f0 . f1 . … . f(n−1), f(n−1) applied first. An empty chain is the
/// identity on `id_type`.
struct Chain {
  std::vector<Factor> factors;
  Type id_type;
};

/// ^μ(body): the amplification of `body` along the markers μ.
struct Lift {
  std::vector<Marker> markers;
  Chain body;
};

/// (left | core | right): identities on the pad atoms tensored around core.
struct Factor {
  Type left;
  Type right;
  std::variant<Generator, Lift> core;

  bool is_gen() const { return std::holds_alternative<Generator>(core); }
  const Generator& gen() const { return std::get<Generator>(core); }
  const Lift& lift() const { return std::get<Lift>(core); }
  Lift& lift() { return std::get<Lift>(core); }
};

bool operator==(const Chain& a, const Chain& b);
bool operator==(const Lift& a, const Lift& b);
bool operator==(const Factor& a, const Factor& b);

using Term = Chain;

/// Type error with the path of the offending factor ("2" or "1/3").
struct IllTyped : std::runtime_error {
  IllTyped(const std::string& where, const std::string& what)
      : std::runtime_error("ill-typed at " + where + ": " + what), where(where) {}
  std::string where;
};

/// A rule that does not match its redex.
struct RuleMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- text ----------------------------------------------------------------

/// Parses a term. If `objects` is non-empty every object name must be in it.
Term parse_term(const std::string& text, const std::set<std::string>& objects = {});
Factor parse_factor(const std::string& text, const std::set<std::string>& objects = {});
Space parse_space(const std::string& text, const std::set<std::string>& objects = {});

std::string to_string(const Space& s);
std::string to_string(const Atom& a);
std::string to_string(const Type& t);
std::string to_string(const Marker& m);
std::string to_string(const Factor& f);
std::string to_string(const Term& t);

// ---- typing --------------------------------------------------------------

struct Signature {
  Type source;
  Type target;
  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature generator_type(const Generator& g);
Signature factor_type(const Factor& f);
/// Throws IllTyped on the first mismatch.
Signature typecheck(const Term& t);

/// Endomorphism words on M, e.g. ρXρY = {rho[X], rho[Y]}.
struct EndoType {
  std::vector<Marker> source;
  std::vector<Marker> target;
  friend bool operator==(const EndoType&, const EndoType&) = default;
};

/// Intertwiner typing for W, Fa, their adjoints, ρ-lifts of those and
/// unpadded chains of them; nullopt when the factor is not an intertwiner.
std::optional<EndoType> endotype(const Factor& f);

Factor adjoint(const Factor& f);
Chain adjoint(const Chain& c);

// ---- rewriting -----------------------------------------------------------

/// Rule names in a fixed order.
const std::vector<std::string>& rule_names();

/// A location: factor indices descending into lift bodies, then the index
/// of the first factor of the redex in that chain.
struct Position {
  std::vector<int> path;
  int index = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

std::string to_string(const Position& p);
Position parse_position(const std::string& text);

struct Step {
  std::string rule;
  Position at;
  bool forward = true;
  std::map<std::string, std::string> bindings;
  int line = 0;
};

std::string to_string(const Step& s);

/// Applies one step and returns the new term together with the step that
/// undoes it. Throws RuleMismatch when the redex does not match; a change
/// of the term's type is a std::logic_error.
struct Applied {
  Term term;
  Step inverse;
};
Applied apply_step(const Term& t, const Step& s, const std::set<std::string>& objects = {});
Term apply_rule(const Term& t, const std::string& rule, const Position& at, bool forward,
                const std::map<std::string, std::string>& bindings = {},
                const std::set<std::string>& objects = {});

/// Every binding-free step that applies to `t`.
std::vector<Step> find_redexes(const Term& t, const std::set<std::string>& objects = {});

// ---- scripts -------------------------------------------------------------

struct Script {
  std::vector<std::string> objects;
  Term start;
  Term goal;
  std::vector<Step> steps;
};

/// Throws ParseError with the 1-based line number.
Script parse_script(const std::string& text);
std::string to_string(const Script& s);

struct RunResult {
  bool proved = false;
  std::string verdict;                // "proved" or "stuck"
  int failed_step = 0;                // 1-based; 0 when all steps replayed
  std::string message;
  std::vector<std::string> trace;     // start term, then the term after each step
  std::vector<Step> inverses;         // inverse of each replayed step
};

RunResult run_script(const Script& s);

/// Script from the final term back to the start built from a successful run.
Script reverse_script(const Script& s, const RunResult& r);

/// Breadth-first search over binding-free steps up to `max_depth` (≤ 6).
std::optional<std::vector<Step>> search(const Term& start, const Term& goal, int max_depth,
                                        const std::set<std::string>& objects = {});

}  // namespace gkernel::prover
