#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gkernel/cochain.hpp"
#include "gkernel/graded.hpp"
#include "gkernel/kernel.hpp"

namespace gkernel::runner {

/// A config value together with its 1-based line in the file.
struct Entry {
  std::string value;
  int line = 0;
};
using Section = std::map<std::string, Entry>;

struct CheckSpec {
  std::string name;
  Section params;
  int line = 0;
};

/// Parsed suite file. Every name is resolved at load time.
struct SuiteConfig {
  std::string text;                 // raw bytes, hashed into the report
  std::string base_dir;             // for relative script paths
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  FiniteGroup group = make_cyclic(1);
  std::string group_label;
  std::optional<NumericKernelModel> model;
  std::optional<Cochain> cocycle;   // [cocycle]; measured from the model when absent
  std::map<std::string, GradedObject> objects;
  std::vector<std::string> object_order;
  std::vector<double> mu;           // [minimality]
  std::vector<CheckSpec> checks;
};

/// Throws ParseError with the line of the offending entry.
SuiteConfig parse_config(const std::string& text, const std::string& base_dir = ".",
                         std::optional<std::uint64_t> seed = std::nullopt,
                         std::optional<double> tolerance = std::nullopt);
SuiteConfig load_config(const std::string& path, std::optional<std::uint64_t> seed = std::nullopt,
                        std::optional<double> tolerance = std::nullopt);

/// Names accepted in `checks`, in explain() order.
const std::vector<std::string>& check_names();

/// Formula and description of a check. Throws std::out_of_range on an
/// unknown name.
std::string explain(const std::string& name);

struct SuiteResult {
  std::string report;   // JSON, sorted keys, no wall times
  std::string timing;   // JSON, wall time per check
  bool all_pass = false;
};

/// Runs the checks on `threads` workers and merges results in config order.
SuiteResult run_suite(const SuiteConfig& config, int threads = 1);

/// Hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

/// Thread count from GKERNEL_THREADS, at least 1.
int threads_from_env();

}  // namespace gkernel::runner
