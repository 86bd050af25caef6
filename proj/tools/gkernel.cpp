// gkernel: runs check suites, replays proof scripts and decides Cuntz equalities.
#include <CLI11.hpp>
#include <boost/algorithm/string.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "gkernel/cuntz.hpp"
#include "gkernel/errors.hpp"
#include "gkernel/prover.hpp"
#include "gkernel/runner.hpp"

namespace {

using namespace gkernel;

constexpr int kPass = 0, kFail = 1, kUsage = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int run_check(const std::string& config, const std::string& report, std::optional<std::uint64_t> seed,
              std::optional<double> tol) {
  runner::SuiteConfig c = runner::load_config(config, seed, tol);
  if (c.checks.empty()) throw ParseError("no checks listed in [suite]", 0);
  runner::SuiteResult r = runner::run_suite(c, runner::threads_from_env());
  write_file(report, r.report);
  write_file(report + ".timing.json", r.timing);
  auto j = nlohmann::json::parse(r.report);
  for (const auto& rec : j["checks"]) {
    std::cout << (rec["pass"].get<bool>() ? "PASS " : "FAIL ") << rec["name"].get<std::string>();
    if (rec.contains("residual")) std::cout << "  residual=" << rec["residual"].get<double>();
    if (rec.contains("verdict")) std::cout << "  verdict=" << rec["verdict"].get<std::string>();
    if (rec.contains("error")) std::cout << "  error: " << rec["error"].get<std::string>();
    std::cout << "\n";
  }
  std::cout << "report: " << report << "\n";
  return r.all_pass ? kPass : kFail;
}

int run_prove(const std::string& path, bool trace) {
  prover::Script s = prover::parse_script(slurp(path));
  prover::RunResult r = prover::run_script(s);
  if (trace)
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      if (i == 0)
        std::cout << "start  " << r.trace[i] << "\n";
      else
        std::cout << "step " << i << "  " << prover::to_string(s.steps[i - 1]) << "\n       " << r.trace[i] << "\n";
    }
  std::cout << r.verdict << "\n";
  if (!r.proved) std::cout << r.message << "\n";
  return r.proved ? kPass : kFail;
}

int run_cuntz(const std::vector<std::string>& args, int n) {
  std::string text = boost::join(args, " ");
  auto eq = text.find("==");
  if (eq == std::string::npos || text.find("==", eq + 2) != std::string::npos)
    throw std::invalid_argument("expected <expr> == <expr>");
  CuntzElement a = parse_cuntz(n, text.substr(0, eq));
  CuntzElement b = parse_cuntz(n, text.substr(eq + 2));
  Equality e = equals(a, b);
  std::cout << to_string(e) << "\n";
  return e == Equality::Equal ? kPass : kFail;
}

int run_minimality(const std::string& config, std::optional<std::uint64_t> seed) {
  runner::SuiteConfig c = runner::load_config(config, seed);
  if (!c.model) throw ParseError("minimality needs a [model]", 0);
  MinimalityReport m = minimality_report(*c.model, c.mu, c.seed);
  std::cout << m.verdict() << "\n"
            << "condition (i):  " << (m.condition_i_minimal ? "minimal" : "not minimal") << " over "
            << m.condition_i.size() << " pairs\n"
            << "condition (ii): " << (m.condition_ii_minimal ? "minimal" : "not minimal") << " over "
            << m.condition_ii.size() << " subsets\n"
            << "conditions agree: " << (m.conditions_agree ? "yes" : "no")
            << (m.exhaustive ? " (exhaustive)" : " (sampled)") << "\n"
            << "functor full: " << (m.functor_full ? "yes" : "no") << "\n";
  return m.conditions_agree ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded kernel coherence toolkit"};
  app.require_subcommand(1);

  std::string config, report = "report.json", script, name;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool trace = false;
  int n = 2;
  std::vector<std::string> exprs;

  auto* check = app.add_subcommand("check", "Run the checks listed in a config");
  check->add_option("config", config, "Suite config")->required();
  check->add_option("--report", report, "Report path; wall times go to <report>.timing.json");
  check->add_option("--seed", seed, "Override [suite] seed");
  check->add_option("--tolerance", tol, "Override [suite] tolerance");

  auto* prove = app.add_subcommand("prove", "Replay a rewriting script");
  prove->add_option("script", script, "Script file")->required();
  prove->add_flag("--trace", trace, "Print the term after every step");

  auto* expl = app.add_subcommand("explain", "Describe a check");
  expl->add_option("name", name, "Check name")->required();

  auto* cuntz = app.add_subcommand("cuntz", "Decide an equality in O_n");
  cuntz->add_option("expr", exprs, "<expr> == <expr>")->required();
  cuntz->add_option("--n", n, "Number of generators")->check(CLI::PositiveNumber);

  auto* mini = app.add_subcommand("minimality", "Minimality report for the model in a config");
  mini->add_option("config", config, "Suite config")->required();
  mini->add_option("--seed", seed, "Override [suite] seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*check) return run_check(config, report, seed, tol);
    if (*prove) return run_prove(script, trace);
    if (*mini) return run_minimality(config, seed);
    if (*cuntz) return run_cuntz(exprs, n);
    if (*expl) {
      try {
        std::cout << runner::explain(name);
      } catch (const std::out_of_range&) {
        std::cerr << "unknown check '" << name << "'; known: " << boost::join(runner::check_names(), ", ") << "\n";
        return kUsage;
      }
      return kPass;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const prover::IllTyped& e) {
    std::cerr << "ill-typed: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
