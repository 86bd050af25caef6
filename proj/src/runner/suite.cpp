#include <atomic>
#include <boost/algorithm/string.hpp>
#include <boost/version.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <openssl/evp.h>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gkernel/cuntz.hpp"
#include "gkernel/kernel.hpp"
#include "gkernel/prover.hpp"
#include "gkernel/prover_numeric.hpp"
#include "gkernel/runner.hpp"

namespace gkernel::runner {

using json = nlohmann::json;

namespace {

struct Explanation {
  std::string formula;
  std::string text;
};

const std::map<std::string, Explanation>& table() {
  static const std::map<std::string, Explanation> t = {
      {"is_cocycle",
       {"ω(h,k,l)·ω(g,hk,l)·ω(g,h,k) = ω(gh,k,l)·ω(g,h,kl)",
        "Exact check of the 3-cocycle identity over all quadruples, on [cocycle] or on the ω measured from the model."}},
      {"standard-cocycle",
       {"ω_k(a,b,c) = exp(2πi·k·a·⌊(b+c)/n⌋/n)",
        "The standard cocycle on Z_n is a cocycle, and it is a coboundary exactly when n divides k."}},
      {"cohomologous",
       {"c1·c2⁻¹ = db",
        "Searches a normalized 2-cochain b whose coboundary is the quotient of [cocycle] and the measured ω."}},
      {"kernel-identity",
       {"u_{g,h}u_{gh,k} = ω(g,h,k)·α_g(u_{h,k})·u_{g,hk}",
        "Measures the obstruction ω of the lift α_g = Ad V_g and reports the largest residual of the identity."}},
      {"lift",
       {"α_g α_h = Ad(u_{g,h}) α_{gh}",
        "The unitaries u_{g,h} implement the failure of g ↦ α_g to be a homomorphism."}},
      {"sigma-tensor",
       {"(σ_X⊗id)σ_Y(m) = u_{X,Y}(1⊗ι)σ_{X×Y}(m)(1⊗ι)*u_{X,Y}*",
        "Tensor compatibility of the graded endomorphisms σ_X; a corrupted u_{X,Y} must be detected."}},
      {"pentagon-sigma",
       {"(u_{X,Y}(1⊗ι)⊗1)u_{X×Y,Z}(1⊗ι*⊗1) = (1⊗ω)σ_X(u_{Y,Z})(1⊗1⊗ι)u_{X,Y×Z}(1⊗1⊗ι*)",
        "Cocycle identity at the level of σ, the numerical core of the pentagon for the tensorator."}},
      {"cuntz-row",
       {"Σ_i λ(v_i)λ(v_i)* = 1 and λ(v_i)*λ(v_j) = δ_ij",
        "The row (v_1 … v_n) is unitary, so v_i ↦ v_i defines an endomorphism of O_n."}},
      {"cuntz-relations",
       {"Σ_i v_i v_i* = 1, v_1 v_1* ≠ 1",
        "Decides equalities in O_n by expansion to a common word level."}},
      {"minimality",
       {"Hom(σ_{μ_E}, σ_{μ_F}) = 0 for disjoint E, F",
        "A lift is minimal when disjointly supported measure objects have no intertwiners. Matrix models never are; "
        "the report also flags that the functor is not full there."}},
      {"prove",
       {"W_{X,Y×Z}·ρ_X(W_{Y,Z}) = F(a_{X,Y,Z})·W_{X×Y,Z}·W_{X,Y}",
        "Replays a rewriting script over formal morphism words and compares with the goal syntactically."}},
      {"numeric-soundness",
       {"‖lhs − rhs‖ on σ-level instances",
        "Evaluates both sides of every rewrite rule that has a finite-dimensional instance."}},
  };
  return t;
}

std::vector<std::string> words(const std::string& s, const char* seps = " ,\t") {
  std::vector<std::string> out;
  boost::split(out, s, boost::is_any_of(seps), boost::token_compress_on);
  out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
  return out;
}

std::string param(const CheckSpec& s, const std::string& key, const std::string& fallback) {
  auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second.value;
}

// Object tuples from "X Y; Y X", or every ordered tuple of declared objects.
std::vector<std::vector<std::string>> tuples(const SuiteConfig& c, const CheckSpec& s, const std::string& key,
                                             std::size_t arity) {
  std::vector<std::vector<std::string>> out;
  auto it = s.params.find(key);
  if (it != s.params.end()) {
    for (const std::string& group : words(it->second.value, ";")) {
      auto t = words(group, " ,");
      if (t.size() != arity)
        throw std::invalid_argument(key + " entries need " + std::to_string(arity) + " objects");
      out.push_back(t);
    }
    return out;
  }
  const auto& names = c.object_order;
  if (names.empty()) throw std::invalid_argument("no objects declared");
  std::vector<std::size_t> idx(arity, 0);
  while (true) {
    std::vector<std::string> t;
    for (std::size_t i : idx) t.push_back(names[i]);
    out.push_back(t);
    std::size_t k = arity;
    while (k > 0 && ++idx[k - 1] == names.size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

Cochain measured(const SuiteConfig& c) { return measure_omega(*c.model); }

json check_is_cocycle(const SuiteConfig& c, const CheckSpec&) {
  Cochain w = c.cocycle ? *c.cocycle : measured(c);
  bool ok = is_cocycle(w);
  return {{"pass", ok}, {"source", c.cocycle ? "config" : "measured"}, {"cocycle", serialize(w)}};
}

json check_standard(const SuiteConfig& c, const CheckSpec& s) {
  int n = std::stoi(param(s, "n", "2"));
  long long k = std::stoll(param(s, "k", "1"));
  if (n < 1) throw std::invalid_argument("n must be positive");
  Cochain w = standard_cyclic_3cocycle(n, k);
  bool cocycle = is_cocycle(w);
  bool trivial_class = cohomologous(w, Cochain::trivial(w.group(), 3)).has_value();
  bool expect_trivial = k % n == 0;
  json r = {{"pass", cocycle && trivial_class == expect_trivial},
            {"is_cocycle", cocycle},
            {"cohomologous_to_trivial", trivial_class}};
  if (n >= 2) r["omega_1_1_1"] = w(1, 1, 1).to_string();
  (void)c;
  return r;
}

json check_cohomologous(const SuiteConfig& c, const CheckSpec& s) {
  if (!c.cocycle) throw std::invalid_argument("cohomologous needs a [cocycle]");
  auto b = cohomologous(*c.cocycle, measured(c));
  std::string verdict = b ? "cohomologous" : "not cohomologous";
  json r = {{"verdict", verdict}, {"pass", verdict == param(s, "expect", "cohomologous")}};
  if (b) r["witness"] = serialize(*b);
  return r;
}

json check_kernel(const SuiteConfig& c, const CheckSpec&) {
  Cochain w = measured(c);
  double res = kernel_identity_residual(*c.model, w);
  return {{"residual", res}, {"pass", res <= c.tolerance}, {"omega", serialize(w)}};
}

json check_lift(const SuiteConfig& c, const CheckSpec&) {
  double res = lift_residual(*c.model);
  return {{"residual", res}, {"pass", res <= c.tolerance}};
}

json check_sigma_tensor(const SuiteConfig& c, const CheckSpec& s) {
  json cases = json::array();
  double worst = 0, weakest = std::numeric_limits<double>::infinity();
  const bool mutate = c.model->d() >= 2;
  for (const auto& t : tuples(c, s, "pairs", 2)) {
    const auto& x = c.objects.at(t[0]);
    const auto& y = c.objects.at(t[1]);
    double res = verify_sigma_tensor(*c.model, x, y);
    json e = {{"objects", t[0] + " " + t[1]}, {"residual", res}};
    if (mutate) {
      double m = verify_sigma_tensor(*c.model, x, y, corrupted_u_object(*c.model, x, y));
      e["mutant_residual"] = m;
      weakest = std::min(weakest, m);
    }
    worst = std::max(worst, res);
    cases.push_back(e);
  }
  json r = {{"residual", worst}, {"cases", cases}};
  r["pass"] = worst <= c.tolerance && (!mutate || weakest >= 0.1);
  return r;
}

json check_pentagon(const SuiteConfig& c, const CheckSpec& s) {
  json cases = json::array();
  double worst = 0;
  for (const auto& t : tuples(c, s, "objects", 3)) {
    double res = verify_pentagon_sigma(*c.model, c.objects.at(t[0]), c.objects.at(t[1]), c.objects.at(t[2]));
    worst = std::max(worst, res);
    cases.push_back({{"objects", boost::join(t, " ")}, {"residual", res}});
  }
  return {{"residual", worst}, {"pass", worst <= c.tolerance}, {"cases", cases}};
}

json check_cuntz_row(const SuiteConfig&, const CheckSpec& s) {
  json cases = json::array();
  bool ok = true;
  for (const std::string& w : words(param(s, "n", "1 2 3 4"))) {
    int n = std::stoi(w);
    RowCheck rc = row_unitary_check(n);
    ok = ok && rc.pass;
    cases.push_back({{"n", n}, {"pass", rc.pass}, {"detail", rc.detail}});
  }
  return {{"pass", ok}, {"cases", cases}};
}

json check_cuntz_relations(const SuiteConfig&, const CheckSpec& s) {
  int n = std::stoi(param(s, "n", "2"));
  if (n < 1) throw std::invalid_argument("n must be positive");
  CuntzElement sum = CuntzElement::generator(n, 1) * CuntzElement::generator(n, 1).adjoint();
  for (int i = 2; i <= n; ++i) sum = sum + CuntzElement::generator(n, i) * CuntzElement::generator(n, i).adjoint();
  Equality full = equals(sum, CuntzElement::one(n));
  CuntzElement p = CuntzElement::generator(n, 1) * CuntzElement::generator(n, 1).adjoint();
  Equality single = equals(p, CuntzElement::one(n));
  bool ok = full == Equality::Equal && (n == 1 ? single == Equality::Equal : single == Equality::NotEqual);
  return {{"pass", ok}, {"sum_equals_one", to_string(full)}, {"v1v1_equals_one", to_string(single)}};
}

json check_minimality(const SuiteConfig& c, const CheckSpec& s) {
  MinimalityReport m = minimality_report(*c.model, c.mu, c.seed);
  int min_dim = std::numeric_limits<int>::max();
  for (const auto& p : m.condition_i) min_dim = std::min(min_dim, p.intertwiner_dim);
  json r = {{"verdict", m.verdict()},
            {"condition_i_minimal", m.condition_i_minimal},
            {"condition_ii_minimal", m.condition_ii_minimal},
            {"conditions_agree", m.conditions_agree},
            {"exhaustive", m.exhaustive},
            {"functor_full", m.functor_full},
            {"support", m.support},
            {"pairs", m.condition_i.size()}};
  if (!m.condition_i.empty()) r["min_intertwiner_dim"] = min_dim;
  std::string expect = param(s, "expect", "");
  r["pass"] = m.conditions_agree && (expect.empty() || expect == m.verdict());
  return r;
}

json check_prove(const SuiteConfig& c, const CheckSpec& s) {
  std::string file = param(s, "script", "");
  std::ifstream in(std::filesystem::path(c.base_dir) / file);
  std::stringstream ss;
  ss << in.rdbuf();
  prover::Script script = prover::parse_script(ss.str());
  prover::RunResult run = prover::run_script(script);
  json r = {{"verdict", run.verdict}, {"pass", run.proved}, {"steps", script.steps.size()}, {"script", file}};
  if (!run.proved) r["failed_step"] = run.failed_step, r["message"] = run.message;
  if (param(s, "trace", "false") == "true") r["trace"] = run.trace;
  return r;
}

json check_soundness(const SuiteConfig& c, const CheckSpec& s) {
  auto t = tuples(c, s, "objects", 3).front();
  json rules = json::object();
  double worst = 0;
  for (const std::string& rule : prover::rule_names()) {
    prover::Soundness sd =
        prover::numeric_soundness(rule, *c.model, c.objects.at(t[0]), c.objects.at(t[1]), c.objects.at(t[2]));
    if (sd.symbolic_only) {
      rules[rule] = "symbolic-only";
    } else {
      rules[rule] = sd.residual;
      worst = std::max(worst, sd.residual);
    }
  }
  return {{"residual", worst}, {"pass", worst <= c.tolerance}, {"rules", rules}, {"objects", boost::join(t, " ")}};
}

json run_check(const SuiteConfig& c, const CheckSpec& s) {
  using Fn = json (*)(const SuiteConfig&, const CheckSpec&);
  static const std::map<std::string, Fn> fns = {
      {"is_cocycle", check_is_cocycle},       {"standard-cocycle", check_standard},
      {"cohomologous", check_cohomologous},   {"kernel-identity", check_kernel},
      {"lift", check_lift},                   {"sigma-tensor", check_sigma_tensor},
      {"pentagon-sigma", check_pentagon},     {"cuntz-row", check_cuntz_row},
      {"cuntz-relations", check_cuntz_relations}, {"minimality", check_minimality},
      {"prove", check_prove},                 {"numeric-soundness", check_soundness},
  };
  json r;
  try {
    r = fns.at(s.name)(c, s);
  } catch (const std::exception& e) {
    r = {{"pass", false}, {"error", e.what()}};
  }
  static const std::map<std::string, std::string> ops = {
      {"is_cocycle", "is_cocycle"},          {"standard-cocycle", "standard_cyclic_3cocycle"},
      {"cohomologous", "cohomologous"},      {"kernel-identity", "verify_kernel_identity"},
      {"lift", "verify_lift"},               {"sigma-tensor", "verify_sigma_tensor"},
      {"pentagon-sigma", "verify_pentagon_sigma"}, {"cuntz-row", "row_unitary_check"},
      {"cuntz-relations", "equals"},         {"minimality", "minimality_report"},
      {"prove", "run_script"},               {"numeric-soundness", "numeric_soundness"},
  };
  r["name"] = s.name;
  r["operation"] = ops.at(s.name);
  json params = json::object();
  for (const auto& [k, e] : s.params) params[k] = e.value;
  r["params"] = params;
  return r;
}

json environment() {
  return {{"tool", "gkernel 0.1.0"},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION},
#ifdef NDEBUG
          {"build", "release"}
#else
          {"build", "debug"}
#endif
  };
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "is_cocycle",   "standard-cocycle", "cohomologous", "kernel-identity", "lift",  "sigma-tensor",
      "pentagon-sigma", "cuntz-row",      "cuntz-relations", "minimality",  "prove", "numeric-soundness"};
  return names;
}

std::string explain(const std::string& name) {
  const Explanation& e = table().at(name);
  return name + "\n  " + e.formula + "\n  " + e.text + "\n";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

int threads_from_env() {
  const char* v = std::getenv("GKERNEL_THREADS");
  if (!v) return 1;
  try {
    return std::max(1, std::stoi(v));
  } catch (const std::exception&) {
    return 1;
  }
}

SuiteResult run_suite(const SuiteConfig& config, int threads) {
  const std::size_t n = config.checks.size();
  std::vector<json> records(n);
  std::vector<double> millis(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      auto t0 = std::chrono::steady_clock::now();
      records[i] = run_check(config, config.checks[i]);
      millis[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min<int>(threads, static_cast<int>(n)); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  bool all = true;
  json checks = json::array(), timing = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    all = all && records[i]["pass"].get<bool>();
    checks.push_back(records[i]);
    timing.push_back({{"name", config.checks[i].name}, {"wall_ms", millis[i]}});
  }
  std::string stamp = "seed=" + std::to_string(config.seed) + "\n";
  std::ostringstream tol;
  tol << "tolerance=" << config.tolerance << "\n";
  json report = {{"all_pass", all},
                 {"checks", checks},
                 {"config_sha256", sha256_hex(config.text + stamp + tol.str())},
                 {"environment", environment()},
                 {"group", config.group_label},
                 {"seed", config.seed},
                 {"tolerance", config.tolerance}};
  json t = {{"threads", threads}, {"checks", timing}};
  return {report.dump(2) + "\n", t.dump(2) + "\n", all};
}

}  // namespace gkernel::runner
