#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "gkernel/errors.hpp"
#include "gkernel/runner.hpp"

namespace gkernel::runner {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> words(const std::string& s, const char* seps = " ,\t") {
  std::vector<std::string> out;
  boost::split(out, s, boost::is_any_of(seps), boost::token_compress_on);
  out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
  return out;
}

[[noreturn]] void fail(const std::string& what, int line) { throw ParseError(what, static_cast<std::size_t>(line)); }

// Line numbers of "[section]" headers and "key =" entries.
struct LineIndex {
  std::map<std::string, int> sections;
  std::map<std::pair<std::string, std::string>, int> keys;

  explicit LineIndex(const std::string& text) {
    std::istringstream in(text);
    std::string raw, section;
    for (int n = 1; std::getline(in, raw); ++n) {
      std::string l = boost::trim_copy(raw);
      if (l.empty() || l[0] == '#' || l[0] == ';') continue;
      if (l[0] == '[') {
        section = boost::trim_copy(l.substr(1, l.find(']') - 1));
        sections.emplace(section, n);
      } else if (auto eq = l.find('='); eq != std::string::npos) {
        keys.emplace(std::make_pair(section, boost::trim_copy(l.substr(0, eq))), n);
      }
    }
  }
};

std::string unquote(std::string v) {
  boost::trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  return v;
}

int to_int(const Entry& e, const std::string& key) {
  try {
    std::size_t used = 0;
    int v = std::stoi(e.value, &used);
    if (used == e.value.size()) return v;
  } catch (const std::exception&) {
  }
  fail(key + " must be an integer, got '" + e.value + "'", e.line);
}

double to_double(const Entry& e, const std::string& key) {
  try {
    std::size_t used = 0;
    double v = std::stod(e.value, &used);
    if (used == e.value.size()) return v;
  } catch (const std::exception&) {
  }
  fail(key + " must be a number, got '" + e.value + "'", e.line);
}

Phase to_phase(const std::string& s, int line) {
  try {
    return Phase::parse(s);
  } catch (const std::invalid_argument& e) {
    fail(e.what(), line);
  }
}

CMatrix unitary_from(const Entry& e, int d, std::mt19937_64& rng) {
  auto w = words(e.value, " \t");
  if (w.empty()) fail("empty unitary", e.line);
  const std::string kind = w[0];
  std::vector<std::string> args(w.begin() + 1, w.end());
  CMatrix m;
  if (kind == "identity") {
    m = CMatrix::Identity(d, d);
  } else if (kind == "diag") {
    std::vector<Phase> ph;
    for (const auto& a : args) ph.push_back(to_phase(a, e.line));
    m = diag_unitary(ph);
  } else if (kind == "permutation") {
    std::vector<int> perm;
    for (const auto& a : args) perm.push_back(to_int({a, e.line}, "permutation entry"));
    try {
      m = permutation_unitary(perm);
    } catch (const std::invalid_argument& ex) {
      fail(ex.what(), e.line);
    }
  } else if (kind == "fourier") {
    m = fourier_unitary(d);
  } else if (kind == "random") {
    m = random_unitary(d, rng);
  } else {
    fail("unknown unitary '" + kind + "'", e.line);
  }
  if (m.rows() != d) fail("unitary has size " + std::to_string(m.rows()) + ", model has d = " + std::to_string(d), e.line);
  return m;
}

}  // namespace

SuiteConfig parse_config(const std::string& text, const std::string& base_dir, std::optional<std::uint64_t> seed,
                         std::optional<double> tolerance) {
  SuiteConfig c;
  c.text = text;
  c.base_dir = base_dir;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(e.message(), static_cast<int>(e.line()));
  }
  LineIndex lines(text);
  std::map<std::string, Section> sections;
  for (const auto& [name, body] : tree) {
    if (!lines.sections.count(name)) fail("entry '" + name + "' outside a section", lines.keys[{"", name}]);
    Section s;
    for (const auto& [key, value] : body) s[key] = Entry{unquote(value.data()), lines.keys[{name, key}]};
    sections[name] = s;
  }
  for (const auto& [name, line] : lines.sections) sections.try_emplace(name);
  auto section_line = [&](const std::string& s) { return lines.sections.count(s) ? lines.sections.at(s) : 0; };
  auto known = [&](const std::string& sec, const Section& s, std::set<std::string> allowed) {
    for (const auto& [k, e] : s)
      if (!allowed.count(k) && !(sec == "model" && k.size() > 1 && k[0] == 'V'))
        fail("unknown key '" + k + "' in [" + sec + "]", e.line);
  };

  // [suite]
  Section suite = sections.count("suite") ? sections["suite"] : Section{};
  known("suite", suite, {"seed", "tolerance", "checks"});
  if (suite.count("seed")) c.seed = static_cast<std::uint64_t>(to_int(suite["seed"], "seed"));
  if (suite.count("tolerance")) c.tolerance = to_double(suite["tolerance"], "tolerance");
  if (seed) c.seed = *seed;
  if (tolerance) c.tolerance = *tolerance;
  if (!(c.tolerance > 0)) fail("tolerance must be positive", suite.count("tolerance") ? suite["tolerance"].line : 0);

  // [group]
  Section group = sections.count("group") ? sections["group"] : Section{};
  known("group", group, {"cyclic", "product"});
  if (group.count("cyclic") && group.count("product")) fail("give either cyclic or product", group["product"].line);
  if (group.count("cyclic")) {
    int n = to_int(group["cyclic"], "cyclic");
    if (n < 1) fail("cyclic order must be positive", group["cyclic"].line);
    c.group = make_cyclic(n);
    c.group_label = "Z" + std::to_string(n);
  } else if (group.count("product")) {
    auto fs = words(group["product"].value);
    if (fs.empty()) fail("empty product", group["product"].line);
    c.group_label.clear();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      int n = to_int({fs[i], group["product"].line}, "product factor");
      if (n < 1) fail("cyclic order must be positive", group["product"].line);
      c.group = i == 0 ? make_cyclic(n) : direct_product(c.group, make_cyclic(n));
      c.group_label += (i ? "x" : "") + std::string("Z") + std::to_string(n);
    }
  } else {
    c.group_label = "Z1";
  }
  const int order = c.group.order();
  const bool cyclic = group.count("cyclic") > 0;

  // [model]
  std::mt19937_64 rng(c.seed);
  if (sections.count("model")) {
    Section& m = sections["model"];
    known("model", m, {"d", "b", "random"});
    if (!m.count("d")) fail("[model] needs d", section_line("model"));
    int d = to_int(m["d"], "d");
    if (d < 1) fail("d must be positive", m["d"].line);
    try {
      if (m.count("random")) {
        int den = to_int(m["random"], "random");
        if (den < 1) fail("random denominator must be positive", m["random"].line);
        c.model = random_model(c.group, d, den, rng);
      } else {
        std::vector<CMatrix> V(static_cast<std::size_t>(order), CMatrix::Identity(d, d));
        for (const auto& [k, e] : m) {
          if (k[0] != 'V') continue;
          int g = to_int({k.substr(1), e.line}, "element index");
          if (g < 1 || g >= order) fail("no group element " + k.substr(1), e.line);
        }
        for (int g = 1; g < order; ++g) {
          std::string key = "V" + std::to_string(g);
          if (m.count(key)) {
            V[static_cast<std::size_t>(g)] = unitary_from(m[key], d, rng);
          } else if (cyclic && m.count("V1")) {
            V[static_cast<std::size_t>(g)] = V[static_cast<std::size_t>(g - 1)] * V[1];
          }
        }
        std::vector<Phase> b(static_cast<std::size_t>(order * order));
        if (m.count("b")) {
          for (const std::string& item : words(m["b"].value, ";")) {
            auto eq = item.find('=');
            if (eq == std::string::npos) fail("b entries look like 'g,h = p/q'", m["b"].line);
            auto gh = words(item.substr(0, eq), ", ");
            if (gh.size() != 2) fail("b entries look like 'g,h = p/q'", m["b"].line);
            int g = to_int({gh[0], m["b"].line}, "b argument"), h = to_int({gh[1], m["b"].line}, "b argument");
            if (!c.group.contains(g) || !c.group.contains(h)) fail("b argument outside the group", m["b"].line);
            b[static_cast<std::size_t>(g * order + h)] = to_phase(boost::trim_copy(item.substr(eq + 1)), m["b"].line);
          }
        }
        c.model = make_model(c.group, d, V, Cochain(c.group, 2, b));
      }
    } catch (const std::invalid_argument& e) {
      fail(e.what(), section_line("model"));
    }
  }

  // [cocycle]
  if (sections.count("cocycle")) {
    Section& s = sections["cocycle"];
    known("cocycle", s, {"kind", "n", "k"});
    std::string kind = s.count("kind") ? s["kind"].value : "trivial";
    if (kind == "trivial") {
      c.cocycle = Cochain::trivial(c.group, 3);
    } else if (kind == "standard") {
      int n = s.count("n") ? to_int(s["n"], "n") : order;
      long long k = s.count("k") ? to_int(s["k"], "k") : 1;
      if (!cyclic || n != order) fail("the standard cocycle needs [group] cyclic = " + std::to_string(n), section_line("cocycle"));
      c.cocycle = standard_cyclic_3cocycle(n, k);
    } else {
      fail("unknown cocycle kind '" + kind + "'", s.count("kind") ? s["kind"].line : section_line("cocycle"));
    }
  }

  // [object.NAME]
  for (const auto& [name, s] : sections) {
    if (!boost::starts_with(name, "object.")) continue;
    std::string label = name.substr(7);
    if (label.empty() || label == "M") fail("bad object name '" + label + "'", section_line(name));
    known(name, s, {"points"});
    if (!s.count("points")) fail("object " + label + " needs points", section_line(name));
    const Entry& e = s.at("points");
    std::vector<GradedPoint> pts;
    for (const std::string& p : words(e.value, ",")) {
      auto f = words(p, ": ");
      if (f.size() != 3) fail("points look like 'label:weight:grade'", e.line);
      pts.push_back({f[0], to_double({f[1], e.line}, "weight"), to_int({f[2], e.line}, "grade")});
    }
    if (pts.empty()) fail("object " + label + " has no points", e.line);
    try {
      c.objects.emplace(label, GradedObject(c.group, pts));
    } catch (const std::invalid_argument& ex) {
      fail(ex.what(), e.line);
    }
    c.object_order.push_back(label);
  }

  // [minimality]
  if (sections.count("minimality")) {
    Section& s = sections["minimality"];
    known("minimality", s, {"mu"});
    if (s.count("mu")) {
      for (const std::string& w : words(s["mu"].value)) c.mu.push_back(to_double({w, s["mu"].line}, "mu"));
      if (static_cast<int>(c.mu.size()) != order) fail("mu needs one weight per group element", s["mu"].line);
    }
  }
  if (c.mu.empty()) c.mu.assign(static_cast<std::size_t>(order), 1.0);

  // checks and [check.NAME]
  const Entry checks = suite.count("checks") ? suite["checks"] : Entry{"", section_line("suite")};
  std::set<std::string> listed;
  for (const std::string& n : words(checks.value)) {
    if (std::find(check_names().begin(), check_names().end(), n) == check_names().end())
      fail("unknown check '" + n + "'", checks.line);
    if (!listed.insert(n).second) fail("check '" + n + "' listed twice", checks.line);
    CheckSpec spec{n, sections.count("check." + n) ? sections["check." + n] : Section{}, checks.line};
    c.checks.push_back(spec);
  }
  for (const auto& [name, s] : sections) {
    if (boost::starts_with(name, "check.") && !listed.count(name.substr(6)))
      fail("[" + name + "] is not in the checks list", section_line(name));
    if (name != "suite" && name != "group" && name != "model" && name != "cocycle" && name != "minimality" &&
        !boost::starts_with(name, "object.") && !boost::starts_with(name, "check."))
      fail("unknown section [" + name + "]", section_line(name));
  }

  // Resolve references.
  const std::set<std::string> needs_model{"kernel-identity", "lift",       "sigma-tensor", "pentagon-sigma",
                                          "minimality",      "cohomologous", "numeric-soundness"};
  const std::map<std::string, std::set<std::string>> params{
      {"is_cocycle", {}},          {"standard-cocycle", {"n", "k"}},  {"cohomologous", {"expect"}},
      {"kernel-identity", {}},     {"lift", {}},                      {"sigma-tensor", {"pairs"}},
      {"pentagon-sigma", {"objects"}}, {"cuntz-row", {"n"}},         {"cuntz-relations", {"n"}},
      {"minimality", {"expect"}},  {"prove", {"script", "trace"}},   {"numeric-soundness", {"objects"}}};
  for (const CheckSpec& spec : c.checks) {
    for (const auto& [k, e] : spec.params)
      if (!params.at(spec.name).count(k)) fail("unknown parameter '" + k + "' for " + spec.name, e.line);
    if (needs_model.count(spec.name) && !c.model) fail("check '" + spec.name + "' needs a [model]", spec.line);
    if (spec.name == "is_cocycle" && !c.model && !c.cocycle)
      fail("is_cocycle needs a [cocycle] or a [model]", spec.line);
    for (const char* key : {"objects", "pairs"}) {
      auto it = spec.params.find(key);
      if (it == spec.params.end()) continue;
      for (const std::string& o : words(it->second.value, " ,;"))
        if (!c.objects.count(o)) fail("undeclared object '" + o + "'", it->second.line);
    }
    if (spec.name == "prove") {
      auto it = spec.params.find("script");
      if (it == spec.params.end()) fail("check 'prove' needs a script", spec.line);
      std::filesystem::path p = std::filesystem::path(c.base_dir) / it->second.value;
      if (!std::filesystem::exists(p)) fail("script not found: " + it->second.value, it->second.line);
    }
  }
  return c;
}

SuiteConfig load_config(const std::string& path, std::optional<std::uint64_t> seed, std::optional<double> tolerance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_config(ss.str(), dir.empty() ? "." : dir, seed, tolerance);
}

}  // namespace gkernel::runner
