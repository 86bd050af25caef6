#include "gkernel/cochain.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

#include "modular_system.hpp"

namespace gkernel {

namespace {

std::size_t power(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

void require_degree(const Cochain& c, int degree, const char* what) {
  if (c.degree() != degree)
    throw std::invalid_argument(std::string(what) + ": expected a degree-" + std::to_string(degree) +
                                " cochain, got degree " + std::to_string(c.degree()));
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Cochain::Cochain(FiniteGroup group, int degree, std::vector<Phase> values)
    : group_(std::move(group)), degree_(degree), values_(std::move(values)) {
  if (degree_ < 1 || degree_ > 3)
    throw std::invalid_argument("cochain degree must be 1, 2 or 3, got " + std::to_string(degree_));
  const std::size_t expected = power(group_.order(), degree_);
  if (values_.size() != expected)
    throw std::invalid_argument("cochain of degree " + std::to_string(degree_) + " needs " +
                                std::to_string(expected) + " values, got " +
                                std::to_string(values_.size()));
  const int n = group_.order();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    std::size_t rest = i;
    bool has_identity = false;
    for (int k = 0; k < degree_; ++k) {
      if (rest % static_cast<std::size_t>(n) == 0) has_identity = true;
      rest /= static_cast<std::size_t>(n);
    }
    if (has_identity && !values_[i].is_trivial())
      throw std::invalid_argument("cochain is not normalized at flat index " + std::to_string(i));
  }
}

Cochain Cochain::trivial(const FiniteGroup& group, int degree) {
  if (degree < 1 || degree > 3)
    throw std::invalid_argument("cochain degree must be 1, 2 or 3, got " + std::to_string(degree));
  return Cochain(group, degree, std::vector<Phase>(power(group.order(), degree)));
}

std::size_t Cochain::index(std::span<const int> args) const {
  if (static_cast<int>(args.size()) != degree_)
    throw std::invalid_argument("cochain evaluated with " + std::to_string(args.size()) +
                                " arguments, degree is " + std::to_string(degree_));
  std::size_t idx = 0;
  for (int a : args) {
    if (!group_.contains(a))
      throw std::out_of_range("group element " + std::to_string(a) + " out of range");
    idx = idx * static_cast<std::size_t>(group_.order()) + static_cast<std::size_t>(a);
  }
  return idx;
}

Phase Cochain::at(std::span<const int> args) const { return values_[index(args)]; }

Phase Cochain::operator()(int g) const {
  const int a[] = {g};
  return at(a);
}

Phase Cochain::operator()(int g, int h) const {
  const int a[] = {g, h};
  return at(a);
}

Phase Cochain::operator()(int g, int h, int k) const {
  const int a[] = {g, h, k};
  return at(a);
}

Cochain operator*(const Cochain& a, const Cochain& b) {
  if (a.degree_ != b.degree_ || !(a.group_ == b.group_))
    throw std::invalid_argument("cochain product needs matching group and degree");
  std::vector<Phase> v(a.values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] * b.values_[i];
  return Cochain(a.group_, a.degree_, std::move(v));
}

Cochain Cochain::inverse() const {
  std::vector<Phase> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i].inverse();
  return Cochain(group_, degree_, std::move(v));
}

bool Cochain::is_trivial() const {
  for (const auto& p : values_)
    if (!p.is_trivial()) return false;
  return true;
}

Cochain coboundary(const Cochain& b) {
  require_degree(b, 2, "coboundary");
  const auto& G = b.group();
  const int n = G.order();
  std::vector<Phase> v;
  v.reserve(power(n, 3));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        v.push_back(b(g, h) * b(G.mul(g, h), k) / b(g, G.mul(h, k)) / b(h, k));
  return Cochain(G, 3, std::move(v));
}

bool is_cocycle(const Cochain& c) {
  if (c.degree() != 3) return false;
  const auto& G = c.group();
  const int n = G.order();
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Phase lhs = c(h, k, l) * c(g, G.mul(h, k), l) * c(g, h, k);
          const Phase rhs = c(G.mul(g, h), k, l) * c(g, h, G.mul(k, l));
          if (lhs != rhs) return false;
        }
  return true;
}

Cochain standard_cyclic_3cocycle(int n, long long k) {
  const FiniteGroup G = make_cyclic(n);
  std::vector<Phase> v;
  v.reserve(power(n, 3));
  const long long kk = ((k % n) + n) % n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        v.emplace_back(kk * a * ((b + c) / n), n);
  return Cochain(G, 3, std::move(v));
}

std::int64_t denominator_lcm(const Cochain& c) {
  std::int64_t l = 1;
  for (const auto& p : c.values()) l = std::lcm(l, p.denominator());
  return l;
}

std::optional<Cochain> cohomologous(const Cochain& c1, const Cochain& c2) {
  require_degree(c1, 3, "cohomologous");
  require_degree(c2, 3, "cohomologous");
  if (!(c1.group() == c2.group()))
    throw std::invalid_argument("cohomologous: cochains live on different groups");
  if (!is_cocycle(c1) || !is_cocycle(c2))
    throw std::invalid_argument("cohomologous: input is not a 3-cocycle");

  const Cochain target = c1 * c2.inverse();
  const auto& G = target.group();
  const int n = G.order();
  if (target.is_trivial()) return Cochain::trivial(G, 2);

  const std::int64_t modulus = denominator_lcm(target) * n * n;
  const int m = n - 1;  // unknowns b(g,h) with g, h != e
  auto var = [m](int g, int h) { return (g - 1) * m + (h - 1); };

  std::vector<std::vector<std::int64_t>> rows;
  std::vector<std::int64_t> rhs;
  for (int g = 1; g < n; ++g)
    for (int h = 1; h < n; ++h)
      for (int k = 1; k < n; ++k) {
        std::vector<std::int64_t> row(static_cast<std::size_t>(m * m), 0);
        auto add = [&](int x, int y, int s) {
          if (x != 0 && y != 0) row[static_cast<std::size_t>(var(x, y))] += s;
        };
        add(g, h, 1);
        add(G.mul(g, h), k, 1);
        add(g, G.mul(h, k), -1);
        add(h, k, -1);
        const Phase p = target(g, h, k);
        rows.push_back(std::move(row));
        rhs.push_back(p.numerator() * (modulus / p.denominator()));
      }

  const auto x = detail::solve_mod(rows, rhs, modulus);
  if (!x) return std::nullopt;

  std::vector<Phase> v(static_cast<std::size_t>(n * n));
  for (int g = 1; g < n; ++g)
    for (int h = 1; h < n; ++h)
      v[static_cast<std::size_t>(g * n + h)] = Phase((*x)[static_cast<std::size_t>(var(g, h))], modulus);
  Cochain b(G, 2, std::move(v));
  if (coboundary(b) != target)
    throw std::logic_error("cohomologous: solver returned a witness that does not verify");
  return b;
}

std::string serialize(const Cochain& c) {
  std::ostringstream os;
  const int n = c.group().order();
  const std::size_t count = c.values().size();
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<int> args(static_cast<std::size_t>(c.degree()));
    std::size_t rest = i;
    for (int k = c.degree() - 1; k >= 0; --k) {
      args[static_cast<std::size_t>(k)] = static_cast<int>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
    }
    for (std::size_t k = 0; k < args.size(); ++k) os << (k ? "," : "") << args[k];
    os << " = " << c.values()[i].to_string() << '\n';
  }
  return os.str();
}

Cochain parse_cochain(const FiniteGroup& group, int degree, const std::string& text) {
  Cochain base = Cochain::trivial(group, degree);
  std::vector<Phase> values = base.values();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("cochain line " + std::to_string(lineno) + ": missing '='");
    std::vector<int> args;
    std::istringstream keys(line.substr(0, eq));
    std::string tok;
    while (std::getline(keys, tok, ',')) {
      tok = trim(tok);
      std::size_t used = 0;
      int a = 0;
      try {
        a = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (tok.empty() || used != tok.size())
        throw std::invalid_argument("cochain line " + std::to_string(lineno) + ": bad index '" + tok + "'");
      args.push_back(a);
    }
    if (static_cast<int>(args.size()) != degree)
      throw std::invalid_argument("cochain line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(degree) + " indices");
    std::size_t idx = 0;
    for (int a : args) {
      if (!group.contains(a))
        throw std::invalid_argument("cochain line " + std::to_string(lineno) + ": index out of range");
      idx = idx * static_cast<std::size_t>(group.order()) + static_cast<std::size_t>(a);
    }
    values[idx] = Phase::parse(line.substr(eq + 1));
  }
  return Cochain(group, degree, std::move(values));
}

}  // namespace gkernel
