#include <algorithm>
#include <cctype>
#include <map>

#include "gkernel/prover.hpp"

namespace gkernel::prover {

bool operator==(const Lift& a, const Lift& b) { return a.markers == b.markers && a.body == b.body; }

bool operator==(const Factor& a, const Factor& b) {
  return a.left == b.left && a.right == b.right && a.core == b.core;
}

bool operator==(const Chain& a, const Chain& b) {
  if (a.factors.empty() || b.factors.empty())
    return a.factors.empty() && b.factors.empty() && a.id_type == b.id_type;
  return a.factors == b.factors;
}

namespace {

const std::map<std::string, int> kArity = {{"U", 1}, {"iota", 2}, {"u", 2}, {"omega", 3},
                                           {"Omega", 3}, {"W", 2}, {"Fa", 3}};

class TermParser {
 public:
  TermParser(const std::string& s, const std::set<std::string>& objects) : s_(s), objects_(objects) {}

  Chain chain() {
    skip();
    if (peek_word() == "id") {
      pos_ += 2;
      expect('{');
      Chain c;
      c.id_type = atoms('}');
      expect('}');
      return c;
    }
    Chain c;
    c.factors.push_back(factor());
    while (true) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == '.') {
        ++pos_;
        c.factors.push_back(factor());
      } else {
        break;
      }
    }
    return c;
  }

  Factor factor() {
    skip();
    Factor f;
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      f.left = atoms('|');
      expect('|');
      f.core = core();
      expect('|');
      f.right = atoms(')');
      expect(')');
    } else {
      f.core = core();
    }
    return f;
  }

  Space space() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      Space a = space();
      expect(',');
      Space b = space();
      expect(')');
      return Space::product(std::move(a), std::move(b));
    }
    std::size_t at = pos_;
    std::string n = ident();
    if (n == "M") fail("M is not an object", at);
    if (!objects_.empty() && !objects_.count(n)) fail("undeclared object '" + n + "'", at);
    return Space::leaf(n);
  }

  void finish() {
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
  }

 private:
  std::variant<Generator, Lift> core() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      expect('{');
      Lift l;
      while (true) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == '}') break;
        std::size_t at = pos_;
        std::string k = ident();
        Marker m;
        if (k == "rho") m.kind = Marker::Rho;
        else if (k == "sigma") m.kind = Marker::Sigma;
        else fail("unknown marker '" + k + "'", at);
        expect('[');
        m.space = space();
        expect(']');
        l.markers.push_back(std::move(m));
      }
      if (l.markers.empty()) fail("empty marker list", pos_);
      expect('}');
      expect('(');
      l.body = chain();
      expect(')');
      return l;
    }
    std::size_t at = pos_;
    Generator g;
    g.name = ident();
    auto it = kArity.find(g.name);
    if (it == kArity.end()) fail("unknown generator '" + g.name + "'", at);
    expect('[');
    g.args.push_back(space());
    while (true) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        g.args.push_back(space());
      } else {
        break;
      }
    }
    expect(']');
    if (static_cast<int>(g.args.size()) != it->second)
      fail(g.name + " takes " + std::to_string(it->second) + " arguments", at);
    skip();
    if (pos_ < s_.size() && s_[pos_] == '*') {
      ++pos_;
      g.adjoint = true;
    }
    return g;
  }

  Type atoms(char close) {
    Type t;
    skip();
    if (pos_ < s_.size() && s_[pos_] == close) return t;
    while (true) {
      skip();
      if (peek_word() == "M") {
        pos_ += 1;
        t.push_back(Atom::M());
      } else {
        t.push_back(Atom::of(space()));
      }
      skip();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      return t;
    }
  }

  std::string peek_word() const {
    std::size_t e = pos_;
    while (e < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[e])) || s_[e] == '_')) ++e;
    return s_.substr(pos_, e - pos_);
  }

  std::string ident() {
    skip();
    std::string w = peek_word();
    if (w.empty() || std::isdigit(static_cast<unsigned char>(w[0]))) fail("expected a name", pos_);
    pos_ += w.size();
    return w;
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what, std::size_t at) const { throw ParseError(what, at + 1); }

  const std::string& s_;
  const std::set<std::string>& objects_;
  std::size_t pos_ = 0;
};

std::string join(const Type& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + to_string(t[i]);
  return out;
}

}  // namespace

Term parse_term(const std::string& text, const std::set<std::string>& objects) {
  TermParser p(text, objects);
  Term t = p.chain();
  p.finish();
  return t;
}

Factor parse_factor(const std::string& text, const std::set<std::string>& objects) {
  TermParser p(text, objects);
  Factor f = p.factor();
  p.finish();
  return f;
}

Space parse_space(const std::string& text, const std::set<std::string>& objects) {
  TermParser p(text, objects);
  Space s = p.space();
  p.finish();
  return s;
}

std::string to_string(const Space& s) {
  if (!s.is_product()) return s.name;
  return "(" + to_string(s.parts[0]) + "," + to_string(s.parts[1]) + ")";
}

std::string to_string(const Atom& a) { return a.m ? "M" : to_string(a.space); }

std::string to_string(const Type& t) {
  if (t.empty()) return "C";
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? " ⊗ " : "") + std::string("L²") + to_string(t[i]);
  return out;
}

std::string to_string(const Marker& m) {
  return std::string(m.kind == Marker::Rho ? "rho[" : "sigma[") + to_string(m.space) + "]";
}

std::string to_string(const Factor& f) {
  std::string core;
  if (f.is_gen()) {
    const Generator& g = f.gen();
    core = g.name + "[";
    for (std::size_t i = 0; i < g.args.size(); ++i) core += (i ? "," : "") + to_string(g.args[i]);
    core += g.adjoint ? "]*" : "]";
  } else {
    core = "^{";
    for (std::size_t i = 0; i < f.lift().markers.size(); ++i)
      core += (i ? " " : "") + to_string(f.lift().markers[i]);
    core += "}(" + to_string(f.lift().body) + ")";
  }
  if (f.left.empty() && f.right.empty()) return core;
  return "(" + join(f.left) + "|" + core + "|" + join(f.right) + ")";
}

std::string to_string(const Term& t) {
  if (t.factors.empty()) return "id{" + join(t.id_type) + "}";
  std::string out;
  for (std::size_t i = 0; i < t.factors.size(); ++i) out += (i ? " . " : "") + to_string(t.factors[i]);
  return out;
}

// ---- typing ----------------------------------------------------------------

Signature generator_type(const Generator& g) {
  const auto& a = g.args;
  auto at = [](const Space& s) { return Atom::of(s); };
  Signature sig;
  if (g.name == "U") {
    sig = {{Atom::M(), at(a[0])}, {Atom::M()}};
  } else if (g.name == "iota") {
    sig = {{at(Space::product(a[0], a[1]))}, {at(a[0]), at(a[1])}};
  } else if (g.name == "u") {
    sig = {{Atom::M(), at(a[0]), at(a[1])}, {Atom::M(), at(a[0]), at(a[1])}};
  } else if (g.name == "omega") {
    sig = {{at(a[0]), at(a[1]), at(a[2])}, {at(a[0]), at(a[1]), at(a[2])}};
  } else if (g.name == "Omega") {
    sig = {{Atom::M(), at(Space::product(Space::product(a[0], a[1]), a[2]))},
           {Atom::M(), at(Space::product(a[0], Space::product(a[1], a[2])))}};
  } else if (g.name == "W" || g.name == "Fa") {
    sig = {{Atom::M()}, {Atom::M()}};
  } else {
    throw std::invalid_argument("unknown generator " + g.name);
  }
  if (g.adjoint) std::swap(sig.source, sig.target);
  return sig;
}

namespace {

Type with_sigmas(const std::vector<Marker>& markers, const Type& t) {
  Type out{t.front()};
  for (const Marker& m : markers)
    if (m.kind == Marker::Sigma) out.push_back(Atom::of(m.space));
  out.insert(out.end(), t.begin() + 1, t.end());
  return out;
}

Signature chain_type(const Chain& c, const std::string& prefix);

Signature factor_type_at(const Factor& f, const std::string& where) {
  Signature core;
  if (f.is_gen()) {
    core = generator_type(f.gen());
  } else {
    Signature body = chain_type(f.lift().body, where + "/");
    if (body.source.empty() || !body.source.front().m || body.target.empty() || !body.target.front().m)
      throw IllTyped(where, "lift body must act on L²M ⊗ …");
    core = {with_sigmas(f.lift().markers, body.source), with_sigmas(f.lift().markers, body.target)};
  }
  Signature out;
  for (Type* t : {&out.source, &out.target}) *t = f.left;
  out.source.insert(out.source.end(), core.source.begin(), core.source.end());
  out.target.insert(out.target.end(), core.target.begin(), core.target.end());
  out.source.insert(out.source.end(), f.right.begin(), f.right.end());
  out.target.insert(out.target.end(), f.right.begin(), f.right.end());
  return out;
}

Signature chain_type(const Chain& c, const std::string& prefix) {
  if (c.factors.empty()) return {c.id_type, c.id_type};
  std::vector<Signature> sigs;
  for (std::size_t i = 0; i < c.factors.size(); ++i)
    sigs.push_back(factor_type_at(c.factors[i], prefix + std::to_string(i)));
  for (std::size_t i = 0; i + 1 < sigs.size(); ++i)
    if (!(sigs[i].source == sigs[i + 1].target))
      throw IllTyped(prefix + std::to_string(i),
                     to_string(sigs[i].source) + " ≠ " + to_string(sigs[i + 1].target));
  return {sigs.back().source, sigs.front().target};
}

}  // namespace

Signature factor_type(const Factor& f) { return factor_type_at(f, "0"); }

Signature typecheck(const Term& t) { return chain_type(t, ""); }

std::optional<EndoType> endotype(const Factor& f) {
  if (!f.left.empty() || !f.right.empty()) return std::nullopt;
  std::optional<EndoType> e;
  if (f.is_gen()) {
    const Generator& g = f.gen();
    auto rho = [](const Space& s) { return Marker{Marker::Rho, s}; };
    const auto& a = g.args;
    if (g.name == "W") {
      e = EndoType{{rho(a[0]), rho(a[1])}, {rho(Space::product(a[0], a[1]))}};
    } else if (g.name == "Fa") {
      e = EndoType{{rho(Space::product(Space::product(a[0], a[1]), a[2]))},
                   {rho(Space::product(a[0], Space::product(a[1], a[2])))}};
    } else {
      return std::nullopt;
    }
    if (g.adjoint) std::swap(e->source, e->target);
    return e;
  }
  const Lift& l = f.lift();
  for (const Marker& m : l.markers)
    if (m.kind != Marker::Rho) return std::nullopt;
  if (l.body.factors.empty()) return std::nullopt;
  std::optional<EndoType> body;
  for (auto it = l.body.factors.rbegin(); it != l.body.factors.rend(); ++it) {
    auto fe = endotype(*it);
    if (!fe) return std::nullopt;
    if (!body) {
      body = fe;
    } else {
      if (!(body->target == fe->source)) return std::nullopt;
      body->target = fe->target;
    }
  }
  EndoType out;
  out.source = l.markers;
  out.source.insert(out.source.end(), body->source.begin(), body->source.end());
  out.target = l.markers;
  out.target.insert(out.target.end(), body->target.begin(), body->target.end());
  return out;
}

Factor adjoint(const Factor& f) {
  Factor out = f;
  if (out.is_gen()) {
    std::get<Generator>(out.core).adjoint = !f.gen().adjoint;
  } else {
    out.lift().body = adjoint(f.lift().body);
  }
  return out;
}

Chain adjoint(const Chain& c) {
  Chain out;
  out.id_type = c.id_type;
  for (auto it = c.factors.rbegin(); it != c.factors.rend(); ++it) out.factors.push_back(adjoint(*it));
  return out;
}

}  // namespace gkernel::prover
