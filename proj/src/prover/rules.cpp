#include <algorithm>
#include <functional>
#include <sstream>

#include "gkernel/prover.hpp"

namespace gkernel::prover {

const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> names = {"R1",      "R2", "R3-merge", "R3-nest", "R3-pad",
                                                 "R3-unit", "R3-id", "R4",    "R5",      "R6",
                                                 "R6-Omega", "R7", "R8",      "S1-phase"};
  return names;
}

std::string to_string(const Position& p) {
  std::string out;
  for (int i : p.path) out += std::to_string(i) + "/";
  return out + std::to_string(p.index);
}

Position parse_position(const std::string& text) {
  Position p;
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '/')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad position '" + text + "'");
    }
    if (used != item.size()) throw std::invalid_argument("bad position '" + text + "'");
    parts.push_back(v);
  }
  if (parts.empty()) throw std::invalid_argument("empty position");
  p.index = parts.back();
  parts.pop_back();
  p.path = parts;
  return p;
}

std::string to_string(const Step& s) {
  std::string out = "step " + s.rule + (s.forward ? " forward @ " : " backward @ ") + to_string(s.at);
  bool first = true;
  for (const auto& [k, v] : s.bindings) {
    out += (first ? " where " : "; ") + k + " = " + v;
    first = false;
  }
  return out;
}

namespace {

using Bind = std::map<std::string, Space>;

[[noreturn]] void mismatch(const std::string& what) { throw RuleMismatch(what); }

// ---- boundary types and helpers -------------------------------------------------

Type boundary(const Chain& c, std::size_t i) {
  if (c.factors.empty()) return c.id_type;
  if (i < c.factors.size()) return factor_type(c.factors[i]).target;
  return factor_type(c.factors.back()).source;
}

Signature core_type(const Factor& f) {
  Factor bare = f;
  bare.left.clear();
  bare.right.clear();
  return factor_type(bare);
}

Type sigma_atoms(const std::vector<Marker>& ms) {
  Type t;
  for (const Marker& m : ms)
    if (m.kind == Marker::Sigma) t.push_back(Atom::of(m.space));
  return t;
}

std::string markers_text(const std::vector<Marker>& ms) {
  std::string out;
  for (std::size_t i = 0; i < ms.size(); ++i) out += (i ? " " : "") + to_string(ms[i]);
  return out;
}

std::vector<Marker> parse_markers(const std::string& text, const std::set<std::string>& objects) {
  Factor f = parse_factor("^{" + text + "}(id{M})", objects);
  return f.lift().markers;
}

Factor gen_factor(Generator g, Type left = {}, Type right = {}) {
  Factor f;
  f.left = std::move(left);
  f.right = std::move(right);
  f.core = std::move(g);
  return f;
}

Factor lift_factor(std::vector<Marker> ms, Chain body, Type right = {}) {
  Factor f;
  f.right = std::move(right);
  f.core = Lift{std::move(ms), std::move(body)};
  return f;
}

Chain single(Factor f) {
  Chain c;
  c.factors.push_back(std::move(f));
  return c;
}

// ---- template matching for the definitional rules ---------------------------------

const std::set<std::string> kMeta = {"A", "B", "C"};

bool unify(const Space& p, const Space& a, Bind& b) {
  if (!p.is_product()) {
    if (!kMeta.count(p.name)) return p == a;
    auto it = b.find(p.name);
    if (it != b.end()) return it->second == a;
    b.emplace(p.name, a);
    return true;
  }
  return a.is_product() && unify(p.parts[0], a.parts[0], b) && unify(p.parts[1], a.parts[1], b);
}

bool unify(const Type& p, const Type& a, Bind& b) {
  if (p.size() != a.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].m != a[i].m) return false;
    if (!p[i].m && !unify(p[i].space, a[i].space, b)) return false;
  }
  return true;
}

bool match_chain(const Chain& p, const Chain& a, Bind& b);

bool match_factor(const Factor& p, const Factor& a, Bind& b, std::optional<Type>* extra) {
  if (!unify(p.left, a.left, b)) return false;
  if (a.right.size() < p.right.size()) return false;
  Type head(a.right.begin(), a.right.begin() + static_cast<long>(p.right.size()));
  Type tail(a.right.begin() + static_cast<long>(p.right.size()), a.right.end());
  if (!unify(p.right, head, b)) return false;
  if (extra) {
    if (!*extra) *extra = tail;
    else if (!(**extra == tail)) return false;
  } else if (!tail.empty()) {
    return false;
  }
  if (p.is_gen() != a.is_gen()) return false;
  if (p.is_gen()) {
    const Generator& pg = p.gen();
    const Generator& ag = a.gen();
    if (pg.name != ag.name || pg.adjoint != ag.adjoint || pg.args.size() != ag.args.size()) return false;
    for (std::size_t i = 0; i < pg.args.size(); ++i)
      if (!unify(pg.args[i], ag.args[i], b)) return false;
    return true;
  }
  const Lift& pl = p.lift();
  const Lift& al = a.lift();
  if (pl.markers.size() != al.markers.size()) return false;
  for (std::size_t i = 0; i < pl.markers.size(); ++i)
    if (pl.markers[i].kind != al.markers[i].kind || !unify(pl.markers[i].space, al.markers[i].space, b))
      return false;
  return match_chain(pl.body, al.body, b);
}

bool match_chain(const Chain& p, const Chain& a, Bind& b) {
  if (p.factors.size() != a.factors.size()) return false;
  if (p.factors.empty()) return unify(p.id_type, a.id_type, b);
  for (std::size_t i = 0; i < p.factors.size(); ++i)
    if (!match_factor(p.factors[i], a.factors[i], b, nullptr)) return false;
  return true;
}

Space subst(const Space& s, const Bind& b) {
  if (!s.is_product()) {
    auto it = b.find(s.name);
    return it == b.end() ? s : it->second;
  }
  return Space::product(subst(s.parts[0], b), subst(s.parts[1], b));
}

Type subst(const Type& t, const Bind& b) {
  Type out;
  for (const Atom& a : t) out.push_back(a.m ? a : Atom::of(subst(a.space, b)));
  return out;
}

Chain subst(const Chain& c, const Bind& b);

Factor subst(const Factor& f, const Bind& b) {
  Factor out;
  out.left = subst(f.left, b);
  out.right = subst(f.right, b);
  if (f.is_gen()) {
    Generator g = f.gen();
    for (Space& s : g.args) s = subst(s, b);
    out.core = g;
  } else {
    Lift l;
    for (const Marker& m : f.lift().markers) l.markers.push_back({m.kind, subst(m.space, b)});
    l.body = subst(f.lift().body, b);
    out.core = l;
  }
  return out;
}

Chain subst(const Chain& c, const Bind& b) {
  Chain out;
  out.id_type = subst(c.id_type, b);
  for (const Factor& f : c.factors) out.factors.push_back(subst(f, b));
  return out;
}

struct Definition {
  Chain lhs;
  Chain rhs;
};

const std::map<std::string, Definition>& definitions() {
  static const std::map<std::string, Definition> defs = [] {
    auto d = [](const std::string& l, const std::string& r) {
      return Definition{parse_term(l, kMeta), parse_term(r, kMeta)};
    };
    std::map<std::string, Definition> m;
    m.emplace("R5", d("W[A,B]", "U[(A,B)] . (M|iota[A,B]*|) . u[A,B]* . (|U[A]*|B) . ^{rho[A]}(U[B]*)"));
    m.emplace("R6", d("Fa[A,B,C]", "U[(A,(B,C))] . Omega[A,B,C] . U[((A,B),C)]*"));
    m.emplace("R6-Omega", d("Omega[A,B,C]",
                            "(M|iota[A,(B,C)]*|) . (M,A|iota[B,C]*|) . (M|omega[A,B,C]|) . "
                            "(M|iota[A,B]|C) . (M|iota[(A,B),C]|)"));
    m.emplace("R7", d("(M|omega[A,B,C]|) . (M|iota[A,B]|C) . u[(A,B),C]* . (M|iota[A,B]*|C) . (|u[A,B]*|C)",
                      "(M,A|iota[B,C]|) . u[A,(B,C)]* . (M,A|iota[B,C]*|) . ^{sigma[A]}(u[B,C]*)"));
    return m;
  }();
  return defs;
}

// ---- the rewriting context -----------------------------------------------------------

struct Ctx {
  Chain& c;
  std::size_t i;
  bool forward;
  const std::map<std::string, std::string>& bindings;
  const std::set<std::string>& objects;
  std::set<std::string> used;

  const Factor& at(std::size_t k) const {
    if (i + k >= c.factors.size())
      mismatch("no factor at index " + std::to_string(i + k) + " (chain has " +
               std::to_string(c.factors.size()) + ")");
    return c.factors[i + k];
  }

  std::optional<std::string> binding(const std::string& key) {
    auto it = bindings.find(key);
    if (it == bindings.end()) return std::nullopt;
    used.insert(key);
    return it->second;
  }

  std::string require(const std::string& key) {
    auto v = binding(key);
    if (!v) mismatch("missing binding '" + key + "'");
    return *v;
  }

  int require_int(const std::string& key) {
    std::string v = require(key);
    try {
      std::size_t used_chars = 0;
      int k = std::stoi(v, &used_chars);
      if (used_chars == v.size()) return k;
    } catch (const std::exception&) {
    }
    mismatch("binding '" + key + "' is not an integer");
  }

  void replace(std::size_t count, std::vector<Factor> with) {
    Type empty_type = boundary(c, i);
    c.factors.erase(c.factors.begin() + static_cast<long>(i), c.factors.begin() + static_cast<long>(i + count));
    c.factors.insert(c.factors.begin() + static_cast<long>(i), with.begin(), with.end());
    if (c.factors.empty()) c.id_type = empty_type;
  }
};

struct Inverse {
  bool forward;
  std::map<std::string, std::string> bindings;
};

std::string quote(const Factor& f) { return "'" + to_string(f) + "'"; }

// R1: f . f* ↔ identity.
Inverse rule_r1(Ctx& x) {
  if (x.forward) {
    const Factor& f = x.at(0);
    const Factor& g = x.at(1);
    if (auto want = x.binding("f")) {
      Factor bound = parse_factor(*want, x.objects);
      if (!(bound == f)) mismatch("factor " + std::to_string(x.i) + " is " + quote(f) + ", binding f is " + quote(bound));
    }
    if (!(g == adjoint(f)))
      mismatch("factor " + std::to_string(x.i + 1) + " is " + quote(g) + ", expected the adjoint " + quote(adjoint(f)));
    Factor keep = f;
    x.replace(2, {});
    return {false, {{"f", to_string(keep)}}};
  }
  Factor f = parse_factor(x.require("f"), x.objects);
  if (x.i > x.c.factors.size()) mismatch("index past the end of the chain");
  Type here = boundary(x.c, x.i);
  Signature s = factor_type(f);
  if (!(s.target == here)) mismatch("f ends in " + to_string(s.target) + " but the term has " + to_string(here) + " here");
  x.replace(0, {f, adjoint(f)});
  return {true, {}};
}

// R2: u . ^μ(U[A]) ↔ ^ν(U[A]) . (|u|A) for u ∈ Hom(μ, ν).
bool is_plain_u(const Factor& f) {
  return !f.is_gen() && f.left.empty() && f.right.empty() && f.lift().body.factors.size() == 1 &&
         f.lift().body.factors[0].is_gen() && f.lift().body.factors[0].gen().name == "U" &&
         !f.lift().body.factors[0].gen().adjoint && f.lift().body.factors[0].left.empty() &&
         f.lift().body.factors[0].right.empty();
}

Inverse rule_r2(Ctx& x) {
  if (x.forward) {
    const Factor& u = x.at(0);
    const Factor& l = x.at(1);
    auto e = endotype(u);
    if (!e) mismatch(quote(u) + " is not an intertwiner");
    if (!is_plain_u(l)) mismatch(quote(l) + " is not a lifted U");
    if (!(l.lift().markers == e->source))
      mismatch("lift markers {" + markers_text(l.lift().markers) + "} differ from the source {" +
               markers_text(e->source) + "} of " + quote(u));
    Factor nl = lift_factor(e->target, l.lift().body);
    Factor nu = u;
    nu.right = {Atom::of(l.lift().body.factors[0].gen().args[0])};
    x.replace(2, {nl, nu});
    return {false, {}};
  }
  const Factor& l = x.at(0);
  const Factor& u = x.at(1);
  if (!is_plain_u(l)) mismatch(quote(l) + " is not a lifted U");
  const Space& a = l.lift().body.factors[0].gen().args[0];
  if (!u.left.empty() || !(u.right == Type{Atom::of(a)})) mismatch(quote(u) + " is not padded by exactly " + to_string(a));
  Factor bare = u;
  bare.right.clear();
  auto e = endotype(bare);
  if (!e) mismatch(quote(bare) + " is not an intertwiner");
  if (!(e->target == l.lift().markers))
    mismatch("lift markers {" + markers_text(l.lift().markers) + "} differ from the target {" +
             markers_text(e->target) + "} of " + quote(bare));
  Factor nl = lift_factor(e->source, l.lift().body);
  x.replace(2, {bare, nl});
  return {true, {}};
}

// R3-merge: ^μ(x) . ^μ(y) ↔ ^μ(x . y).
Inverse rule_r3_merge(Ctx& x) {
  if (x.forward) {
    const Factor& a = x.at(0);
    const Factor& b = x.at(1);
    if (a.is_gen() || b.is_gen()) mismatch("both factors must be lifts");
    if (!(a.lift().markers == b.lift().markers)) mismatch("lift markers differ");
    if (!(a.left == b.left) || !(a.right == b.right)) mismatch("lift paddings differ");
    if (a.lift().body.factors.empty() || b.lift().body.factors.empty()) mismatch("empty lift body");
    Factor m = a;
    auto& body = m.lift().body.factors;
    body.insert(body.end(), b.lift().body.factors.begin(), b.lift().body.factors.end());
    int k = static_cast<int>(a.lift().body.factors.size());
    x.replace(2, {m});
    return {false, {{"k", std::to_string(k)}}};
  }
  const Factor& a = x.at(0);
  if (a.is_gen()) mismatch(quote(a) + " is not a lift");
  int k = x.require_int("k");
  int n = static_cast<int>(a.lift().body.factors.size());
  if (k < 1 || k >= n) mismatch("split point k = " + std::to_string(k) + " outside 1.." + std::to_string(n - 1));
  Factor p = a;
  Factor q = a;
  auto& pb = p.lift().body.factors;
  auto& qb = q.lift().body.factors;
  pb.erase(pb.begin() + k, pb.end());
  qb.erase(qb.begin(), qb.begin() + k);
  x.replace(1, {p, q});
  return {true, {}};
}

// R3-nest: ^μ(^ν(x)) ↔ ^{μν}(x).
Inverse rule_r3_nest(Ctx& x) {
  const Factor& a = x.at(0);
  if (a.is_gen()) mismatch(quote(a) + " is not a lift");
  if (x.forward) {
    const auto& body = a.lift().body.factors;
    if (body.size() != 1 || body[0].is_gen() || !body[0].left.empty() || !body[0].right.empty())
      mismatch("lift body is not a single unpadded lift");
    Factor m = a;
    int k = static_cast<int>(a.lift().markers.size());
    Lift inner = body[0].lift();
    m.lift().markers.insert(m.lift().markers.end(), inner.markers.begin(), inner.markers.end());
    m.lift().body = inner.body;
    x.replace(1, {m});
    return {false, {{"k", std::to_string(k)}}};
  }
  int k = x.require_int("k");
  int n = static_cast<int>(a.lift().markers.size());
  if (k < 1 || k >= n) mismatch("split point k = " + std::to_string(k) + " outside 1.." + std::to_string(n - 1));
  std::vector<Marker> outer(a.lift().markers.begin(), a.lift().markers.begin() + k);
  std::vector<Marker> inner(a.lift().markers.begin() + k, a.lift().markers.end());
  Factor m = a;
  m.lift().markers = outer;
  m.lift().body = single(lift_factor(inner, a.lift().body));
  x.replace(1, {m});
  return {true, {}};
}

Type common_right_suffix(const std::vector<Factor>& fs) {
  Type s = fs.front().right;
  for (const Factor& f : fs) {
    std::size_t n = 0;
    while (n < s.size() && n < f.right.size() && s[s.size() - 1 - n] == f.right[f.right.size() - 1 - n]) ++n;
    s.erase(s.begin(), s.end() - static_cast<long>(n));
  }
  return s;
}

// R3-pad: ^μ((x|P)) ↔ (^μ(x)|P).
Inverse rule_r3_pad(Ctx& x) {
  const Factor& a = x.at(0);
  if (a.is_gen()) mismatch(quote(a) + " is not a lift");
  const auto& body = a.lift().body.factors;
  if (body.empty()) mismatch("empty lift body");
  Type suffix = common_right_suffix(body);
  Factor m = a;
  if (x.forward) {
    if (!a.right.empty()) mismatch("lift already carries a right padding");
    if (suffix.empty()) mismatch("the lift body has no common right padding");
    for (Factor& f : m.lift().body.factors) f.right.resize(f.right.size() - suffix.size());
    m.right = suffix;
  } else {
    if (a.right.empty()) mismatch("lift carries no right padding");
    if (!suffix.empty()) mismatch("the lift body already has a common right padding");
    for (Factor& f : m.lift().body.factors) f.right.insert(f.right.end(), a.right.begin(), a.right.end());
    m.right.clear();
  }
  x.replace(1, {m});
  return {!x.forward, {}};
}

bool m_free(const Factor& f) { return f.is_gen() && (f.gen().name == "iota" || f.gen().name == "omega"); }

// R3-unit: ^μ((M,L|t|R)) ↔ (M,σ(μ),L|t|R) for t not acting on L²M.
Inverse rule_r3_unit(Ctx& x) {
  const Factor& a = x.at(0);
  if (x.forward) {
    if (a.is_gen() || !a.left.empty() || !a.right.empty()) mismatch(quote(a) + " is not an unpadded lift");
    const auto& body = a.lift().body.factors;
    if (body.size() != 1 || !m_free(body[0]) || body[0].left.empty() || !body[0].left[0].m)
      mismatch("lift body is not a single (M,…|t|…) with t an iota or omega");
    Factor g = body[0];
    Type s = sigma_atoms(a.lift().markers);
    g.left.insert(g.left.begin() + 1, s.begin(), s.end());
    std::string mu = markers_text(a.lift().markers);
    x.replace(1, {g});
    return {false, {{"mu", mu}}};
  }
  std::vector<Marker> mu = parse_markers(x.require("mu"), x.objects);
  if (!m_free(a) || a.left.empty() || !a.left[0].m) mismatch(quote(a) + " is not (M,…|t|…) with t an iota or omega");
  Type s = sigma_atoms(mu);
  if (a.left.size() < 1 + s.size() || !std::equal(s.begin(), s.end(), a.left.begin() + 1))
    mismatch("left padding of " + quote(a) + " does not start with M," + to_string(s));
  Factor g = a;
  g.left.erase(g.left.begin() + 1, g.left.begin() + 1 + static_cast<long>(s.size()));
  x.replace(1, {lift_factor(mu, single(g))});
  return {true, {}};
}

// R3-id: ^μ(id) ↔ id.
Inverse rule_r3_id(Ctx& x) {
  if (x.forward) {
    const Factor& a = x.at(0);
    if (a.is_gen() || !a.lift().body.factors.empty() || !a.left.empty() || !a.right.empty())
      mismatch(quote(a) + " is not an unpadded lifted identity");
    std::string mu = markers_text(a.lift().markers);
    x.replace(1, {});
    return {false, {{"mu", mu}}};
  }
  std::vector<Marker> mu = parse_markers(x.require("mu"), x.objects);
  if (x.i > x.c.factors.size()) mismatch("index past the end of the chain");
  Type here = boundary(x.c, x.i);
  Type s = sigma_atoms(mu);
  if (here.empty() || !here[0].m || here.size() < 1 + s.size() ||
      !std::equal(s.begin(), s.end(), here.begin() + 1))
    mismatch("type " + to_string(here) + " does not carry the σ-atoms of {" + markers_text(mu) + "}");
  Chain body;
  body.id_type = {Atom::M()};
  body.id_type.insert(body.id_type.end(), here.begin() + 1 + static_cast<long>(s.size()), here.end());
  x.replace(0, {lift_factor(mu, body)});
  return {true, {}};
}

// R4: ^{μ ρA}(x) ↔ (^μ(U[A])|K) . ^{μ σA}(x) . (^μ(U[A]*)|H) for x : M⊗H → M⊗K.
Factor lifted_u(const std::vector<Marker>& mu, const Space& a, bool adj, const Type& pad) {
  Generator g{"U", {a}, adj};
  if (mu.empty()) return gen_factor(g, {}, pad);
  return lift_factor(mu, single(gen_factor(g)), pad);
}

Inverse rule_r4(Ctx& x) {
  const Factor& mid = x.forward ? x.at(0) : x.at(1);
  if (mid.is_gen() || !mid.left.empty() || !mid.right.empty()) mismatch(quote(mid) + " is not an unpadded lift");
  const auto& ms = mid.lift().markers;
  Marker::Kind want = x.forward ? Marker::Rho : Marker::Sigma;
  if (ms.back().kind != want) mismatch("last marker of " + quote(mid) + " is not " + (x.forward ? "rho" : "sigma"));
  std::vector<Marker> mu(ms.begin(), ms.end() - 1);
  Space a = ms.back().space;
  Signature body = typecheck(mid.lift().body);
  Type h(body.source.begin() + 1, body.source.end());
  Type k(body.target.begin() + 1, body.target.end());
  Factor top = lifted_u(mu, a, false, k);
  Factor bottom = lifted_u(mu, a, true, h);
  if (x.forward) {
    Factor nm = mid;
    nm.lift().markers.back().kind = Marker::Sigma;
    x.replace(1, {top, nm, bottom});
    return {false, {}};
  }
  if (!(x.at(0) == top)) mismatch("factor " + std::to_string(x.i) + " is " + quote(x.at(0)) + ", expected " + quote(top));
  if (!(x.at(2) == bottom))
    mismatch("factor " + std::to_string(x.i + 2) + " is " + quote(x.at(2)) + ", expected " + quote(bottom));
  Factor nm = mid;
  nm.lift().markers.back().kind = Marker::Rho;
  x.replace(3, {nm});
  return {true, {}};
}

// R5, R6, R6-Omega, R7: template rules, closed under adjoints and a uniform right padding.
Inverse rule_definition(Ctx& x, const std::string& name) {
  const Definition& d = definitions().at(name);
  Bind preset;
  for (const std::string& v : kMeta)
    if (auto s = x.binding(v)) preset[v] = parse_space(*s, x.objects);
  std::string last_failure;
  for (bool adj : {false, true}) {
    Chain from = x.forward ? d.lhs : d.rhs;
    Chain to = x.forward ? d.rhs : d.lhs;
    if (adj) {
      from = adjoint(from);
      to = adjoint(to);
    }
    std::size_t n = from.factors.size();
    if (x.i + n > x.c.factors.size()) {
      last_failure = "segment shorter than " + std::to_string(n) + " factors";
      continue;
    }
    Bind b = preset;
    std::optional<Type> extra;
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) ok = match_factor(from.factors[k], x.c.factors[x.i + k], b, &extra);
    if (!ok) {
      std::string seg;
      for (std::size_t k = 0; k < n; ++k) seg += (k ? " . " : "") + to_string(x.c.factors[x.i + k]);
      last_failure = "'" + seg + "' does not match '" + to_string(from) + "'";
      continue;
    }
    Chain out = subst(to, b);
    for (Factor& f : out.factors) f.right.insert(f.right.end(), extra->begin(), extra->end());
    x.replace(n, out.factors);
    return {!x.forward, {}};
  }
  mismatch(last_failure);
}

// R8: interchange of two factors acting on disjoint tensor slots, oriented so
// that the forward direction moves the left factor's core to the right.
Inverse rule_r8(Ctx& x) {
  const Factor& f = x.at(0);
  const Factor& g = x.at(1);
  Signature cf = core_type(f);
  Signature cg = core_type(g);
  Type mid = factor_type(f).source;
  std::size_t lf = f.left.size();
  std::size_t lg = g.left.size();
  Factor nf = f;
  Factor ng = g;
  if (x.forward) {
    if (lf + cf.source.size() > lg) mismatch("core of factor " + std::to_string(x.i) + " is not left of the next core");
    Type between(mid.begin() + static_cast<long>(lf + cf.source.size()), mid.begin() + static_cast<long>(lg));
    nf.right = between;
    nf.right.insert(nf.right.end(), cg.source.begin(), cg.source.end());
    nf.right.insert(nf.right.end(), g.right.begin(), g.right.end());
    ng.left = f.left;
    ng.left.insert(ng.left.end(), cf.target.begin(), cf.target.end());
    ng.left.insert(ng.left.end(), between.begin(), between.end());
  } else {
    if (lg + cg.target.size() > lf) mismatch("core of factor " + std::to_string(x.i) + " is not right of the next core");
    Type between(mid.begin() + static_cast<long>(lg + cg.target.size()), mid.begin() + static_cast<long>(lf));
    nf.left = g.left;
    nf.left.insert(nf.left.end(), cg.source.begin(), cg.source.end());
    nf.left.insert(nf.left.end(), between.begin(), between.end());
    ng.right = between;
    ng.right.insert(ng.right.end(), cf.target.begin(), cf.target.end());
    ng.right.insert(ng.right.end(), f.right.begin(), f.right.end());
  }
  x.replace(2, {ng, nf});
  return {!x.forward, {}};
}

bool block_diagonal(const Factor& f) {
  if (f.is_gen()) return f.gen().name == "u" || f.gen().name == "omega";
  for (const Marker& m : f.lift().markers)
    if (m.kind != Marker::Sigma) return false;
  const auto& body = f.lift().body.factors;
  return !body.empty() && std::all_of(body.begin(), body.end(), block_diagonal);
}

bool is_omega(const Factor& f) { return f.is_gen() && f.gen().name == "omega"; }

// S1-phase: a phase factor commutes with grade-diagonal endomorphisms.
Inverse rule_s1(Ctx& x) {
  const Factor& f = x.at(0);
  const Factor& g = x.at(1);
  const Factor& phase = x.forward ? f : g;
  const Factor& other = x.forward ? g : f;
  if (!is_omega(phase)) mismatch(quote(phase) + " is not an omega factor");
  if (is_omega(other) || !block_diagonal(other)) mismatch(quote(other) + " is not a grade-diagonal endomorphism");
  Signature so = factor_type(other);
  if (!(so.source == so.target) || !(so == factor_type(phase))) mismatch("factors act on different spaces");
  Factor a = f;
  Factor b = g;
  x.replace(2, {b, a});
  return {!x.forward, {}};
}

Chain& navigate(Chain& t, const std::vector<int>& path) {
  Chain* c = &t;
  for (int p : path) {
    if (p < 0 || static_cast<std::size_t>(p) >= c->factors.size() || c->factors[static_cast<std::size_t>(p)].is_gen())
      mismatch("position path does not lead into a lift body");
    c = &c->factors[static_cast<std::size_t>(p)].lift().body;
  }
  return *c;
}

}  // namespace

Applied apply_step(const Term& t, const Step& s, const std::set<std::string>& objects) {
  Term out = t;
  Chain& c = navigate(out, s.at.path);
  if (s.at.index < 0) mismatch("negative index");
  Ctx x{c, static_cast<std::size_t>(s.at.index), s.forward, s.bindings, objects, {}};
  Inverse inv;
  try {
    const std::string& r = s.rule;
    if (r == "R1") inv = rule_r1(x);
    else if (r == "R2") inv = rule_r2(x);
    else if (r == "R3-merge") inv = rule_r3_merge(x);
    else if (r == "R3-nest") inv = rule_r3_nest(x);
    else if (r == "R3-pad") inv = rule_r3_pad(x);
    else if (r == "R3-unit") inv = rule_r3_unit(x);
    else if (r == "R3-id") inv = rule_r3_id(x);
    else if (r == "R4") inv = rule_r4(x);
    else if (r == "R8") inv = rule_r8(x);
    else if (r == "S1-phase") inv = rule_s1(x);
    else if (definitions().count(r)) inv = rule_definition(x, r);
    else mismatch("unknown rule '" + r + "'");
  } catch (const ParseError& e) {
    mismatch(std::string("bad binding: ") + e.what());
  }
  for (const auto& [k, v] : s.bindings)
    if (!x.used.count(k)) mismatch("unexpected binding '" + k + "'");

  Signature before = typecheck(t);
  Signature after;
  try {
    after = typecheck(out);
  } catch (const IllTyped& e) {
    throw std::logic_error(s.rule + " broke typing: " + e.what());
  }
  if (!(before == after)) throw std::logic_error(s.rule + " changed the type of the term");

  Step back{s.rule, s.at, inv.forward, inv.bindings, s.line};
  return {std::move(out), std::move(back)};
}

Term apply_rule(const Term& t, const std::string& rule, const Position& at, bool forward,
                const std::map<std::string, std::string>& bindings, const std::set<std::string>& objects) {
  return apply_step(t, Step{rule, at, forward, bindings, 0}, objects).term;
}

namespace {

void collect_paths(const Chain& c, std::vector<int>& prefix, std::vector<std::pair<std::vector<int>, std::size_t>>& out) {
  out.emplace_back(prefix, c.factors.size());
  for (std::size_t i = 0; i < c.factors.size(); ++i) {
    if (c.factors[i].is_gen()) continue;
    prefix.push_back(static_cast<int>(i));
    collect_paths(c.factors[i].lift().body, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Step> find_redexes(const Term& t, const std::set<std::string>& objects) {
  std::vector<std::pair<std::vector<int>, std::size_t>> chains;
  std::vector<int> prefix;
  collect_paths(t, prefix, chains);
  std::vector<Step> out;
  for (const auto& [path, n] : chains)
    for (std::size_t i = 0; i < n; ++i)
      for (const std::string& r : rule_names())
        for (bool fwd : {true, false}) {
          Step s{r, {path, static_cast<int>(i)}, fwd, {}, 0};
          try {
            apply_step(t, s, objects);
            out.push_back(s);
          } catch (const RuleMismatch&) {
          }
        }
  return out;
}

}  // namespace gkernel::prover
