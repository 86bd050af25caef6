#include "gkernel/prover_numeric.hpp"

namespace gkernel::prover {

namespace {

struct Env {
  const NumericKernelModel& model;
  const Cochain& omega;
  const std::map<std::string, GradedObject>& objects;

  GradedObject object(const Space& s) const {
    if (s.is_product()) return tensor(object(s.parts[0]), object(s.parts[1]));
    auto it = objects.find(s.name);
    if (it == objects.end()) throw std::invalid_argument("no instance for object " + s.name);
    return it->second;
  }

  std::vector<int> dims(const Type& t) const {
    std::vector<int> out;
    for (const Atom& a : t) out.push_back(a.m ? model.d() : object(a.space).size());
    return out;
  }
};

int total(const std::vector<int>& dims) {
  int n = 1;
  for (int d : dims) n *= d;
  return n;
}

// Mixed-radix digits; a leading M atom is the fastest digit.
std::vector<int> digits(int idx, const std::vector<int>& dims, bool m_first) {
  std::vector<int> out(dims.size());
  std::size_t start = 0;
  if (m_first && !dims.empty()) {
    out[0] = idx % dims[0];
    idx /= dims[0];
    start = 1;
  }
  for (std::size_t i = dims.size(); i-- > start;) {
    out[i] = idx % dims[i];
    idx /= dims[i];
  }
  return out;
}

int compose(const std::vector<int>& dg, const std::vector<int>& dims, bool m_first) {
  int idx = 0;
  std::size_t start = m_first && !dims.empty() ? 1 : 0;
  for (std::size_t i = start; i < dims.size(); ++i) idx = idx * dims[i] + dg[i];
  if (start) idx = idx * dims[0] + dg[0];
  return idx;
}

bool m_first(const Type& t) { return !t.empty() && t[0].m; }

// id_L ⊗ core ⊗ id_R in the full index convention.
CMatrix pad(const Env& env, const CMatrix& core, const Signature& cs, const Type& left, const Type& right) {
  Type in = left, out = left;
  in.insert(in.end(), cs.source.begin(), cs.source.end());
  out.insert(out.end(), cs.target.begin(), cs.target.end());
  in.insert(in.end(), right.begin(), right.end());
  out.insert(out.end(), right.begin(), right.end());
  if (left.empty() && right.empty()) return core;
  auto din = env.dims(in), dout = env.dims(out), dcs = env.dims(cs.source), dct = env.dims(cs.target);
  const std::size_t nl = left.size(), ns = cs.source.size();
  CMatrix m = CMatrix::Zero(total(dout), total(din));
  for (int j = 0; j < total(din); ++j) {
    auto dj = digits(j, din, m_first(in));
    std::vector<int> sub(dj.begin() + static_cast<long>(nl), dj.begin() + static_cast<long>(nl + ns));
    int col = compose(sub, dcs, m_first(cs.source));
    for (int r = 0; r < core.rows(); ++r) {
      if (core(r, col) == std::complex<double>(0)) continue;
      auto dr = digits(r, dct, m_first(cs.target));
      std::vector<int> o(dj.begin(), dj.begin() + static_cast<long>(nl));
      o.insert(o.end(), dr.begin(), dr.end());
      o.insert(o.end(), dj.begin() + static_cast<long>(nl + ns), dj.end());
      m(compose(o, dout, m_first(out)), j) += core(r, col);
    }
  }
  return m;
}

// σ_X on an operator M ⊗ H → M ⊗ K.
CMatrix sigma_rect(const Env& env, const GradedObject& x, const CMatrix& t, int h, int k) {
  const int d = env.model.d();
  CMatrix out = CMatrix::Zero(x.size() * k * d, x.size() * h * d);
  for (int i = 0; i < x.size(); ++i) {
    const CMatrix& v = env.model.V(x.grade(i));
    const CMatrix wk = Eigen::kroneckerProduct(CMatrix::Identity(k, k), v);
    const CMatrix wh = Eigen::kroneckerProduct(CMatrix::Identity(h, h), v);
    out.block(i * k * d, i * h * d, k * d, h * d) = wk * t * wh.adjoint();
  }
  return out;
}

CMatrix eval_chain(const Env& env, const Chain& c);

CMatrix eval_generator(const Env& env, const Generator& g) {
  const int d = env.model.d();
  CMatrix m;
  if (g.name == "iota") {
    int n = env.object(g.args[0]).size() * env.object(g.args[1]).size();
    m = CMatrix::Identity(n, n);
  } else if (g.name == "u") {
    m = u_object(env.model, env.object(g.args[0]), env.object(g.args[1]));
  } else if (g.name == "omega") {
    m = associator_phase(env.object(g.args[0]), env.object(g.args[1]), env.object(g.args[2]), env.omega);
  } else if (g.name == "Omega") {
    CMatrix a = associator_phase(env.object(g.args[0]), env.object(g.args[1]), env.object(g.args[2]), env.omega);
    m = Eigen::kroneckerProduct(a, CMatrix::Identity(d, d));
  } else {
    throw SymbolicOnly(g.name + " has no finite-dimensional instance");
  }
  return g.adjoint ? CMatrix(m.adjoint()) : m;
}

CMatrix eval_factor(const Env& env, const Factor& f) {
  Factor bare = f;
  bare.left.clear();
  bare.right.clear();
  Signature cs = factor_type(bare);
  CMatrix core;
  if (f.is_gen()) {
    core = eval_generator(env, f.gen());
  } else {
    const Lift& l = f.lift();
    for (const Marker& mk : l.markers)
      if (mk.kind == Marker::Rho) throw SymbolicOnly("rho-lifts have no finite-dimensional instance");
    Signature body = typecheck(l.body);
    core = eval_chain(env, l.body);
    int h = total(env.dims(Type(body.source.begin() + 1, body.source.end())));
    int k = total(env.dims(Type(body.target.begin() + 1, body.target.end())));
    for (auto it = l.markers.rbegin(); it != l.markers.rend(); ++it) {
      GradedObject x = env.object(it->space);
      core = sigma_rect(env, x, core, h, k);
      h *= x.size();
      k *= x.size();
    }
  }
  return pad(env, core, cs, f.left, f.right);
}

CMatrix eval_chain(const Env& env, const Chain& c) {
  if (c.factors.empty()) {
    int n = total(env.dims(c.id_type));
    return CMatrix::Identity(n, n);
  }
  CMatrix m = eval_factor(env, c.factors.back());
  for (std::size_t i = c.factors.size() - 1; i-- > 0;) m = eval_factor(env, c.factors[i]) * m;
  return m;
}

struct Instance {
  std::string lhs;
  std::map<std::string, std::string> bindings;
};

const std::map<std::string, Instance>& instances() {
  static const std::map<std::string, Instance> table = {
      {"R1", {"U[X] . U[X]*", {}}},
      {"R2", {"W[X,Y] . ^{rho[X] rho[Y]}(U[Z])", {}}},
      {"R3-merge", {"^{sigma[X]}(u[Y,Z]) . ^{sigma[X]}(u[Y,Z])", {}}},
      {"R3-nest", {"^{sigma[X]}(^{sigma[Y]}(u[Z,Z]))", {}}},
      {"R3-pad", {"^{sigma[X]}((|u[Y,Z]|Z))", {}}},
      {"R3-unit", {"^{sigma[X]}((M|iota[Y,Z]*|))", {}}},
      {"R3-id", {"^{sigma[X]}(id{M,Y})", {}}},
      {"R4", {"^{rho[X]}(u[Y,Z])", {}}},
      {"R5", {"W[X,Y]", {}}},
      {"R6", {"Fa[X,Y,Z]", {}}},
      {"R6-Omega", {"Omega[X,Y,Z]", {}}},
      {"R7", {"(M|omega[X,Y,Z]|) . (M|iota[X,Y]|Z) . u[(X,Y),Z]* . (M|iota[X,Y]*|Z) . (|u[X,Y]*|Z)", {}}},
      {"R8", {"(M|iota[X,Y]*|(Y,Z)) . (M,X,Y|iota[Y,Z]*|)", {}}},
      {"S1-phase", {"(M|omega[X,Y,Z]|) . ^{sigma[X]}(u[Y,Z])", {}}},
  };
  return table;
}

}  // namespace

CMatrix evaluate(const Term& t, const NumericKernelModel& model, const Cochain& omega,
                 const std::map<std::string, GradedObject>& objects) {
  typecheck(t);
  return eval_chain(Env{model, omega, objects}, t);
}

Soundness numeric_soundness(const std::string& rule, const NumericKernelModel& model, const GradedObject& x,
                            const GradedObject& y, const GradedObject& z) {
  auto it = instances().find(rule);
  if (it == instances().end()) throw std::invalid_argument("unknown rule '" + rule + "'");
  const std::set<std::string> names{"X", "Y", "Z"};
  Term lhs = parse_term(it->second.lhs, names);
  Term rhs = apply_rule(lhs, rule, Position{}, true, it->second.bindings, names);
  Soundness s{false, 0, to_string(lhs), to_string(rhs)};
  const std::map<std::string, GradedObject> objects{{"X", x}, {"Y", y}, {"Z", z}};
  try {
    Cochain omega = measure_omega(model);
    s.residual = op_norm(evaluate(lhs, model, omega, objects) - evaluate(rhs, model, omega, objects));
  } catch (const SymbolicOnly&) {
    s.symbolic_only = true;
  }
  return s;
}

}  // namespace gkernel::prover
