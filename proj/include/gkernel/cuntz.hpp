#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gkernel/errors.hpp"

namespace gkernel {

using Rational = boost::multiprecision::cpp_rational;

/// re + im·i with exact rational parts.
struct ExactComplex {
  Rational re = 0;
  Rational im = 0;

  ExactComplex() = default;
  ExactComplex(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  ExactComplex(int r) : re(r) {}

  friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  ExactComplex operator-() const { return {-re, -im}; }
  ExactComplex& operator+=(const ExactComplex& o) { return *this = *this + o; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) { return a.re == b.re && a.im == b.im; }

  /// "(1/2-3i)"-style text without the parentheses: "1/2-3i", "i", "-2".
  std::string to_string() const;
  /// Inverse of to_string(). Throws ParseError.
  static ExactComplex parse(const std::string& text);
};

template <class Coeff>
struct CoeffTraits;

template <>
struct CoeffTraits<ExactComplex> {
  static ExactComplex zero() { return {}; }
  static ExactComplex one() { return {1}; }
  static bool is_zero(const ExactComplex& c) { return c.re == 0 && c.im == 0; }
  static bool same(const ExactComplex& a, const ExactComplex& b) { return a == b; }
  static ExactComplex conj(const ExactComplex& c) { return {c.re, -c.im}; }
  static std::string to_string(const ExactComplex& c) { return c.to_string(); }
};

template <>
struct CoeffTraits<std::complex<double>> {
  static constexpr double tolerance = 1e-12;
  static std::complex<double> zero() { return 0.0; }
  static std::complex<double> one() { return 1.0; }
  static bool is_zero(const std::complex<double>& c) { return std::abs(c) <= tolerance; }
  static bool same(const std::complex<double>& a, const std::complex<double>& b) { return std::abs(a - b) <= tolerance; }
  static std::complex<double> conj(const std::complex<double>& c) { return std::conj(c); }
  static std::string to_string(const std::complex<double>& c);
};

/// Opaque symbol sitting between the creation and annihilation parts.
struct FormalSymbol {
  std::string name;
  bool adjoint = false;
  friend auto operator<=>(const FormalSymbol&, const FormalSymbol&) = default;
  friend bool operator==(const FormalSymbol&, const FormalSymbol&) = default;
};

/// v_μ [m] v_ν* with generator indices 1..n.
struct CuntzWord {
  std::vector<int> mu;
  std::optional<FormalSymbol> symbol;
  std::vector<int> nu;
  friend auto operator<=>(const CuntzWord&, const CuntzWord&) = default;
  friend bool operator==(const CuntzWord&, const CuntzWord&) = default;
};

enum class Equality { Equal, NotEqual, Undecided };

/// Finite linear combination of normal-form words in O_n.
template <class Coeff>
class BasicCuntzElement {
 public:
  using Traits = CoeffTraits<Coeff>;
  using Terms = std::map<CuntzWord, Coeff>;

  explicit BasicCuntzElement(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("Cuntz algebra needs n >= 1");
  }

  static BasicCuntzElement one(int n) { return word(n, {}, {}, Traits::one()); }
  static BasicCuntzElement generator(int n, int i) { return word(n, {i}, {}, Traits::one()); }
  static BasicCuntzElement word(int n, std::vector<int> mu, std::vector<int> nu, Coeff c = Traits::one(),
                                std::optional<FormalSymbol> symbol = std::nullopt) {
    BasicCuntzElement e(n);
    for (int i : mu) e.check_index(i);
    for (int i : nu) e.check_index(i);
    e.add_term(CuntzWord{std::move(mu), std::move(symbol), std::move(nu)}, c);
    return e;
  }
  static BasicCuntzElement symbol(int n, const std::string& name, bool adjoint = false) {
    return word(n, {}, {}, Traits::one(), FormalSymbol{name, adjoint});
  }

  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool has_symbol() const {
    for (const auto& [w, c] : terms_)
      if (w.symbol) return true;
    return false;
  }

  void add_term(const CuntzWord& w, const Coeff& c) {
    auto it = terms_.find(w);
    if (it == terms_.end()) {
      if (!Traits::is_zero(c)) terms_.emplace(w, c);
      return;
    }
    it->second = it->second + c;
    if (Traits::is_zero(it->second)) terms_.erase(it);
  }

  friend BasicCuntzElement operator+(const BasicCuntzElement& a, const BasicCuntzElement& b) {
    a.require_same(b);
    BasicCuntzElement out = a;
    for (const auto& [w, c] : b.terms_) out.add_term(w, c);
    return out;
  }
  friend BasicCuntzElement operator-(const BasicCuntzElement& a, const BasicCuntzElement& b) {
    return a + b.scaled(-Traits::one());
  }
  BasicCuntzElement scaled(const Coeff& s) const {
    BasicCuntzElement out(n_);
    for (const auto& [w, c] : terms_) out.add_term(w, s * c);
    return out;
  }

  friend BasicCuntzElement operator*(const BasicCuntzElement& a, const BasicCuntzElement& b) {
    a.require_same(b);
    BasicCuntzElement out(a.n_);
    for (const auto& [w1, c1] : a.terms_)
      for (const auto& [w2, c2] : b.terms_)
        if (auto w = multiply_words(w1, w2)) out.add_term(*w, c1 * c2);
    return out;
  }

  BasicCuntzElement adjoint() const {
    BasicCuntzElement out(n_);
    for (const auto& [w, c] : terms_) {
      std::optional<FormalSymbol> s = w.symbol;
      if (s) s->adjoint = !s->adjoint;
      out.add_term(CuntzWord{w.nu, s, w.mu}, Traits::conj(c));
    }
    return out;
  }

  /// v_b* v_c reduced: nullopt for zero, otherwise the word product.
  /// Throws UnsupportedExpression when a formal symbol would leave the
  /// centre of the word or two symbols meet.
  static std::optional<CuntzWord> multiply_words(const CuntzWord& w1, const CuntzWord& w2) {
    const auto& b = w1.nu;
    const auto& c = w2.mu;
    const std::size_t k = std::min(b.size(), c.size());
    for (std::size_t i = 0; i < k; ++i)
      if (b[i] != c[i]) return std::nullopt;
    const std::vector<int> c_rest(c.begin() + static_cast<long>(k), c.end());
    const std::vector<int> b_rest(b.begin() + static_cast<long>(k), b.end());
    if (w1.symbol && w2.symbol) throw UnsupportedExpression("product places two formal symbols in one word");
    if (w1.symbol && !c_rest.empty())
      throw UnsupportedExpression("formal symbol " + w1.symbol->name + " would be followed by a creation operator");
    if (w2.symbol && !b_rest.empty())
      throw UnsupportedExpression("formal symbol " + w2.symbol->name + " would be preceded by an annihilation operator");
    CuntzWord out;
    out.mu = w1.mu;
    out.mu.insert(out.mu.end(), c_rest.begin(), c_rest.end());
    out.symbol = w1.symbol ? w1.symbol : w2.symbol;
    out.nu = w2.nu;
    out.nu.insert(out.nu.end(), b_rest.begin(), b_rest.end());
    return out;
  }

 private:
  void check_index(int i) const {
    if (i < 1 || i > n_) throw std::invalid_argument("generator index " + std::to_string(i) + " outside 1.." + std::to_string(n_));
  }
  void require_same(const BasicCuntzElement& o) const {
    if (o.n_ != n_) throw std::invalid_argument("Cuntz elements over different n");
  }

  int n_;
  Terms terms_;
};

using CuntzElement = BasicCuntzElement<ExactComplex>;
using FloatCuntzElement = BasicCuntzElement<std::complex<double>>;

/// Re-expresses every symbol-free term with |ν| = level via
/// v_μ v_ν* = Σ_i v_{μi} v_{νi}*. Terms with |ν| > level are kept as is.
template <class Coeff>
BasicCuntzElement<Coeff> expand_to_level(const BasicCuntzElement<Coeff>& a, std::size_t level) {
  BasicCuntzElement<Coeff> out(a.n());
  for (const auto& [w, c] : a.terms()) {
    if (w.symbol || w.nu.size() >= level) {
      out.add_term(w, c);
      continue;
    }
    const std::size_t extra = level - w.nu.size();
    std::vector<int> suffix(extra, 1);
    while (true) {
      CuntzWord x = w;
      x.mu.insert(x.mu.end(), suffix.begin(), suffix.end());
      x.nu.insert(x.nu.end(), suffix.begin(), suffix.end());
      out.add_term(x, c);
      std::size_t i = extra;
      while (i > 0 && suffix[i - 1] == a.n()) suffix[--i] = 1;
      if (i == 0) break;
      ++suffix[i - 1];
    }
  }
  return out;
}

/// Decides a = b in O_n by expanding symbol-free terms to the common level
/// max|ν|; words carrying a formal symbol are compared syntactically. A
/// level above `level_cap` gives Undecided.
template <class Coeff>
Equality equals(const BasicCuntzElement<Coeff>& a, const BasicCuntzElement<Coeff>& b, std::size_t level_cap = 8) {
  if (a.n() != b.n()) throw std::invalid_argument("Cuntz elements over different n");
  const auto diff = a - b;
  std::size_t level = 0;
  for (const auto& [w, c] : diff.terms())
    if (!w.symbol) level = std::max(level, w.nu.size());
  if (level > level_cap) return Equality::Undecided;
  return expand_to_level(diff, level).is_zero() ? Equality::Equal : Equality::NotEqual;
}

/// Matrix with entries in O_n.
template <class Coeff>
class BasicCuntzMatrix {
 public:
  using Element = BasicCuntzElement<Coeff>;

  BasicCuntzMatrix(int n, int rows, int cols)
      : n_(n), rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows * cols), Element(n)) {}

  int n() const { return n_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Element& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Element& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * cols_ + j)]; }

  friend BasicCuntzMatrix operator*(const BasicCuntzMatrix& a, const BasicCuntzMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Cuntz matrix product shape mismatch");
    BasicCuntzMatrix out(a.n_, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j)
        for (int k = 0; k < a.cols_; ++k) out(i, j) = out(i, j) + a(i, k) * b(k, j);
    return out;
  }

  BasicCuntzMatrix adjoint() const {
    BasicCuntzMatrix out(n_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).adjoint();
    return out;
  }

  static BasicCuntzMatrix identity(int n, int size) {
    BasicCuntzMatrix out(n, size, size);
    for (int i = 0; i < size; ++i) out(i, i) = Element::one(n);
    return out;
  }

 private:
  int n_, rows_, cols_;
  std::vector<Element> entries_;
};

using CuntzMatrix = BasicCuntzMatrix<ExactComplex>;

/// Entrywise equals(); NotEqual on shape mismatch, Undecided dominates Equal.
template <class Coeff>
Equality equals(const BasicCuntzMatrix<Coeff>& a, const BasicCuntzMatrix<Coeff>& b, std::size_t level_cap = 8) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return Equality::NotEqual;
  Equality verdict = Equality::Equal;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const auto e = equals(a(i, j), b(i, j), level_cap);
      if (e == Equality::NotEqual) return e;
      if (e == Equality::Undecided) verdict = e;
    }
  return verdict;
}

struct RowCheck {
  bool pass = true;
  std::optional<std::pair<int, int>> entry;  // 1-indexed entry of U*U that fails
  bool sum_failed = false;                   // UU* ≠ 1
  std::string detail;
};

/// Checks that the row (r_1,…,r_k) over O_n is unitary: (U*U)_{ij} = δ_ij
/// and UU* = Σ r_i r_i* = 1.
RowCheck row_unitary_check(int n, const std::vector<CuntzElement>& row);
/// The canonical row (v_1,…,v_n).
RowCheck row_unitary_check(int n);

/// Σ_{i,j} T_ij v_i m v_j*; without a symbol the words are v_i v_j*.
CuntzElement conjugate_amplified(int n, const std::optional<FormalSymbol>& m,
                                 const std::vector<std::vector<ExactComplex>>& T);

/// A unital *-endomorphism of O_n given by the images of v_1..v_n.
class CuntzEndomorphism {
 public:
  /// Throws InvalidEndomorphism unless the images form a Cuntz family.
  CuntzEndomorphism(int n, std::vector<CuntzElement> images);

  static CuntzEndomorphism identity(int n);
  /// λ_u(v_i) = u·v_i.
  static CuntzEndomorphism lambda(const CuntzElement& u);

  int n() const { return n_; }
  const std::vector<CuntzElement>& images() const { return images_; }

  /// Throws UnsupportedExpression on words carrying a formal symbol.
  CuntzElement apply(const CuntzElement& a) const;

  /// (this ∘ other)(v_i) = this(other(v_i)).
  CuntzEndomorphism after(const CuntzEndomorphism& other) const;

 private:
  int n_;
  std::vector<CuntzElement> images_;
};

/// Entrywise ^ρ on a matrix over O_n.
CuntzMatrix amp_endofunctor(const CuntzEndomorphism& rho, const CuntzMatrix& a);

/// Canonical text, e.g. "v1 v2* + (1/2) v12 v21*". Parsing the output of
/// to_string() reproduces the element.
std::string to_string(const CuntzElement& a);
std::string to_string(const FloatCuntzElement& a);
std::string to_string(Equality e);

/// Parses sums of products of factors: `1`, `v12`, `v21*`, `v[10,2]`,
/// symbol names with optional `*`, and coefficients such as `(1/2-3i)`.
/// Throws ParseError with a 1-based column.
CuntzElement parse_cuntz(int n, const std::string& text);

FloatCuntzElement to_float(const CuntzElement& a);

}  // namespace gkernel
