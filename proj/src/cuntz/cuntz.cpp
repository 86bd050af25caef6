#include "gkernel/cuntz.hpp"

#include <cctype>
#include <sstream>

namespace gkernel {

namespace {

std::string rational_text(const Rational& r) { return r.str(); }

std::string word_text(int n, const std::vector<int>& w) {
  std::string s = "v";
  if (n <= 9) {
    for (int i : w) s += static_cast<char>('0' + i);
    return s;
  }
  s += "[";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + "]";
}

template <class Coeff>
std::string element_text(const BasicCuntzElement<Coeff>& a) {
  using Traits = CoeffTraits<Coeff>;
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : a.terms()) {
    if (!first) out += " + ";
    first = false;
    std::vector<std::string> parts;
    if (!Traits::same(c, Traits::one())) parts.push_back("(" + Traits::to_string(c) + ")");
    if (!w.mu.empty()) parts.push_back(word_text(a.n(), w.mu));
    if (w.symbol) parts.push_back(w.symbol->name + (w.symbol->adjoint ? "*" : ""));
    if (!w.nu.empty()) parts.push_back(word_text(a.n(), w.nu) + "*");
    if (w.mu.empty() && !w.symbol && w.nu.empty()) parts.push_back("1");
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " " : "") + parts[i];
  }
  return out;
}

class Parser {
 public:
  Parser(int n, const std::string& text) : n_(n), s_(text) {}

  CuntzElement element() {
    skip();
    if (at_end()) fail("empty expression");
    CuntzElement total(n_);
    bool negate = false;
    while (true) {
      CuntzElement t = term();
      total = total + (negate ? t.scaled(ExactComplex(-1)) : t);
      skip();
      if (at_end()) break;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        negate = s_[pos_] == '-';
        ++pos_;
        skip();
        if (at_end()) fail("expected a term after '" + std::string(1, s_[pos_ - 1]) + "'");
        continue;
      }
      fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    }
    return total;
  }

 private:
  CuntzElement term() {
    CuntzElement acc = CuntzElement::one(n_);
    bool any = false;
    while (true) {
      skip();
      if (at_end() || s_[pos_] == '+' || s_[pos_] == '-') break;
      acc = acc * factor();
      any = true;
    }
    if (!any) fail("expected a factor");
    return acc;
  }

  CuntzElement factor() {
    const char c = s_[pos_];
    if (c == '(') {
      const std::size_t start = ++pos_;
      const auto close = s_.find(')', start);
      if (close == std::string::npos) fail("unclosed coefficient");
      ExactComplex z;
      try {
        z = ExactComplex::parse(s_.substr(start, close - start));
      } catch (const ParseError& e) {
        throw ParseError("bad coefficient '" + s_.substr(start, close - start) + "'", start + 1);
      }
      pos_ = close + 1;
      return CuntzElement::one(n_).scaled(z);
    }
    if (c == '1' || c == '0') {
      ++pos_;
      if (!at_end() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) fail("unexpected digit sequence");
      return c == '1' ? CuntzElement::one(n_) : CuntzElement(n_);
    }
    if (c == 'v' && pos_ + 1 < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '[')) {
      ++pos_;
      std::vector<int> w;
      if (s_[pos_] == '[') {
        ++pos_;
        while (true) {
          skip();
          const std::size_t start = pos_;
          while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
          if (start == pos_) fail("expected a generator index");
          w.push_back(index(std::stoi(s_.substr(start, pos_ - start)), start));
          skip();
          if (at_end()) fail("unclosed '['");
          if (s_[pos_] == ']') {
            ++pos_;
            break;
          }
          if (s_[pos_] != ',') fail("expected ',' or ']'");
          ++pos_;
        }
      } else {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          w.push_back(index(s_[pos_] - '0', pos_));
          ++pos_;
        }
      }
      if (!at_end() && s_[pos_] == '*') {
        ++pos_;
        return CuntzElement::word(n_, {}, w);
      }
      return CuntzElement::word(n_, w, {});
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      bool adj = false;
      if (!at_end() && s_[pos_] == '*') {
        adj = true;
        ++pos_;
      }
      return CuntzElement::symbol(n_, name, adj);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  int index(int i, std::size_t at) {
    if (i < 1 || i > n_) throw ParseError("generator index " + std::to_string(i) + " outside 1.." + std::to_string(n_), at + 1);
    return i;
  }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_ + 1); }

  int n_;
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string ExactComplex::to_string() const {
  if (im == 0) return rational_text(re);
  auto imag = [](const Rational& v) {
    if (v == 1) return std::string("i");
    if (v == -1) return std::string("-i");
    return rational_text(v) + "i";
  };
  if (re == 0) return imag(im);
  const std::string i = imag(im);
  return rational_text(re) + (i[0] == '-' ? "" : "+") + i;
}

ExactComplex ExactComplex::parse(const std::string& text) {
  ExactComplex out;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto digits = [&] {
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  };
  skip();
  if (pos == text.size()) throw ParseError("empty coefficient", 1);
  bool first = true;
  while (true) {
    skip();
    if (pos == text.size()) break;
    int sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip();
    } else if (!first) {
      throw ParseError("expected '+' or '-' in coefficient", pos + 1);
    }
    first = false;
    Rational value = 1;
    const std::string num = digits();
    if (!num.empty()) {
      value = Rational(boost::multiprecision::cpp_int(num));
      if (pos < text.size() && text[pos] == '/') {
        ++pos;
        const std::string den = digits();
        if (den.empty()) throw ParseError("missing denominator", pos + 1);
        const boost::multiprecision::cpp_int d(den);
        if (d == 0) throw ParseError("zero denominator", pos);
        value /= Rational(d);
      }
    }
    if (pos < text.size() && text[pos] == 'i') {
      ++pos;
      out.im += sign * value;
    } else {
      if (num.empty()) throw ParseError("expected a number", pos + 1);
      out.re += sign * value;
    }
  }
  return out;
}

std::string CoeffTraits<std::complex<double>>::to_string(const std::complex<double>& c) {
  std::ostringstream os;
  os.precision(17);
  os << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i";
  return os.str();
}

RowCheck row_unitary_check(int n, const std::vector<CuntzElement>& row) {
  RowCheck out;
  const int k = static_cast<int>(row.size());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const CuntzElement want = i == j ? CuntzElement::one(n) : CuntzElement(n);
      const CuntzElement got = row[static_cast<std::size_t>(i)].adjoint() * row[static_cast<std::size_t>(j)];
      const Equality e = equals(got, want);
      if (e != Equality::Equal) {
        out.pass = false;
        out.entry = {i + 1, j + 1};
        out.detail = "(U*U)_" + std::to_string(i + 1) + std::to_string(j + 1) + " = " + to_string(got) + ", expected " +
                     to_string(want) + " [" + to_string(e) + "]";
        return out;
      }
    }
  CuntzElement sum(n);
  for (const auto& r : row) sum = sum + r * r.adjoint();
  const Equality e = equals(sum, CuntzElement::one(n));
  if (e != Equality::Equal) {
    out.pass = false;
    out.sum_failed = true;
    out.detail = "UU* = " + to_string(sum) + ", expected 1 [" + to_string(e) + "]";
  }
  return out;
}

RowCheck row_unitary_check(int n) {
  std::vector<CuntzElement> row;
  for (int i = 1; i <= n; ++i) row.push_back(CuntzElement::generator(n, i));
  return row_unitary_check(n, row);
}

CuntzElement conjugate_amplified(int n, const std::optional<FormalSymbol>& m,
                                 const std::vector<std::vector<ExactComplex>>& T) {
  if (static_cast<int>(T.size()) != n) throw std::invalid_argument("conjugate_amplified: T must be n x n");
  CuntzElement out(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(T[static_cast<std::size_t>(i)].size()) != n)
      throw std::invalid_argument("conjugate_amplified: T must be n x n");
    for (int j = 0; j < n; ++j)
      out = out + CuntzElement::word(n, {i + 1}, {j + 1}, T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], m);
  }
  return out;
}

CuntzEndomorphism::CuntzEndomorphism(int n, std::vector<CuntzElement> images) : n_(n), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != n)
    throw InvalidEndomorphism("need " + std::to_string(n) + " generator images, got " + std::to_string(images_.size()));
  for (const auto& im : images_) {
    if (im.n() != n) throw InvalidEndomorphism("generator image lives in a different Cuntz algebra");
    if (im.has_symbol()) throw InvalidEndomorphism("generator image carries a formal symbol");
  }
  const auto check = row_unitary_check(n, images_);
  if (!check.pass) throw InvalidEndomorphism("images do not satisfy the Cuntz relations: " + check.detail);
}

CuntzEndomorphism CuntzEndomorphism::identity(int n) {
  std::vector<CuntzElement> im;
  for (int i = 1; i <= n; ++i) im.push_back(CuntzElement::generator(n, i));
  return CuntzEndomorphism(n, std::move(im));
}

CuntzEndomorphism CuntzEndomorphism::lambda(const CuntzElement& u) {
  std::vector<CuntzElement> im;
  for (int i = 1; i <= u.n(); ++i) im.push_back(u * CuntzElement::generator(u.n(), i));
  return CuntzEndomorphism(u.n(), std::move(im));
}

CuntzElement CuntzEndomorphism::apply(const CuntzElement& a) const {
  if (a.n() != n_) throw std::invalid_argument("endomorphism applied to an element over a different n");
  CuntzElement out(n_);
  for (const auto& [w, c] : a.terms()) {
    if (w.symbol) throw UnsupportedExpression("endomorphism applied to formal symbol " + w.symbol->name);
    CuntzElement left = CuntzElement::one(n_), right = CuntzElement::one(n_);
    for (int i : w.mu) left = left * images_[static_cast<std::size_t>(i - 1)];
    for (int i : w.nu) right = right * images_[static_cast<std::size_t>(i - 1)];
    out = out + (left * right.adjoint()).scaled(c);
  }
  return out;
}

CuntzEndomorphism CuntzEndomorphism::after(const CuntzEndomorphism& other) const {
  if (other.n_ != n_) throw std::invalid_argument("composing endomorphisms over different n");
  std::vector<CuntzElement> im;
  for (const auto& x : other.images_) im.push_back(apply(x));
  return CuntzEndomorphism(n_, std::move(im));
}

CuntzMatrix amp_endofunctor(const CuntzEndomorphism& rho, const CuntzMatrix& a) {
  CuntzMatrix out(a.n(), a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = rho.apply(a(i, j));
  return out;
}

std::string to_string(const CuntzElement& a) { return element_text(a); }
std::string to_string(const FloatCuntzElement& a) { return element_text(a); }

std::string to_string(Equality e) {
  switch (e) {
    case Equality::Equal: return "equal";
    case Equality::NotEqual: return "not equal";
    case Equality::Undecided: return "undecided at level cap";
  }
  return "?";
}

CuntzElement parse_cuntz(int n, const std::string& text) { return Parser(n, text).element(); }

FloatCuntzElement to_float(const CuntzElement& a) {
  FloatCuntzElement out(a.n());
  for (const auto& [w, c] : a.terms()) out.add_term(w, {c.re.convert_to<double>(), c.im.convert_to<double>()});
  return out;
}

}  // namespace gkernel
