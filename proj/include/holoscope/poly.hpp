#pragma once

#include <algorithm>
#include <compare>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "holoscope/rational.hpp"
#include "holoscope/real.hpp"

namespace holoscope {

/// Dense univariate polynomial over Q, lowest degree first. The zero
/// polynomial has no coefficients; otherwise the last coefficient is nonzero.
class PolyQ {
 public:
  PolyQ() = default;
  explicit PolyQ(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  PolyQ(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

  static PolyQ constant(const Rational& c) { return PolyQ(std::vector<Rational>{c}); }
  static PolyQ monomial(const Rational& c, std::size_t deg) {
    std::vector<Rational> v(deg + 1);
    v[deg] = c;
    return PolyQ(std::move(v));
  }
  static PolyQ x() { return monomial(1, 1); }
  /// x - root
  static PolyQ linear_root(const Rational& root) { return PolyQ{-root, Rational(1)}; }

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  const Rational& leading() const { return c_.back(); }
  bool is_constant() const { return c_.size() <= 1; }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  Real operator()(const Real& x) const {
    Real acc(x.precision());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Real(*it, x.precision());
    return acc;
  }
  Complex operator()(const Complex& z) const {
    mpfr_prec_t bits = z.precision();
    Complex acc(bits);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc = acc * z;
      acc.re += Real(*it, bits);
    }
    return acc;
  }

  PolyQ derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
    return PolyQ(std::move(d));
  }

  /// Coefficients of p(x + shift), i.e. the Taylor expansion at `shift`.
  PolyQ taylor_shift(const Rational& shift) const {
    std::vector<Rational> a = c_;
    const long n = degree();
    for (long i = 0; i < n; ++i)
      for (long j = n - 1; j >= i; --j) a[j] += shift * a[j + 1];
    return PolyQ(std::move(a));
  }

  friend PolyQ operator+(const PolyQ& a, const PolyQ& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
    return PolyQ(std::move(r));
  }
  friend PolyQ operator-(const PolyQ& a, const PolyQ& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
    return PolyQ(std::move(r));
  }
  PolyQ operator-() const { return PolyQ() - *this; }
  friend PolyQ operator*(const PolyQ& a, const PolyQ& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return PolyQ(std::move(r));
  }
  friend PolyQ operator*(const Rational& s, const PolyQ& p) {
    std::vector<Rational> r = p.c_;
    for (auto& c : r) c *= s;
    return PolyQ(std::move(r));
  }
  PolyQ& operator+=(const PolyQ& o) { return *this = *this + o; }
  PolyQ& operator-=(const PolyQ& o) { return *this = *this - o; }
  PolyQ& operator*=(const PolyQ& o) { return *this = *this * o; }

  friend bool operator==(const PolyQ& a, const PolyQ& b) { return a.c_ == b.c_; }

  /// Quotient and remainder over Q.
  friend std::pair<PolyQ, PolyQ> divmod(const PolyQ& a, const PolyQ& b) {
    if (b.is_zero()) throw PreconditionError("polynomial division by zero");
    if (a.degree() < b.degree()) return {PolyQ(), a};
    std::vector<Rational> rem = a.c_;
    std::vector<Rational> quo(a.c_.size() - b.c_.size() + 1);
    const Rational& lb = b.leading();
    for (long i = static_cast<long>(quo.size()) - 1; i >= 0; --i) {
      Rational q = rem[i + b.degree()] / lb;
      quo[i] = q;
      if (q == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) rem[i + j] -= q * b.c_[j];
    }
    rem.resize(b.c_.size() - 1);
    return {PolyQ(std::move(quo)), PolyQ(std::move(rem))};
  }
  friend PolyQ operator%(const PolyQ& a, const PolyQ& b) { return divmod(a, b).second; }
  friend PolyQ operator/(const PolyQ& a, const PolyQ& b) { return divmod(a, b).first; }

  /// Integer coefficients with content 1 and positive leading coefficient.
  PolyQ primitive() const {
    if (is_zero()) return {};
    auto v = primitive_part(c_);
    if (v.back() < 0)
      for (auto& c : v) c = -c;
    return PolyQ(std::move(v));
  }
  PolyQ monic() const {
    if (is_zero()) return {};
    return (1 / leading()) * *this;
  }

  /// Total order used for deterministic sorting: degree, then coefficients.
  friend bool operator<(const PolyQ& a, const PolyQ& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (long i = a.degree(); i >= 0; --i)
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    return false;
  }

  std::string to_string(const std::string& var = "z") const {
    if (is_zero()) return "0";
    std::string out;
    for (long i = degree(); i >= 0; --i) {
      const Rational& c = c_[i];
      if (c == 0) continue;
      Rational mag = abs(c);
      if (out.empty()) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      bool unit = mag == 1 && i > 0;
      if (!unit) out += holoscope::to_string(mag);
      if (i > 0) {
        if (!unit) out += "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

inline std::ostream& operator<<(std::ostream& os, const PolyQ& p) { return os << p.to_string(); }

inline PolyQ pow(const PolyQ& p, unsigned e) {
  PolyQ r = PolyQ::constant(1);
  for (unsigned i = 0; i < e; ++i) r *= p;
  return r;
}

/// Monic gcd over Q (zero if both are zero).
inline PolyQ gcd(PolyQ a, PolyQ b) {
  while (!b.is_zero()) {
    PolyQ r = a % b;
    a = std::move(b);
    b = r.primitive();
  }
  return a.monic();
}

/// Number of times f divides p exactly (p nonzero, f nonconstant).
inline unsigned valuation(PolyQ p, const PolyQ& f) {
  if (p.is_zero()) throw PreconditionError("valuation of the zero polynomial");
  if (f.is_constant()) throw PreconditionError("valuation at a constant");
  unsigned v = 0;
  for (;;) {
    auto [q, r] = divmod(p, f);
    if (!r.is_zero()) return v;
    p = std::move(q);
    ++v;
  }
}

/// Yun's squarefree decomposition: p = c * prod_i factors[i].first ^ factors[i].second,
/// each factor primitive, squarefree and pairwise coprime.
inline std::vector<std::pair<PolyQ, unsigned>> squarefree_decomposition(const PolyQ& p) {
  std::vector<std::pair<PolyQ, unsigned>> out;
  if (p.degree() < 1) return out;
  PolyQ a = p.monic();
  PolyQ b = a.derivative();
  PolyQ c = gcd(a, b);
  PolyQ w = a / c;
  PolyQ y = b / c;
  PolyQ z = y - w.derivative();
  unsigned i = 1;
  while (w.degree() > 0) {
    PolyQ g = gcd(w, z);
    if (g.degree() > 0) out.emplace_back(g.primitive(), i);
    w = w / g;
    y = z / g;
    z = y - w.derivative();
    ++i;
  }
  return out;
}

/// Polynomial in two variables (lambda, alpha): coefficient of alpha^k is a
/// PolyQ in lambda. Trailing zero alpha-coefficients are trimmed.
class BiPolyQ {
 public:
  BiPolyQ() = default;
  explicit BiPolyQ(std::vector<PolyQ> by_alpha) : a_(std::move(by_alpha)) { trim(); }

  bool is_zero() const { return a_.empty(); }
  long degree_alpha() const { return static_cast<long>(a_.size()) - 1; }
  long degree_lambda() const {
    long d = -1;
    for (const auto& p : a_) d = std::max(d, p.degree());
    return d;
  }
  const std::vector<PolyQ>& by_alpha() const { return a_; }
  Rational coeff(std::size_t lambda_deg, std::size_t alpha_deg) const {
    return alpha_deg < a_.size() ? a_[alpha_deg].coeff(lambda_deg) : Rational(0);
  }

  /// Specialize alpha, leaving a polynomial in lambda.
  PolyQ at_alpha(const Rational& alpha) const {
    PolyQ acc;
    for (auto it = a_.rbegin(); it != a_.rend(); ++it) acc = alpha * acc + *it;
    return acc;
  }

  /// Reduce every alpha-coefficient modulo m(lambda).
  BiPolyQ reduce_mod(const PolyQ& m) const {
    std::vector<PolyQ> r;
    for (const auto& p : a_) r.push_back(p % m);
    return BiPolyQ(std::move(r));
  }

  friend bool operator==(const BiPolyQ&, const BiPolyQ&) = default;

 private:
  void trim() {
    while (!a_.empty() && a_.back().is_zero()) a_.pop_back();
  }
  std::vector<PolyQ> a_;
};

}  // namespace holoscope
