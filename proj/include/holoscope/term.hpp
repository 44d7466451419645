#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holoscope/fourier_motzkin.hpp"
#include "holoscope/rational.hpp"

namespace holoscope {

/// Affine integer form coeff_n * n + sum_i coeff_k[i] * k_i + constant.
struct LinearForm {
  long coeff_n = 0;
  std::vector<long> coeff_k;
  long constant = 0;

  static LinearForm zero(std::size_t r) { return {0, std::vector<long>(r, 0), 0}; }

  std::size_t arity() const { return coeff_k.size(); }

  long operator()(long n, const std::vector<long>& k) const {
    long v = coeff_n * n + constant;
    for (std::size_t i = 0; i < coeff_k.size(); ++i) v += coeff_k[i] * k[i];
    return v;
  }

  bool is_zero() const {
    if (coeff_n != 0 || constant != 0) return false;
    for (long c : coeff_k)
      if (c != 0) return false;
    return true;
  }

  LinearForm& operator+=(const LinearForm& o) {
    coeff_n += o.coeff_n;
    constant += o.constant;
    for (std::size_t i = 0; i < coeff_k.size(); ++i) coeff_k[i] += o.coeff_k[i];
    return *this;
  }
  LinearForm& operator-=(const LinearForm& o) {
    coeff_n -= o.coeff_n;
    constant -= o.constant;
    for (std::size_t i = 0; i < coeff_k.size(); ++i) coeff_k[i] -= o.coeff_k[i];
    return *this;
  }
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend bool operator==(const LinearForm&, const LinearForm&) = default;

  /// e.g. "n - k + 1"; `vars` names the summation variables.
  std::string to_string(const std::vector<std::string>& vars) const {
    std::string out;
    auto put = [&](long c, const std::string& name) {
      if (c == 0) return;
      long mag = c < 0 ? -c : c;
      if (out.empty())
        out += c < 0 ? "-" : "";
      else
        out += c < 0 ? " - " : " + ";
      if (name.empty())
        out += std::to_string(mag);
      else
        out += (mag == 1 ? "" : std::to_string(mag) + "*") + name;
    };
    put(coeff_n, "n");
    for (std::size_t i = 0; i < coeff_k.size(); ++i)
      put(coeff_k[i], i < vars.size() ? vars[i] : "k" + std::to_string(i + 1));
    put(constant, "");
    return out.empty() ? "0" : out;
  }
};

struct FactorialFactor {
  LinearForm form;
  int sign = 1;  // +1: form! in the numerator, -1: in the denominator
  friend bool operator==(const FactorialFactor&, const FactorialFactor&) = default;
};

/// C0^n * prod_i C_i^{k_i} * prod_j (A_j(n, k)!)^{sign_j}
struct BalancedTerm {
  std::vector<std::string> variables;  // summation variables, length r
  Rational c0 = 1;
  std::vector<Rational> c;  // one per summation variable
  std::vector<FactorialFactor> factors;

  std::size_t arity() const { return variables.size(); }

  /// Throws PreconditionError when the structural invariants fail.
  void validate() const {
    const std::size_t r = arity();
    if (c.size() != r) throw PreconditionError("term: one constant per summation variable required");
    if (factors.empty()) throw PreconditionError("term: at least one factorial factor required");
    if (c0 == 0) throw PreconditionError("term: C0 must be nonzero");
    for (const auto& ci : c)
      if (ci == 0) throw PreconditionError("term: constants C_i must be nonzero");
    for (const auto& f : factors) {
      if (f.form.arity() != r) throw PreconditionError("term: form arity does not match summation variables");
      if (f.sign != 1 && f.sign != -1) throw PreconditionError("term: factor sign must be +1 or -1");
    }
  }
};

struct Binomial {
  LinearForm top;
  LinearForm bottom;
  int sign = 1;
};

/// C0^n * prod_i C_i^{k_i} * prod_j binom(B_j, D_j)^{sign_j}
struct BinomialForm {
  std::vector<std::string> variables;
  Rational c0 = 1;
  std::vector<Rational> c;
  std::vector<Binomial> binomials;
};

struct SupportSlice {
  long n = 0;
  std::vector<std::vector<long>> points;  // lexicographic order
};

class UnbalancedTermError : public Error {
 public:
  explicit UnbalancedTermError(LinearForm residual, const std::string& shown)
      : Error("term is not balanced: residual " + shown), residual_(std::move(residual)) {}
  const LinearForm& residual() const { return residual_; }

 private:
  LinearForm residual_;
};

class InfiniteSupportError : public Error {
 public:
  explicit InfiniteSupportError(std::vector<long> direction)
      : Error("summation support is infinite (recession cone is not pointed)"), direction_(std::move(direction)) {}
  const std::vector<long>& direction() const { return direction_; }

 private:
  std::vector<long> direction_;
};

/// Factorials 0!, 1!, ... grown on demand. One cache per evaluation session;
/// not shared between threads.
class FactorialCache {
 public:
  const Integer& operator()(long m) {
    if (m < 0) throw PreconditionError("factorial of a negative integer");
    if (table_.empty()) table_.emplace_back(1);
    while (static_cast<long>(table_.size()) <= m)
      table_.push_back(table_.back() * static_cast<unsigned long>(table_.size()));
    return table_[static_cast<std::size_t>(m)];
  }

 private:
  std::vector<Integer> table_;
};

struct BalanceResult {
  bool balanced;
  LinearForm residual;
};

/// residual = sum_j sign_j * A_j, constant part included.
inline BalanceResult check_balance(const BalancedTerm& t) {
  LinearForm residual = LinearForm::zero(t.arity());
  for (const auto& f : t.factors) {
    if (f.sign > 0)
      residual += f.form;
    else
      residual -= f.form;
  }
  return {residual.is_zero(), residual};
}

/// A nonzero integer direction d with every k-part nonnegative at d, if one
/// exists; its absence is exactly finiteness of every support slice.
inline std::optional<std::vector<long>> recession_direction(const BalancedTerm& t) {
  const std::size_t r = t.arity();
  if (r == 0) return std::nullopt;
  fm::System cone;
  for (const auto& f : t.factors) {
    fm::Inequality in{std::vector<Rational>(r), 0};
    for (std::size_t i = 0; i < r; ++i) in.coeffs[i] = f.form.coeff_k[i];
    cone.push_back(in);
  }
  // The cone is {0} iff no point of it has x_i >= 1 or x_i <= -1 for some i.
  for (std::size_t i = 0; i < r; ++i)
    for (int s : {1, -1}) {
      fm::System sys = cone;
      fm::Inequality unit{std::vector<Rational>(r), -1};
      unit.coeffs[i] = s;
      sys.push_back(unit);
      if (auto x = fm::find_point(sys, r)) {
        auto ints = primitive_part(*x);
        std::vector<long> d;
        for (const auto& v : ints) d.push_back(v.get_num().get_si());
        return d;
      }
    }
  return std::nullopt;
}

inline bool check_finiteness(const BalancedTerm& t) { return !recession_direction(t).has_value(); }

/// Every lattice point k with A_j(n, k) >= 0 for all j, in lexicographic order.
inline SupportSlice enumerate_support(const BalancedTerm& t, long n) {
  if (auto d = recession_direction(t)) throw InfiniteSupportError(*d);
  const std::size_t r = t.arity();
  SupportSlice slice{n, {}};
  auto satisfies = [&](const std::vector<long>& k) {
    for (const auto& f : t.factors)
      if (f.form(n, k) < 0) return false;
    return true;
  };
  if (r == 0) {
    if (satisfies({})) slice.points.push_back({});
    return slice;
  }
  fm::System sys;
  for (const auto& f : t.factors) {
    fm::Inequality in{std::vector<Rational>(r), Rational(f.form.coeff_n * n + f.form.constant)};
    for (std::size_t i = 0; i < r; ++i) in.coeffs[i] = f.form.coeff_k[i];
    sys.push_back(in);
  }
  std::vector<long> lo(r), hi(r);
  for (std::size_t i = 0; i < r; ++i) {
    auto p = fm::project(sys, r, i);
    if (!p.feasible) return slice;
    if (!p.lower || !p.upper) throw InfiniteSupportError(std::vector<long>(r, 0));
    lo[i] = ceil(*p.lower).get_si();
    hi[i] = floor(*p.upper).get_si();
    if (lo[i] > hi[i]) return slice;
  }
  std::vector<long> k = lo;
  for (;;) {
    if (satisfies(k)) slice.points.push_back(k);
    std::size_t i = r;
    while (i-- > 0) {
      if (k[i] < hi[i]) {
        ++k[i];
        break;
      }
      k[i] = lo[i];
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return slice;
}

inline Rational constant_part(const Rational& c0, const std::vector<Rational>& c, long n, const std::vector<long>& k) {
  Rational v = pow(c0, n);
  for (std::size_t i = 0; i < c.size(); ++i) v *= pow(c[i], k[i]);
  return v;
}

/// Exact value of the term at (n, k); k must lie in the support slice.
inline Rational eval_term(const BalancedTerm& t, long n, const std::vector<long>& k, FactorialCache& fac) {
  if (k.size() != t.arity()) throw PreconditionError("eval_term: wrong number of summation indices");
  Integer num = 1, den = 1;
  for (const auto& f : t.factors) {
    long a = f.form(n, k);
    if (a < 0) throw PreconditionError("eval_term: point outside the support (negative factorial argument)");
    (f.sign > 0 ? num : den) *= fac(a);
  }
  return constant_part(t.c0, t.c, n, k) * make_rational(num, den);
}

inline Rational eval_term(const BalancedTerm& t, long n, const std::vector<long>& k) {
  FactorialCache fac;
  return eval_term(t, n, k, fac);
}

/// Rewrites a balanced term as constants times a ratio of products of
/// binomials: with A = sum of the numerator forms (= sum of the denominator
/// forms), the factorial ratio equals multinomial(A; denominator forms) /
/// multinomial(A; numerator forms), and each multinomial telescopes into
/// binom(A - a_1 - ... - a_{i-1}, a_i). Factors binom(X, X) are dropped.
inline BinomialForm to_binomial_form(const BalancedTerm& t) {
  auto bal = check_balance(t);
  if (!bal.balanced) throw UnbalancedTermError(bal.residual, bal.residual.to_string(t.variables));
  const std::size_t r = t.arity();
  BinomialForm out{t.variables, t.c0, t.c, {}};
  LinearForm total = LinearForm::zero(r);
  for (const auto& f : t.factors)
    if (f.sign > 0) total += f.form;

  auto expand = [&](int side_sign, int binom_sign) {
    LinearForm top = total;
    for (const auto& f : t.factors) {
      if (f.sign != side_sign) continue;
      if (!(top == f.form)) out.binomials.push_back({top, f.form, binom_sign});
      top -= f.form;
    }
  };
  expand(-1, +1);
  expand(+1, -1);
  return out;
}

inline Rational eval_binomial_form(const BinomialForm& b, long n, const std::vector<long>& k) {
  Integer num = 1, den = 1;
  for (const auto& bin : b.binomials) {
    long top = bin.top(n, k), bottom = bin.bottom(n, k);
    if (top < 0 || bottom < 0) throw PreconditionError("binomial with negative argument outside the support");
    Integer v = bottom > top ? Integer(0) : binomial(static_cast<unsigned long>(top), static_cast<unsigned long>(bottom));
    (bin.sign > 0 ? num : den) *= v;
  }
  if (den == 0) throw PreconditionError("binomial form: zero denominator");
  return constant_part(b.c0, b.c, n, k) * make_rational(num, den);
}

inline std::string to_string(const BalancedTerm& t) {
  std::string out = "sum ";
  for (std::size_t i = 0; i < t.variables.size(); ++i) out += (i ? ", " : "") + t.variables[i];
  out += ":";
  bool first = true;
  auto sep = [&] {
    out += first ? " " : " * ";
    first = false;
  };
  if (t.c0 != 1) {
    sep();
    out += "(" + to_string(t.c0) + ")^n";
  }
  for (std::size_t i = 0; i < t.c.size(); ++i)
    if (t.c[i] != 1) {
      sep();
      out += "(" + to_string(t.c[i]) + ")^" + t.variables[i];
    }
  for (const auto& f : t.factors) {
    sep();
    out += "(" + f.form.to_string(t.variables) + ")!" + (f.sign < 0 ? "^-1" : "");
  }
  return out;
}

}  // namespace holoscope
