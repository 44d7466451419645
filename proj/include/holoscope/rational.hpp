#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace holoscope {

using Integer = mpz_class;
/// Always canonical: gcd(|num|, den) = 1, den >= 1, zero is 0/1.
using Rational = mpq_class;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw PreconditionError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den = 1) {
  return make_rational(Integer(num), Integer(den));
}

/// "p/q", or a bare integer when q = 1.
inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Parses "p", "-p", "p/q" (optional leading '+'). Throws Error on malformed input.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
  s = s.substr(b);
  if (!s.empty() && s[0] == '+') s = s.substr(1);
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-')
    throw Error("malformed rational literal '" + std::string(text) + "'");
  Integer d(den);
  if (d == 0) throw Error("zero denominator in '" + std::string(text) + "'");
  return make_rational(Integer(num), d);
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Integer pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational pow(const Rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw PreconditionError("zero raised to a negative power");
    Rational inv = 1 / base;
    return pow(inv, -e);
  }
  Rational r(pow(base.get_num(), static_cast<unsigned long>(e)),
             pow(base.get_den(), static_cast<unsigned long>(e)));
  return r;  // already canonical: powers of coprime integers stay coprime
}

inline int sign(const Rational& q) { return sgn(q); }

inline Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

/// Least common multiple of denominators and gcd of numerators of a vector.
inline Integer common_denominator(const std::vector<Rational>& v) {
  Integer l = 1;
  for (const auto& q : v) l = lcm(l, q.get_den());
  return l;
}

/// Scales v to integer entries with content 1; zero vector stays zero.
/// Sign is left as is.
inline std::vector<Rational> primitive_part(const std::vector<Rational>& v) {
  Integer den = common_denominator(v);
  Integer g = 0;
  std::vector<Integer> ints;
  ints.reserve(v.size());
  for (const auto& q : v) {
    Integer z = q.get_num() * (den / q.get_den());
    g = gcd(g, z);
    ints.push_back(z);
  }
  std::vector<Rational> out;
  out.reserve(v.size());
  for (auto& z : ints) out.emplace_back(g == 0 ? z : Integer(z / g));
  return out;
}

}  // namespace holoscope
