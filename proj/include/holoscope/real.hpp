#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <string>

#include "holoscope/rational.hpp"

namespace holoscope {

/// Decimal digits used for extended-precision floats when the caller does not
/// choose. HOLOSCOPE_PRECISION overrides it (read once per call, never cached).
inline constexpr unsigned kDefaultDigits = 30;

inline unsigned precision_digits_from_env() {
  if (const char* env = std::getenv("HOLOSCOPE_PRECISION")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 10 && v <= 10000) return static_cast<unsigned>(v);
  }
  return kDefaultDigits;
}

inline mpfr_prec_t digits_to_bits(unsigned digits) {
  return static_cast<mpfr_prec_t>(digits * 3.3219280948873623 + 8);
}

/// Extended-precision real backed by MPFR. Every value carries its own
/// precision; binary operations round to the larger operand precision.
class Real {
 public:
  explicit Real(mpfr_prec_t bits = digits_to_bits(kDefaultDigits)) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  Real(double d, mpfr_prec_t bits) : Real(bits) { mpfr_set_d(v_, d, MPFR_RNDN); }
  Real(long i, mpfr_prec_t bits) : Real(bits) { mpfr_set_si(v_, i, MPFR_RNDN); }
  Real(const Integer& z, mpfr_prec_t bits) : Real(bits) { mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
  Real(const Rational& q, mpfr_prec_t bits) : Real(bits) { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Exact binary value as a rational (finite values only).
  Rational to_rational() const {
    Rational q;
    if (mpfr_zero_p(v_)) return q;
    mpz_t m;
    mpz_init(m);
    mpfr_exp_t e = mpfr_get_z_2exp(m, v_);
    Integer mant(m);
    mpz_clear(m);
    if (e >= 0) {
      Integer s = mant;
      mpz_mul_2exp(s.get_mpz_t(), s.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
      return Rational(s);
    }
    Integer den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    return make_rational(mant, den);
  }

  /// Scientific notation with `digits` significant digits.
  std::string to_string(unsigned digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(digits > 0 ? digits - 1 : 0) + "Re";
    mpfr_asprintf(&buf, fmt.c_str(), v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  friend Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }
  Real operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }
  Real& operator+=(const Real& o) { return *this = *this + o; }
  Real& operator-=(const Real& o) { return *this = *this - o; }
  Real& operator*=(const Real& o) { return *this = *this * o; }
  Real& operator/=(const Real& o) { return *this = *this / o; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  friend Real abs(const Real& a) { return unary(a, mpfr_abs); }
  friend Real sqrt(const Real& a) { return unary(a, mpfr_sqrt); }
  friend Real log(const Real& a) { return unary(a, mpfr_log); }
  friend Real exp(const Real& a) { return unary(a, mpfr_exp); }
  friend Real pow(const Real& a, const Real& b) { return binary(a, b, mpfr_pow); }
  friend Real max(const Real& a, const Real& b) { return a < b ? b : a; }
  friend Real min(const Real& a, const Real& b) { return b < a ? b : a; }

  /// sqrt rounded toward +infinity.
  friend Real sqrt_up(const Real& a) {
    Real r(a.precision());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDU);
    return r;
  }

 private:
  using BinaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  using UnaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

  static Real binary(const Real& a, const Real& b, BinaryFn fn) {
    Real r(std::max(a.precision(), b.precision()));
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  static Real unary(const Real& a, UnaryFn fn) {
    Real r(a.precision());
    fn(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

/// Complex number over Real; just enough arithmetic for root finding.
struct Complex {
  Real re;
  Real im;

  explicit Complex(mpfr_prec_t bits) : re(bits), im(bits) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  mpfr_prec_t precision() const { return re.precision(); }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  Real norm2() const { return re * re + im * im; }
  Real modulus() const { return sqrt(norm2()); }
};

}  // namespace holoscope
