#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "holoscope/poly.hpp"
#include "holoscope/real.hpp"

namespace holoscope {

/// Closed disc in the complex plane with an exact rational center and radius.
struct ComplexBox {
  Rational re;
  Rational im;
  Rational radius;

  Complex center(mpfr_prec_t bits) const { return {Real(re, bits), Real(im, bits)}; }
  /// Exact: does the disc contain the point (x, y)?
  bool contains(const Rational& x, const Rational& y) const {
    Rational dx = x - re, dy = y - im;
    return dx * dx + dy * dy <= radius * radius;
  }
  bool disjoint_from(const ComplexBox& o) const {
    Rational dx = re - o.re, dy = im - o.im;
    Rational s = radius + o.radius;
    return s * s < dx * dx + dy * dy;
  }
  bool intersects(const ComplexBox& o) const { return !disjoint_from(o); }
};

struct IsolatedRoot {
  ComplexBox box;
  unsigned multiplicity = 1;
};

inline Rational default_root_radius() { return Rational(1, 1) / Rational(pow(Integer(10), 30)); }

namespace detail {

struct GaussQ {
  Rational re, im;
};

inline GaussQ eval_exact(const PolyQ& p, const Rational& x, const Rational& y) {
  GaussQ acc{0, 0};
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
    Rational re = acc.re * x - acc.im * y + *it;
    Rational im = acc.re * y + acc.im * x;
    acc = {re, im};
  }
  return acc;
}

/// Smallest convenient rational >= sqrt(q), q >= 0.
inline Rational sqrt_upper(const Rational& q, mpfr_prec_t bits) {
  if (q == 0) return 0;
  Real r = sqrt_up(Real(q, bits + 16));
  Real bump = Real(1L, bits + 16) + pow(Real(2L, bits + 16), Real(-static_cast<long>(bits), bits + 16));
  Rational up = (r * bump).to_rational();
  while (up * up < q) up *= Rational(2);
  return up;
}

/// Aberth-Ehrlich iteration for the roots of a squarefree polynomial.
inline std::vector<Complex> aberth(const PolyQ& q, mpfr_prec_t bits) {
  const long d = q.degree();
  std::vector<Complex> z;
  if (d < 1) return z;
  const PolyQ dq = q.derivative();
  // Fujiwara-style radius for the starting circle.
  double rad = 0;
  const double lead = std::fabs(q.leading().get_d());
  for (long i = 0; i < d; ++i) {
    double c = std::fabs(q.coeff(static_cast<std::size_t>(i)).get_d()) / lead;
    if (c > 0) rad = std::max(rad, std::pow(c, 1.0 / static_cast<double>(d - i)));
  }
  rad = std::max(rad, 1e-3);
  Real pi(bits);
  mpfr_const_pi(pi.raw(), MPFR_RNDN);
  for (long k = 0; k < d; ++k) {
    Real angle = (Real(2L, bits) * pi * Real(k, bits)) / Real(d, bits) + Real(0.4, bits);
    Real c(bits), s(bits);
    mpfr_sin_cos(s.raw(), c.raw(), angle.raw(), MPFR_RNDN);
    Real r(rad, bits);
    z.emplace_back(r * c, r * s);
  }
  const Real tol = pow(Real(2L, bits), Real(-static_cast<long>(bits) + 12, bits));
  const int max_iter = 200 + 4 * static_cast<int>(bits);
  for (int iter = 0; iter < max_iter; ++iter) {
    Real worst(bits);
    for (long k = 0; k < d; ++k) {
      Complex pv = q(z[k]);
      if (pv.re.is_zero() && pv.im.is_zero()) continue;
      Complex ratio = pv / dq(z[k]);
      Complex sum(bits);
      for (long j = 0; j < d; ++j) {
        if (j == k) continue;
        Complex diff = z[k] - z[j];
        Complex one{Real(1L, bits), Real(bits)};
        sum = sum + one / diff;
      }
      Complex one{Real(1L, bits), Real(bits)};
      Complex w = ratio / (one - ratio * sum);
      z[k] = z[k] - w;
      Real scale = max(Real(1L, bits), z[k].modulus());
      Real rel = w.modulus() / scale;
      if (rel > worst) worst = rel;
    }
    if (worst < tol) break;
  }
  return z;
}

}  // namespace detail

/// Certified isolation of the distinct complex roots of p. Each returned disc
/// contains exactly one root, has radius <= max_radius, and the discs are
/// pairwise disjoint. Ordered by real part, then imaginary part of the center.
///
/// Certification: for squarefree q of degree d, the disc of radius
/// d*|q(c)/q'(c)| around any c contains a root; d pairwise disjoint such discs
/// therefore hold one root each. All of that is evaluated in exact arithmetic.
inline std::vector<IsolatedRoot> isolate_roots(const PolyQ& p, const Rational& max_radius = default_root_radius()) {
  if (p.is_zero()) throw PreconditionError("isolate_roots: zero polynomial");
  std::vector<IsolatedRoot> out;
  if (p.degree() < 1) return out;
  const auto parts = squarefree_decomposition(p);

  double target_bits = 64;
  if (max_radius > 0) target_bits = std::max(64.0, -std::log2(max_radius.get_d()) + 32);
  mpfr_prec_t bits = static_cast<mpfr_prec_t>(target_bits) + 64;

  for (int attempt = 0; attempt < 12; ++attempt, bits *= 2) {
    out.clear();
    bool ok = true;
    for (const auto& [q, mult] : parts) {
      if (q.degree() == 1) {
        out.push_back({ComplexBox{-q.coeff(0) / q.coeff(1), 0, 0}, mult});
        continue;
      }
      const PolyQ dq = q.derivative();
      const Rational d(q.degree());
      for (const auto& z : detail::aberth(q, bits)) {
        Rational x = z.re.to_rational(), y = z.im.to_rational();
        auto v = detail::eval_exact(q, x, y);
        auto dv = detail::eval_exact(dq, x, y);
        Rational dn = dv.re * dv.re + dv.im * dv.im;
        if (dn == 0) {
          ok = false;
          break;
        }
        Rational r2 = d * d * (v.re * v.re + v.im * v.im) / dn;
        Rational r = detail::sqrt_upper(r2, bits);
        if (r > max_radius) {
          ok = false;
          break;
        }
        out.push_back({ComplexBox{x, y, r}, mult});
      }
      if (!ok) break;
    }
    if (ok) {
      for (std::size_t i = 0; i < out.size() && ok; ++i)
        for (std::size_t j = i + 1; j < out.size() && ok; ++j)
          if (!out[i].box.disjoint_from(out[j].box)) ok = false;
    }
    if (ok) {
      // Every distinct root sits in exactly one disc. If the mirror image of
      // disc i misses all the others, the conjugate root is in disc i itself,
      // so the root is real and the center can move onto the axis.
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].box.im == 0) continue;
        ComplexBox mirror = out[i].box;
        mirror.im = -mirror.im;
        bool real = true;
        for (std::size_t j = 0; j < out.size() && real; ++j)
          if (j != i && !mirror.disjoint_from(out[j].box)) real = false;
        if (real) out[i].box.im = 0;
      }
      std::sort(out.begin(), out.end(), [](const IsolatedRoot& a, const IsolatedRoot& b) {
        if (a.box.re != b.box.re) return a.box.re < b.box.re;
        return a.box.im < b.box.im;
      });
      return out;
    }
  }
  throw Error("isolate_roots: certification failed at maximum precision");
}

namespace detail {

/// Positive divisors by trial division; empty when |n| has a prime factor
/// above `limit` (caller falls back).
inline std::vector<Integer> divisors(Integer n, unsigned long limit = 1UL << 20) {
  n = abs(n);
  std::vector<std::pair<Integer, unsigned>> fac;
  for (unsigned long f = 2; f <= limit && Integer(f) * f <= n; ++f) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), f)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), f)) {
        n /= f;
        ++e;
      }
      fac.emplace_back(Integer(f), e);
    }
  }
  if (n > 1) {
    if (Integer(limit) * limit < n) return {};
    fac.emplace_back(n, 1);
  }
  std::vector<Integer> divs{1};
  for (const auto& [pr, e] : fac) {
    std::size_t base = divs.size();
    Integer pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= pr;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

inline unsigned strip_root(PolyQ& p, const Rational& r) {
  unsigned m = 0;
  const PolyQ lin = PolyQ::linear_root(r);
  for (;;) {
    if (p.degree() < 1 || p(r) != 0) return m;
    p = p / lin;
    ++m;
  }
}

}  // namespace detail

/// All rational roots of p with multiplicity (each root repeated), ascending.
/// Candidates p/q come from the rational root theorem (p | trailing, q | leading);
/// when a coefficient is too large to factor by trial division, candidates are
/// read off certified real root discs instead (leading * root is an integer).
inline std::vector<Rational> rational_roots(const PolyQ& poly) {
  if (poly.is_zero()) throw PreconditionError("rational_roots: zero polynomial");
  PolyQ p = poly.primitive();
  std::vector<Rational> roots;
  unsigned zero_mult = detail::strip_root(p, 0);
  roots.insert(roots.end(), zero_mult, Rational(0));
  if (p.degree() >= 1) {
    const Integer lead = p.leading().get_num();
    const Integer trail = p.coeff(0).get_num();
    auto dn = detail::divisors(trail);
    auto dd = detail::divisors(lead);
    std::vector<Rational> cands;
    if (!dn.empty() && !dd.empty() && dn.size() * dd.size() <= 2'000'000) {
      for (const auto& a : dn)
        for (const auto& b : dd) {
          cands.push_back(make_rational(a, b));
          cands.push_back(-make_rational(a, b));
        }
    } else {
      Rational half(1, 2);
      Rational radius = Rational(1) / (Rational(4) * Rational(abs(lead)) + 4);
      for (const auto& r : isolate_roots(p, radius)) {
        if (abs(r.box.im) > half) continue;
        Rational scaled = r.box.re * Rational(lead);
        cands.push_back(make_rational(floor(scaled + half), lead));
      }
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (const auto& c : cands) {
      unsigned m = detail::strip_root(p, c);
      roots.insert(roots.end(), m, c);
      if (p.degree() < 1) break;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace holoscope
