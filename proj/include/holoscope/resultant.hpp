#pragma once

#include <vector>

#include "holoscope/linalg.hpp"
#include "holoscope/poly.hpp"

namespace holoscope {

/// Res(a, b) via the Sylvester determinant, treating b as having formal
/// degree `b_degree` (leading zeros allowed). a must be nonzero.
inline Rational resultant(const PolyQ& a, const PolyQ& b, long b_degree) {
  const long m = a.degree();
  const long n = b_degree;
  if (m < 0) throw PreconditionError("resultant with a zero polynomial");
  if (b.degree() > n) throw PreconditionError("formal degree below actual degree");
  if (n < 0) return 0;
  const std::size_t size = static_cast<std::size_t>(m + n);
  if (size == 0) return 1;
  MatrixQ s(size, size);
  for (long r = 0; r < n; ++r)
    for (long i = 0; i <= m; ++i) s(r, r + i) = a.coeff(static_cast<std::size_t>(m - i));
  for (long r = 0; r < m; ++r)
    for (long i = 0; i <= n; ++i) s(n + r, r + i) = b.coeff(static_cast<std::size_t>(n - i));
  return determinant(s);
}

inline Rational resultant(const PolyQ& a, const PolyQ& b) { return resultant(a, b, b.degree()); }

/// Newton interpolation through (xs[i], ys[i]); xs pairwise distinct.
inline PolyQ interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  const std::size_t n = xs.size();
  std::vector<Rational> dd = ys;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
  PolyQ acc;
  for (std::size_t k = n; k-- > 0;) acc = acc * PolyQ::linear_root(xs[k]) + PolyQ::constant(dd[k]);
  return acc;
}

/// Eliminates lambda between m(lambda) and form(lambda, alpha): returns
/// Res_lambda(m, form) as a polynomial in alpha, primitive with positive
/// leading coefficient. Exact, by evaluation at alpha = 0, 1, ... and
/// interpolation.
inline PolyQ resultant_eliminate(const BiPolyQ& form, const PolyQ& m) {
  if (m.is_zero()) throw PreconditionError("resultant_eliminate: zero eliminant");
  if (m.degree() < 1) throw PreconditionError("resultant_eliminate: constant polynomial has no lambda to eliminate");
  if (form.is_zero()) throw PreconditionError("resultant_eliminate: zero form");
  BiPolyQ reduced = form.reduce_mod(m);
  if (reduced.is_zero()) return {};
  const long formal = reduced.degree_lambda();
  const long bound = m.degree() * reduced.degree_alpha();
  std::vector<Rational> xs, ys;
  for (long i = 0; i <= bound; ++i) {
    Rational alpha(i);
    xs.push_back(alpha);
    ys.push_back(resultant(m, reduced.at_alpha(alpha), formal));
  }
  return interpolate(xs, ys).primitive();
}

}  // namespace holoscope
