#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "holoscope/ode.hpp"
#include "holoscope/poly.hpp"
#include "holoscope/resultant.hpp"
#include "holoscope/roots.hpp"

namespace holoscope {

struct RationalFactor {
  PolyQ factor;  // primitive, positive leading coefficient
  unsigned multiplicity = 1;
  bool certified_irreducible = true;
};

namespace detail {

inline Integer round_nearest(const Rational& q) { return floor(q + Rational(1, 2)); }

/// Try to split a primitive quartic without rational roots into two rational
/// quadratics by pairing its numerically isolated roots.
inline std::optional<std::pair<PolyQ, PolyQ>> split_quartic(const PolyQ& q) {
  const auto roots = isolate_roots(q);
  if (roots.size() != 4) return std::nullopt;
  const int pairs[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  const Integer lc = abs(q.leading().get_num());
  for (const auto& pr : pairs) {
    const ComplexBox& a = roots[static_cast<std::size_t>(pr[0])].box;
    const ComplexBox& b = roots[static_cast<std::size_t>(pr[1])].box;
    const Rational sum = a.re + b.re;
    const Rational prod = a.re * b.re - a.im * b.im;
    for (const auto& a1 : divisors(lc)) {
      PolyQ cand{Rational(round_nearest(a1 * prod)), Rational(-round_nearest(a1 * sum)), Rational(a1)};
      if (cand.degree() < 2) continue;
      auto [quot, rem] = divmod(q, cand);
      if (rem.is_zero()) return std::make_pair(cand.primitive(), quot.primitive());
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Factor p over the rationals: squarefree decomposition, rational roots, then
/// quadratic pairs for quartic remainders. Remainders of degree >= 5 stay as
/// single blocks and are flagged as not certified irreducible. The constant
/// factor is dropped. Sorted by degree, then coefficients.
inline std::vector<RationalFactor> factor_rational(const PolyQ& p) {
  if (p.is_zero()) throw PreconditionError("factor_rational: zero polynomial");
  std::vector<RationalFactor> out;
  for (const auto& [part, mult] : squarefree_decomposition(p)) {
    PolyQ rest = part.primitive();
    for (const auto& r : rational_roots(rest)) {
      const PolyQ lin = PolyQ::linear_root(r).primitive();
      out.push_back({lin, mult, true});
      rest = (rest / lin).primitive();
    }
    if (rest.degree() < 1) continue;
    if (rest.degree() == 4) {
      if (auto split = detail::split_quartic(rest)) {
        out.push_back({split->first, mult, true});
        out.push_back({split->second, mult, true});
        continue;
      }
    }
    out.push_back({rest, mult, rest.degree() <= 4});
  }
  std::sort(out.begin(), out.end(), [](const RationalFactor& a, const RationalFactor& b) { return a.factor < b.factor; });
  return out;
}

/// Fuchs criterion at the roots of f: ord_f(p_i) >= ord_f(p_m) - (m - i).
inline bool is_regular_at(const LinearODE& o, const PolyQ& f) {
  const long m = o.order();
  const long mu = static_cast<long>(valuation(o.leading(), f));
  for (long i = 0; i < m; ++i) {
    const PolyQ& p = o.coeffs[static_cast<std::size_t>(i)];
    if (p.is_zero()) continue;
    if (static_cast<long>(valuation(p, f)) < mu - (m - i)) return false;
  }
  return true;
}

/// The indicial form I(lambda, alpha) at a formal root lambda of f: the lowest
/// coefficient in w = z - lambda of the operator applied to w^alpha, with
/// coefficients reduced modulo f.
inline BiPolyQ indicial_form(const LinearODE& o, const PolyQ& f) {
  const long m = o.order();
  const long mu = static_cast<long>(valuation(o.leading(), f));
  if (mu == 0) throw PreconditionError("indicial_form: f does not divide the leading coefficient");
  std::vector<PolyQ> by_alpha(static_cast<std::size_t>(m + 1));
  for (long i = 0; i <= m; ++i) {
    const long k = mu - m + i;
    if (k < 0) continue;
    // coefficient of w^k in p_i(lambda + w)
    PolyQ q = o.coeffs[static_cast<std::size_t>(i)];
    Integer fact = 1;
    for (long t = 0; t < k; ++t) {
      q = q.derivative();
      fact *= t + 1;
    }
    q = (Rational(1) / Rational(fact)) * q;
    const PolyQ ff = detail::falling_poly(i);
    for (long e = 0; e <= ff.degree(); ++e) by_alpha[static_cast<std::size_t>(e)] += ff.coeff(static_cast<std::size_t>(e)) * q;
  }
  return BiPolyQ(std::move(by_alpha)).reduce_mod(f);
}

/// R(alpha) over Q whose roots are the local exponents at every root of f.
inline PolyQ exponents_at(const LinearODE& o, const PolyQ& f) {
  if (!is_regular_at(o, f)) throw PreconditionError("exponents_at: irregular singular factor " + f.to_string());
  return resultant_eliminate(indicial_form(o, f), f);
}

struct RationalityVerdict {
  bool all_rational = false;
  std::vector<Rational> rationals;  // with multiplicity
};

inline RationalityVerdict rationality_verdict(const PolyQ& R) {
  if (R.is_zero()) throw PreconditionError("rationality_verdict: zero polynomial");
  RationalityVerdict v;
  v.rationals = rational_roots(R);
  v.all_rational = static_cast<long>(v.rationals.size()) == R.degree();
  return v;
}

struct FactorReport {
  PolyQ factor;
  unsigned multiplicity = 1;
  bool certified_irreducible = true;
  bool is_origin = false;
  std::vector<IsolatedRoot> roots;
  bool regular = false;
  PolyQ exponent_poly;                 // zero unless regular and analyzed
  std::vector<IsolatedRoot> exponents;  // roots of exponent_poly; log-power bound = multiplicity - 1
  std::vector<Rational> rational_exponents;
  bool all_rational = false;
  bool has_irrational_exponent = false;
};

struct SingularityReport {
  std::vector<FactorReport> factors;
  bool origin_singular = false;
};

/// Factors of p_m, their roots and regularity; exponents are left empty.
inline SingularityReport singular_points(const LinearODE& o, const Rational& max_radius = default_root_radius()) {
  SingularityReport rep;
  for (const auto& rf : factor_rational(o.leading())) {
    FactorReport fr;
    fr.factor = rf.factor;
    fr.multiplicity = rf.multiplicity;
    fr.certified_irreducible = rf.certified_irreducible;
    fr.is_origin = rf.factor == PolyQ::x();
    fr.roots = isolate_roots(rf.factor, max_radius);
    fr.regular = is_regular_at(o, rf.factor);
    rep.origin_singular = rep.origin_singular || fr.is_origin;
    rep.factors.push_back(std::move(fr));
  }
  return rep;
}

/// singular_points plus exponent polynomials and their rationality.
inline SingularityReport analyze_singularities(const LinearODE& o, const Rational& max_radius = default_root_radius()) {
  SingularityReport rep = singular_points(o, max_radius);
  for (auto& fr : rep.factors) {
    if (!fr.regular) continue;
    fr.exponent_poly = exponents_at(o, fr.factor);
    fr.exponents = isolate_roots(fr.exponent_poly, max_radius);
    auto rv = rationality_verdict(fr.exponent_poly);
    fr.rational_exponents = rv.rationals;
    fr.all_rational = rv.all_rational;
    fr.has_irrational_exponent = !rv.all_rational;
  }
  return rep;
}

enum class VerdictKind { ObstructionIrrationalExponent, ConsistentRationalExponents, Inconclusive };

inline std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::ObstructionIrrationalExponent: return "ObstructionIrrationalExponent";
    case VerdictKind::ConsistentRationalExponents: return "ConsistentRationalExponents";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct TraceEntry {
  std::string step;
  std::string detail;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::vector<TraceEntry> trace;
};

namespace detail {

inline std::string describe(const FactorReport& fr) {
  std::string d = fr.factor.to_string("z") + " (multiplicity " + std::to_string(fr.multiplicity) + "): ";
  if (!fr.regular) return d + "irregular";
  d += "regular, exponent polynomial " + fr.exponent_poly.to_string("alpha");
  if (fr.all_rational) return d + ", all exponents rational";
  if (fr.rational_exponents.empty()) return d + ", no rational exponent";
  return d + ", mixed rational and irrational exponents";
}

/// First index t such that a_t = 0 is forced by backward propagation when all
/// later terms vanish: past the last nonnegative integer root of the lowest
/// nonzero coefficient.
inline long backward_threshold(const DerivedRecurrence& dr, long& shift, long& blocking_root) {
  const auto& c = dr.recurrence.coeffs;
  long j0 = 0;
  while (c[static_cast<std::size_t>(j0)].is_zero()) ++j0;
  shift = j0;
  long start = dr.valid_from;
  blocking_root = -1;
  for (const auto& r : rational_roots(c[static_cast<std::size_t>(j0)])) {
    if (r.get_den() != 1) continue;
    const long v = r.get_num().get_si();
    if (v >= dr.valid_from && v + 1 > start) {
      start = v + 1;
      blocking_root = v;
    }
  }
  return start + j0;
}

}  // namespace detail

/// The obstruction is issued only when every singular factor away from the
/// origin is regular with exclusively irrational exponents, and the sequence
/// provably does not terminate. Conjugate roots share one exponent polynomial,
/// so if G were analytic at one of them it would be analytic at all; an entire
/// G would then be a polynomial, and the recurrence would force a_n = 0 for
/// all n past the threshold below.
inline Verdict obstruction_verdict(const LinearODE& o, const ExactSequence& s, const SingularityReport& report,
                                   std::optional<DerivedRecurrence> source = std::nullopt) {
  Verdict v;
  bool any_finite = false, finite_all_irrational = true, all_consistent = true;
  for (const auto& fr : report.factors) {
    v.trace.push_back({fr.is_origin ? "origin" : "factor", detail::describe(fr)});
    all_consistent = all_consistent && fr.regular && fr.all_rational;
    if (fr.is_origin) continue;
    any_finite = true;
    if (!fr.regular || !fr.rational_exponents.empty()) finite_all_irrational = false;
  }
  if (all_consistent) {
    v.kind = VerdictKind::ConsistentRationalExponents;
    v.trace.push_back({"conclusion", "every singular factor is regular with rational exponents"});
    return v;
  }
  if (!any_finite || !finite_all_irrational) {
    v.kind = VerdictKind::Inconclusive;
    v.trace.push_back({"conclusion", !any_finite ? "no singular factor away from the origin"
                                                 : "some factor away from the origin is irregular or has a rational exponent, "
                                                   "so G may be singular only there"});
    return v;
  }
  v.trace.push_back({"galois", "conjugate roots of each factor share its exponent polynomial; G is singular at all of them or at none"});
  v.trace.push_back({"entire", "if G were singular at none, it would be entire with polynomial growth data, hence a polynomial"});
  if (!source) source = ode_to_recurrence(o);
  long shift = 0, blocking = -1;
  const long threshold = detail::backward_threshold(*source, shift, blocking);
  std::string rule = "recurrence " + to_string(source->recurrence) + " (valid from n = " + std::to_string(source->valid_from) + ")";
  rule += blocking < 0 ? std::string(": lowest coefficient has no blocking integer root")
                       : ": lowest coefficient vanishes at n = " + std::to_string(blocking);
  v.trace.push_back({"backward", rule + "; vanishing of the tail forces a_n = 0 for n >= " + std::to_string(threshold)});
  std::optional<long> witness;
  for (long n = std::max(threshold, s.offset); n <= s.last_index(); ++n)
    if (s.at(n) != 0) {
      witness = n;
      break;
    }
  if (!witness) {
    v.kind = VerdictKind::Inconclusive;
    v.trace.push_back({"conclusion", "no nonzero a_n with n >= " + std::to_string(threshold) + " in the available prefix"});
    return v;
  }
  v.kind = VerdictKind::ObstructionIrrationalExponent;
  v.trace.push_back({"witness", "a_" + std::to_string(*witness) + " = " + to_string(s.at(*witness)) + " is nonzero"});
  v.trace.push_back({"conclusion", "G is singular at a point whose local exponents are all irrational"});
  return v;
}

}  // namespace holoscope
