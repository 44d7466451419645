#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "holoscope/real.hpp"
#include "holoscope/sequence.hpp"
#include "holoscope/singularities.hpp"

namespace holoscope {

inline mpfr_prec_t working_bits(unsigned digits = precision_digits_from_env()) { return digits_to_bits(digits) + 64; }

/// Floating image of a sequence, a_offset, a_{offset+1}, ...
struct RealSequence {
  long offset = 0;
  std::vector<Real> values;

  long last_index() const { return offset + static_cast<long>(values.size()) - 1; }
};

inline RealSequence to_real(const ExactSequence& s, mpfr_prec_t bits = working_bits()) {
  RealSequence r{s.offset, {}};
  r.values.reserve(s.size());
  for (const auto& v : s.values) r.values.emplace_back(v, bits);
  return r;
}

class FitError : public Error {
 public:
  enum class Kind { TooShort, ZeroTail, NoDominantRatio };
  FitError(Kind k, const std::string& msg) : Error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Estimate {
  Real value;
  Real gauge;                     // |E_depth - E_{depth-1}|
  std::vector<Real> extrapolants;  // E_0 .. E_depth
};

/// Richardson extrapolation of order m from consecutive terms s_N .. s_{N+m}
/// of a sequence expanding in powers of 1/n; `first` is the index of s[0].
/// sum_k s_{N+k} (N+k)^m (-1)^{k+m} / (k! (m-k)!)
inline Real richardson(const std::vector<Real>& s, long first, unsigned m) {
  const long last = first + static_cast<long>(s.size()) - 1;
  const long N = last - static_cast<long>(m);
  if (N < first) throw FitError(FitError::Kind::TooShort, "richardson: not enough terms");
  const mpfr_prec_t bits = s.back().precision();
  Real acc(0L, bits);
  Integer kf = 1;
  for (unsigned k = 0; k <= m; ++k) {
    if (k > 0) kf *= k;
    Integer mk = 1;
    for (unsigned t = 2; t <= m - k; ++t) mk *= t;
    Real w = pow(Real(N + static_cast<long>(k), bits), Real(static_cast<long>(m), bits)) / Real(Integer(kf * mk), bits);
    if ((k + m) % 2 == 1) w = -w;
    acc += w * s[static_cast<std::size_t>(N - first) + k];
  }
  return acc;
}

inline Estimate extrapolate(const std::vector<Real>& s, long first, unsigned depth) {
  Estimate e{Real(s.back().precision()), Real(s.back().precision()), {}};
  for (unsigned j = 0; j <= depth; ++j) e.extrapolants.push_back(richardson(s, first, j));
  e.value = e.extrapolants.back();
  e.gauge = depth == 0 ? Real(0L, e.value.precision()) : abs(e.extrapolants[depth] - e.extrapolants[depth - 1]);
  return e;
}

inline std::size_t fit_tail_required(unsigned depth) { return (std::size_t{1} << depth) * 8; }

namespace detail {

/// Ratios a_{n+1}/a_n over the required tail, with their first index n.
inline std::pair<std::vector<Real>, long> tail_ratios(const RealSequence& s, unsigned depth) {
  const std::size_t need = fit_tail_required(depth);
  if (s.values.size() < need)
    throw FitError(FitError::Kind::TooShort, "fit needs " + std::to_string(need) + " tail values, have " + std::to_string(s.values.size()));
  const std::size_t start = s.values.size() - need;
  const mpfr_prec_t bits = s.values.back().precision();
  const Real zero(0L, bits);
  for (std::size_t i = start; i < s.values.size(); ++i)
    if (s.values[i] == zero) throw FitError(FitError::Kind::ZeroTail, "zero value at n = " + std::to_string(s.offset + static_cast<long>(i)) + " in the fitted tail");
  std::vector<Real> r;
  int sign = 0;
  for (std::size_t i = start; i + 1 < s.values.size(); ++i) {
    Real q = s.values[i + 1] / s.values[i];
    const int sg = q < zero ? -1 : 1;
    if (sign != 0 && sg != sign) throw FitError(FitError::Kind::NoDominantRatio, "no dominant ratio: the ratio a_{n+1}/a_n changes sign in the tail");
    sign = sg;
    r.push_back(abs(q));
  }
  return {r, s.offset + static_cast<long>(start)};
}

}  // namespace detail

/// Growth rate lim |a_{n+1}/a_n|.
inline Estimate fit_growth(const RealSequence& s, unsigned depth = 4) {
  auto [r, first] = detail::tail_ratios(s, depth);
  return extrapolate(r, first, depth);
}

/// Power of n: limit of n (|a_{n+1}/a_n| / growth - 1). An error in growth is
/// amplified by n, so the growth gauge enters this gauge scaled by N / growth.
inline Estimate fit_exponent(const RealSequence& s, const Real& growth, unsigned depth = 4,
                             std::optional<Real> growth_gauge = std::nullopt) {
  auto [r, first] = detail::tail_ratios(s, depth);
  const mpfr_prec_t bits = r.back().precision();
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = Real(first + static_cast<long>(i), bits) * (r[i] / growth - Real(1L, bits));
  Estimate e = extrapolate(r, first, depth);
  if (growth_gauge) e.gauge += Real(s.last_index(), bits) * *growth_gauge / growth;
  return e;
}

struct GevreyClass {
  Real raw;
  Real gauge;  // |s(half tail) - s(quarter tail)|
  std::optional<Rational> snapped;
};

namespace detail {

/// Coefficient of n log n in the least-squares fit
/// log|a_n| ~ s n log n + b n + c log n + d.
inline Real gevrey_slope(const std::vector<std::pair<long, Real>>& pts, mpfr_prec_t bits) {
  constexpr int P = 4;
  std::vector<std::vector<Real>> A(P, std::vector<Real>(P + 1, Real(0L, bits)));
  for (const auto& [n, y] : pts) {
    Real nn(n, bits), ln = log(nn);
    Real basis[P] = {nn * ln, nn, ln, Real(1L, bits)};
    for (int i = 0; i < P; ++i) {
      for (int j = 0; j < P; ++j) A[i][j] += basis[i] * basis[j];
      A[i][P] += basis[i] * y;
    }
  }
  for (int c = 0; c < P; ++c) {
    int piv = c;
    for (int r = c + 1; r < P; ++r)
      if (abs(A[r][c]) > abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    for (int r = 0; r < P; ++r) {
      if (r == c) continue;
      Real f = A[r][c] / A[c][c];
      for (int k = c; k <= P; ++k) A[r][k] -= f * A[c][k];
    }
  }
  return A[0][P] / A[0][0];
}

}  // namespace detail

inline constexpr std::size_t kGevreyMinValues = 32;

/// Gevrey parameter s from log|a_n| against n log n over the tail. Snapped to
/// the nearest fraction with denominator <= 4 when it lies within ten gauges.
inline GevreyClass classify_gevrey(const RealSequence& s) {
  const mpfr_prec_t bits = s.values.empty() ? working_bits() : s.values.back().precision();
  const Real zero(0L, bits);
  std::vector<std::pair<long, Real>> pts;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const long n = s.offset + static_cast<long>(i);
    if (n >= 1 && !(s.values[i] == zero)) pts.emplace_back(n, log(abs(s.values[i])));
  }
  if (pts.size() < kGevreyMinValues)
    throw FitError(FitError::Kind::TooShort, "classify_gevrey needs " + std::to_string(kGevreyMinValues) + " nonzero values, have " + std::to_string(pts.size()));
  std::vector<std::pair<long, Real>> half(pts.end() - static_cast<long>(pts.size() / 2), pts.end());
  std::vector<std::pair<long, Real>> quarter(pts.end() - static_cast<long>(pts.size() / 4), pts.end());
  GevreyClass g{detail::gevrey_slope(half, bits), Real(bits), std::nullopt};
  g.gauge = abs(g.raw - detail::gevrey_slope(quarter, bits));
  const Rational raw = g.raw.to_rational();
  std::optional<Rational> best;
  for (long q = 1; q <= 4; ++q) {
    Rational cand = Rational(floor(raw * q + Rational(1, 2))) / Rational(q);
    if (!best || abs(cand - raw) < abs(*best - raw)) best = cand;
  }
  const Real tol = Real(10L, bits) * g.gauge + Real(Rational(1, 1000000000), bits);
  if (abs(Real(*best, bits) - g.raw) <= tol) g.snapped = best;
  return g;
}

struct AsymptoticFit {
  GevreyClass s_class;
  std::optional<Estimate> growth;  // only for s = 0
  std::optional<Estimate> theta;
  std::string note;
};

/// classify_gevrey, then growth and exponent when the sequence is Gevrey-0.
inline AsymptoticFit fit_sequence(const RealSequence& s, unsigned depth = 4) {
  AsymptoticFit f{classify_gevrey(s), std::nullopt, std::nullopt, {}};
  if (!f.s_class.snapped || *f.s_class.snapped != 0) {
    f.note = "growth and exponent fits skipped: sequence is not of geometric growth";
    return f;
  }
  f.growth = fit_growth(s, depth);
  f.theta = fit_exponent(s, f.growth->value, depth, f.growth->gauge);
  return f;
}

struct CrossValidation {
  bool applicable = false;
  std::string note;
  std::optional<ComplexBox> root;    // dominant singularity
  PolyQ factor;                      // its irreducible factor
  std::optional<Real> predicted_growth;
  std::optional<Real> growth_distance;
  bool growth_consistent = false;
  std::optional<ComplexBox> exponent;  // matched alpha
  std::optional<Real> predicted_theta;
  std::optional<Real> theta_distance;
  bool theta_consistent = false;
  bool consistent = false;
};

struct CrossTolerance {
  double growth = 1e-3;
  double theta = 5e-2;
};

/// Growth against 1/|lambda| for the smallest singularity away from the
/// origin; theta against -alpha-1 over that factor's real exponents that are
/// not nonnegative integers (those give analytic terms). Consistent when each
/// distance is within max(10 * gauge, tolerance).
inline CrossValidation cross_validate(const AsymptoticFit& fit, const SingularityReport& report, CrossTolerance tol = {}) {
  CrossValidation cv;
  if (!fit.growth || !fit.theta) {
    cv.note = "no growth fit available";
    return cv;
  }
  const mpfr_prec_t bits = fit.growth->value.precision();
  const FactorReport* best = nullptr;
  std::optional<Real> best_mod;
  for (const auto& fr : report.factors) {
    if (fr.is_origin) continue;
    for (const auto& r : fr.roots) {
      Real m = r.box.center(bits).modulus();
      if (!best_mod || m < *best_mod) {
        best_mod = m;
        best = &fr;
        cv.root = r.box;
      }
    }
  }
  if (!best) {
    cv.note = "no singularity away from the origin";
    return cv;
  }
  cv.applicable = true;
  cv.factor = best->factor;
  cv.predicted_growth = Real(1L, bits) / *best_mod;
  cv.growth_distance = abs(fit.growth->value - *cv.predicted_growth);
  const Real g10 = Real(10L, bits);
  cv.growth_consistent = *cv.growth_distance <= max(g10 * fit.growth->gauge, Real(tol.growth, bits));
  if (!best->regular) {
    cv.note = "dominant singularity is irregular; no exponent to match";
  } else {
    for (const auto& e : best->exponents) {
      if (abs(e.box.im) > e.box.radius) continue;
      const Rational& a = e.box.re;
      bool analytic = false;
      for (const auto& q : best->rational_exponents)
        analytic = analytic || (q >= 0 && q.get_den() == 1 && e.box.contains(q, 0));
      if (analytic) continue;
      Real th = -Real(a, bits) - Real(1L, bits);
      Real dist = abs(fit.theta->value - th);
      if (!cv.theta_distance || dist < *cv.theta_distance) {
        cv.theta_distance = dist;
        cv.predicted_theta = th;
        cv.exponent = e.box;
      }
    }
    if (cv.theta_distance)
      cv.theta_consistent = *cv.theta_distance <= max(g10 * fit.theta->gauge, Real(tol.theta, bits));
    else
      cv.note = "no real non-analytic exponent at the dominant singularity";
  }
  cv.consistent = cv.growth_consistent && cv.theta_consistent;
  return cv;
}

}  // namespace holoscope
