#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "holoscope/asymptotics.hpp"
#include "holoscope/real.hpp"
#include "holoscope/sequence.hpp"

namespace holoscope {

struct CurvePoint {
  long n;
  Real value;
};

/// An n-th-root curve with a super-exponential heuristic. The alarm is not a
/// proof of anything: it fires when log(curve) rose by at least
/// kAlarmSlope * log 2 over the last doubling of n, i.e. the curve grows at
/// least like n^0.3 there. Geometric sequences with polynomial corrections
/// drift like log(n)/n instead.
struct Certificate {
  std::vector<CurvePoint> curve;
  Real bound;        // max over the tail half
  Real tail_slope;   // (log c_N - log c_{N/2}) / log 2
  bool alarm = false;
};

inline constexpr double kAlarmSlope = 0.3;

namespace detail {

/// logs[i] = log of the n-th power of the curve at n = first + i, or nullopt
/// where the curve is zero.
inline Certificate nth_root_certificate(long first, const std::vector<std::optional<Real>>& logs, mpfr_prec_t bits) {
  Certificate c{{}, Real(0L, bits), Real(0L, bits), false};
  std::vector<std::optional<Real>> ell;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const long n = first + static_cast<long>(i);
    if (n < 1) {
      ell.emplace_back();
      continue;
    }
    if (logs[i]) {
      Real l = *logs[i] / Real(n, bits);
      c.curve.push_back({n, exp(l)});
      ell.push_back(l);
    } else {
      c.curve.push_back({n, Real(0L, bits)});
      ell.emplace_back();
    }
  }
  if (c.curve.empty()) return c;
  const long N = c.curve.back().n;
  for (const auto& p : c.curve)
    if (2 * p.n >= N) c.bound = max(c.bound, p.value);
  // last nonzero point and the nonzero point nearest to N/2 from above
  std::optional<std::size_t> hi, mid;
  for (std::size_t i = ell.size(); i-- > 0;)
    if (ell[i]) {
      hi = i;
      break;
    }
  for (std::size_t i = 0; i < ell.size(); ++i)
    if (ell[i] && 2 * (first + static_cast<long>(i)) >= N) {
      mid = i;
      break;
    }
  if (!hi || !mid || *hi == *mid || N < 8) return c;
  const Real span = log(Real(first + static_cast<long>(*hi), bits) / Real(first + static_cast<long>(*mid), bits));
  c.tail_slope = (*ell[*hi] - *ell[*mid]) / span;
  c.alarm = c.tail_slope >= Real(kAlarmSlope, bits);
  return c;
}

}  // namespace detail

/// Curve of |a_n|^{1/n}. Constants are rational, so every conjugate of a_n is
/// a_n itself and the height is its absolute value.
inline Certificate height_certificate(const ExactSequence& s, mpfr_prec_t bits = working_bits()) {
  std::vector<std::optional<Real>> logs;
  for (const auto& v : s.values)
    logs.push_back(v == 0 ? std::nullopt : std::optional<Real>(log(abs(Real(v, bits)))));
  return detail::nth_root_certificate(s.offset, logs, bits);
}

struct DenominatorCertificate {
  Certificate cert;
  std::vector<Integer> running_lcm;  // lcm of den(a_offset) .. den(a_n)
};

/// Curve of lcm(den a_0, ..., den a_n)^{1/n}; the lcm is exact.
inline DenominatorCertificate denominator_certificate(const ExactSequence& s, mpfr_prec_t bits = working_bits()) {
  DenominatorCertificate d;
  Integer L = 1;
  std::vector<std::optional<Real>> logs;
  for (const auto& v : s.values) {
    L = lcm(L, Integer(v.get_den()));
    d.running_lcm.push_back(L);
    logs.push_back(log(Real(L, bits)));
  }
  d.cert = detail::nth_root_certificate(s.offset, logs, bits);
  return d;
}

enum class GVerdict { ConsistentWithGFunction, DenominatorGrowthAlarm, HeightGrowthAlarm };

inline std::string to_string(GVerdict v) {
  switch (v) {
    case GVerdict::ConsistentWithGFunction: return "consistent-with-G-function";
    case GVerdict::DenominatorGrowthAlarm: return "denominator-growth-alarm";
    case GVerdict::HeightGrowthAlarm: return "height-growth-alarm";
  }
  return "?";
}

struct GCertificate {
  Certificate height;
  DenominatorCertificate denominators;
  bool holonomic = false;
  GVerdict verdict = GVerdict::ConsistentWithGFunction;
};

inline GCertificate g_certificate(const ExactSequence& s, bool holonomic, mpfr_prec_t bits = working_bits()) {
  GCertificate g{height_certificate(s, bits), denominator_certificate(s, bits), holonomic, GVerdict::ConsistentWithGFunction};
  if (g.denominators.cert.alarm)
    g.verdict = GVerdict::DenominatorGrowthAlarm;
  else if (g.height.alarm)
    g.verdict = GVerdict::HeightGrowthAlarm;
  return g;
}

struct LcmRow {
  long n;
  Integer L;  // lcm of binom(n, k), 0 <= k <= n
  Real normalized_log;  // log(L) / n
};

inline std::vector<LcmRow> lcm_binomial_table(long n_max, mpfr_prec_t bits = working_bits()) {
  if (n_max < 1) throw PreconditionError("lcm_binomial_table: n_max >= 1 required");
  std::vector<LcmRow> rows;
  std::vector<Integer> row{1};
  for (long n = 1; n <= n_max; ++n) {
    std::vector<Integer> next(static_cast<std::size_t>(n + 1), 1);
    for (long k = 1; k < n; ++k) next[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k - 1)] + row[static_cast<std::size_t>(k)];
    row = std::move(next);
    Integer L = 1;
    for (const auto& b : row) L = lcm(L, b);
    rows.push_back({n, L, log(Real(L, bits)) / Real(n, bits)});
  }
  return rows;
}

/// CSV with header "n,value", 17 significant digits.
inline void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "n,value\n";
  for (const auto& p : curve) out << p.n << "," << p.value.to_string(17) << "\n";
}

inline void write_lcm_csv(std::ostream& out, const std::vector<LcmRow>& rows) {
  out << "n,value\n";
  for (const auto& r : rows) out << r.n << "," << r.normalized_log.to_string(17) << "\n";
}

}  // namespace holoscope
