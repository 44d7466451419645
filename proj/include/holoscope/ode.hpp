#pragma once

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "holoscope/poly.hpp"
#include "holoscope/recurrence.hpp"

namespace holoscope {

/// sum_i p_i(z) G^{(i)}(z) + inhom(z) = 0.
struct LinearODE {
  std::vector<PolyQ> coeffs;  // p_0 .. p_m
  PolyQ inhom;

  long order() const { return static_cast<long>(coeffs.size()) - 1; }
  const PolyQ& leading() const { return coeffs.back(); }

  /// Divide out the common polynomial factor of all coefficients and the
  /// right-hand side, then scale to integers with content 1 and p_m's leading
  /// coefficient positive.
  LinearODE normalized() const {
    if (coeffs.empty() || leading().is_zero()) throw PreconditionError("LinearODE: zero leading coefficient");
    PolyQ g = inhom;
    for (const auto& p : coeffs) g = gcd(g, p);
    LinearODE out;
    for (const auto& p : coeffs) out.coeffs.push_back(p / g);
    out.inhom = inhom / g;
    std::vector<Rational> all;
    for (const auto& p : out.coeffs) all.insert(all.end(), p.coeffs().begin(), p.coeffs().end());
    all.insert(all.end(), out.inhom.coeffs().begin(), out.inhom.coeffs().end());
    std::vector<Rational> prim = primitive_part(all);
    std::size_t first = 0;
    while (all[first] == 0) ++first;
    Rational scale = prim[first] / all[first];
    if (out.leading().leading() * scale < 0) scale = -scale;
    for (auto& p : out.coeffs) p = scale * p;
    out.inhom = scale * out.inhom;
    return out;
  }

  friend bool operator==(const LinearODE&, const LinearODE&) = default;
};

namespace detail {

/// Stirling numbers of the second kind S(k, i) for 0 <= i <= k <= n.
inline std::vector<std::vector<Integer>> stirling2(std::size_t n) {
  std::vector<std::vector<Integer>> s(n + 1, std::vector<Integer>(n + 1, 0));
  s[0][0] = 1;
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t i = 1; i <= k; ++i) s[k][i] = Integer(i) * s[k - 1][i] + s[k - 1][i - 1];
  return s;
}

/// Coefficients of the falling factorial x (x-1) ... (x-i+1).
inline PolyQ falling_poly(long i) {
  PolyQ p = PolyQ::constant(1);
  for (long t = 0; t < i; ++t) p *= PolyQ::linear_root(Rational(t));
  return p;
}

inline Integer falling(const Integer& x, long i) {
  Integer r = 1;
  for (long t = 0; t < i; ++t) r *= x - t;
  return r;
}

}  // namespace detail

/// ODE for G(z) = sum a_n z^n from sum_j P_j(n) a_{n+j} = 0 (n >= 0) and
/// a_0 .. a_{d-1}. Multiplying the relation by z^{n+d} and summing gives
/// sum_j z^{d-j} P_j(theta - j) G with theta = z d/dz, minus boundary terms
/// from the initial values. A zeroth-order result is differentiated once.
inline LinearODE rec_to_ode(const Recurrence& r, const std::vector<Rational>& initial) {
  const long d = r.order();
  if (static_cast<long>(initial.size()) != d)
    throw PreconditionError("rec_to_ode: need exactly " + std::to_string(d) + " initial values");
  const long deg = std::max(0L, r.degree());
  const auto s2 = detail::stirling2(static_cast<std::size_t>(deg));
  std::vector<PolyQ> coeffs(static_cast<std::size_t>(deg + 1));
  PolyQ inhom;
  for (long j = 0; j <= d; ++j) {
    const PolyQ& pj = r.coeffs[static_cast<std::size_t>(j)];
    if (pj.is_zero()) continue;
    const PolyQ q = pj.taylor_shift(Rational(-j));  // P_j(theta - j) in powers of theta
    for (long k = 0; k <= q.degree(); ++k)
      for (long i = 0; i <= k; ++i) {
        const Integer& st = s2[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        if (st == 0) continue;
        coeffs[static_cast<std::size_t>(i)] += PolyQ::monomial(q.coeff(static_cast<std::size_t>(k)) * st, static_cast<std::size_t>(i + d - j));
      }
    for (long m = 0; m < j; ++m)
      inhom -= PolyQ::monomial(pj(Rational(m - j)) * initial[static_cast<std::size_t>(m)], static_cast<std::size_t>(m + d - j));
  }
  while (coeffs.size() > 1 && coeffs.back().is_zero()) coeffs.pop_back();
  LinearODE o{std::move(coeffs), std::move(inhom)};
  if (o.order() == 0) {
    // p G + h = 0  =>  p G' + p' G + h' = 0
    const PolyQ p = o.coeffs[0];
    o = LinearODE{{p.derivative(), p}, o.inhom.derivative()};
  }
  return o.normalized();
}

/// A recurrence satisfied by the coefficients of every power-series solution,
/// valid for n >= valid_from.
struct DerivedRecurrence {
  Recurrence recurrence;
  long valid_from = 0;
};

/// Coefficient extraction: [z^N] z^k G^{(i)} = (N-k+i)^{\underline i} a_{N-k+i}.
inline DerivedRecurrence ode_to_recurrence(const LinearODE& o) {
  const long m = o.order();
  long K = 0;
  for (const auto& p : o.coeffs) K = std::max(K, p.degree());
  std::vector<PolyQ> q(static_cast<std::size_t>(K + m + 1));
  for (long i = 0; i <= m; ++i) {
    const PolyQ& p = o.coeffs[static_cast<std::size_t>(i)];
    for (long k = 0; k <= p.degree(); ++k) {
      const Rational& c = p.coeff(static_cast<std::size_t>(k));
      if (c == 0) continue;
      const long j = K - k + i;
      // (n + j)^{\underline i} as a polynomial in n
      q[static_cast<std::size_t>(j)] += c * detail::falling_poly(i).taylor_shift(Rational(j));
    }
  }
  long lo = 0;
  while (lo < static_cast<long>(q.size()) && q[static_cast<std::size_t>(lo)].is_zero()) ++lo;
  long hi = static_cast<long>(q.size()) - 1;
  while (hi >= lo && q[static_cast<std::size_t>(hi)].is_zero()) --hi;
  if (hi <= lo) throw Error("ode_to_recurrence: the operator does not define a recurrence");
  // Re-index so the lowest shift is a_n: substitute n -> n - lo.
  Recurrence r;
  for (long j = lo; j <= hi; ++j) r.coeffs.push_back(q[static_cast<std::size_t>(j)].taylor_shift(Rational(-lo)));
  // The relation read off z^N holds for N > deg inhom (and N >= 0, with a_k = 0
  // for k < 0). N = n + K - lo in the shifted index n.
  const long first_N = std::max(0L, o.inhom.degree() + 1);
  return {r.normalized(), std::max(0L, first_N - K + lo)};
}

/// Coefficients of sum_i p_i G^{(i)} + inhom for G = sum_{n<=N} a_n z^n,
/// through z^{N-m}, where truncation does not interfere.
inline std::vector<Rational> series_residual(const LinearODE& o, const ExactSequence& s) {
  if (s.offset != 0) throw PreconditionError("series_residual: sequence must start at index 0");
  const long N = s.last_index();
  const long m = o.order();
  std::vector<Rational> out;
  for (long t = 0; t <= N - m; ++t) {
    Rational acc = o.inhom.coeff(static_cast<std::size_t>(t));
    for (long i = 0; i <= m; ++i) {
      const PolyQ& p = o.coeffs[static_cast<std::size_t>(i)];
      for (long k = 0; k <= std::min(p.degree(), t); ++k) {
        const long idx = t - k + i;
        acc += p.coeff(static_cast<std::size_t>(k)) * detail::falling(Integer(idx), i) * s.at(idx);
      }
    }
    out.push_back(acc);
  }
  return out;
}

/// Text format: "order m", lines "p_i: c0 c1 ..." and "inhom: c0 c1 ...".
inline LinearODE read_ode(std::istream& in) {
  std::string line;
  long order = -1;
  std::vector<std::optional<PolyQ>> polys;
  std::optional<PolyQ> inhom;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    auto where = [&] { return "ODE file line " + std::to_string(lineno) + ": "; };
    if (order < 0) {
      std::string extra;
      if (head != "order" || !(ls >> order) || order < 1 || (ls >> extra)) throw Error(where() + "expected 'order m' with m >= 1");
      polys.resize(static_cast<std::size_t>(order + 1));
      continue;
    }
    std::optional<PolyQ>* slot = nullptr;
    if (head == "inhom:") {
      slot = &inhom;
    } else {
      if (head.size() < 3 || head[0] != 'p' || head[1] != '_' || head.back() != ':') throw Error(where() + "expected 'p_i: ...' or 'inhom: ...'");
      long i = -1;
      try {
        i = std::stol(head.substr(2, head.size() - 3));
      } catch (...) {
        throw Error(where() + "bad index in '" + head + "'");
      }
      if (i < 0 || i > order) throw Error(where() + "index out of range in '" + head + "'");
      slot = &polys[static_cast<std::size_t>(i)];
    }
    if (*slot) throw Error(where() + "duplicate '" + head + "'");
    std::vector<Rational> c;
    std::string word;
    try {
      while (ls >> word) c.push_back(parse_rational(word));
    } catch (const Error& e) {
      throw Error(where() + e.what());
    }
    *slot = PolyQ(std::move(c));
  }
  if (order < 0) throw Error("ODE file: missing 'order m' line");
  LinearODE o;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (!polys[i]) throw Error("ODE file: missing p_" + std::to_string(i));
    o.coeffs.push_back(*polys[i]);
  }
  if (o.leading().is_zero()) throw Error("ODE file: p_" + std::to_string(order) + " is zero");
  if (inhom) o.inhom = *inhom;
  return o;
}

inline void write_ode(std::ostream& out, const LinearODE& o) {
  auto row = [&](const PolyQ& p) {
    for (const auto& c : p.coeffs()) out << " " << to_string(c);
    if (p.is_zero()) out << " 0";
    out << "\n";
  };
  out << "order " << o.order() << "\n";
  for (std::size_t i = 0; i < o.coeffs.size(); ++i) {
    out << "p_" << i << ":";
    row(o.coeffs[i]);
  }
  out << "inhom:";
  row(o.inhom);
}

inline std::string to_string(const LinearODE& o) {
  std::string out;
  for (long i = o.order(); i >= 0; --i) {
    const PolyQ& p = o.coeffs[static_cast<std::size_t>(i)];
    if (p.is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + p.to_string("z") + ")*G" + (i == 0 ? std::string() : i == 1 ? std::string("'") : "^(" + std::to_string(i) + ")");
  }
  if (!o.inhom.is_zero()) out += " + (" + o.inhom.to_string("z") + ")";
  return out + " = 0";
}

}  // namespace holoscope
