#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "holoscope/rational.hpp"

namespace holoscope::fm {

/// sum_i coeffs[i] * x_i + constant >= 0
struct Inequality {
  std::vector<Rational> coeffs;
  Rational constant;
};

using System = std::vector<Inequality>;

namespace detail {

inline Inequality normalized(Inequality in) {
  // Positive rescaling keeps the half-space; makes duplicates comparable.
  std::vector<Rational> all = in.coeffs;
  all.push_back(in.constant);
  Integer den = common_denominator(all);
  Integer g = 0;
  for (const auto& q : all) g = gcd(g, q.get_num() * (den / q.get_den()));
  if (g == 0) return in;
  Rational s = Rational(den) / Rational(g);
  for (auto& c : in.coeffs) c *= s;
  in.constant *= s;
  return in;
}

inline bool same(const Inequality& a, const Inequality& b) {
  return a.constant == b.constant && a.coeffs == b.coeffs;
}

}  // namespace detail

/// Eliminates variable `var` (its coefficient becomes zero in every row).
inline System eliminate(const System& sys, std::size_t var) {
  System keep, pos, neg;
  for (const auto& in : sys) {
    int s = sgn(in.coeffs[var]);
    (s > 0 ? pos : s < 0 ? neg : keep).push_back(in);
  }
  for (const auto& p : pos)
    for (const auto& n : neg) {
      Rational wp = -n.coeffs[var], wn = p.coeffs[var];
      Inequality c{std::vector<Rational>(p.coeffs.size()), wp * p.constant + wn * n.constant};
      for (std::size_t i = 0; i < c.coeffs.size(); ++i) c.coeffs[i] = wp * p.coeffs[i] + wn * n.coeffs[i];
      c.coeffs[var] = 0;
      keep.push_back(c);
    }
  System out;
  for (auto& in : keep) {
    auto nin = detail::normalized(std::move(in));
    if (std::none_of(out.begin(), out.end(), [&](const Inequality& o) { return detail::same(o, nin); }))
      out.push_back(std::move(nin));
  }
  return out;
}

inline bool trivially_infeasible(const System& sys) {
  for (const auto& in : sys) {
    bool zero = std::all_of(in.coeffs.begin(), in.coeffs.end(), [](const Rational& c) { return c == 0; });
    if (zero && in.constant < 0) return true;
  }
  return false;
}

/// Bounds of x_var over the real solution set. nullopt in `lower`/`upper`
/// means unbounded on that side. `feasible` is false if the set is empty.
struct Projection {
  bool feasible = true;
  std::optional<Rational> lower;
  std::optional<Rational> upper;
};

inline Projection project(System sys, std::size_t dims, std::size_t var) {
  for (std::size_t v = 0; v < dims; ++v)
    if (v != var) sys = eliminate(sys, v);
  Projection p;
  if (trivially_infeasible(sys)) {
    p.feasible = false;
    return p;
  }
  for (const auto& in : sys) {
    const Rational& a = in.coeffs[var];
    if (a == 0) continue;
    Rational bound = -in.constant / a;
    if (a > 0) {
      if (!p.lower || bound > *p.lower) p.lower = bound;
    } else {
      if (!p.upper || bound < *p.upper) p.upper = bound;
    }
  }
  if (p.lower && p.upper && *p.lower > *p.upper) p.feasible = false;
  return p;
}

/// A rational point of the system, or nullopt if it is empty. Eliminates the
/// last variable first and back-substitutes, preferring integer values.
inline std::optional<std::vector<Rational>> find_point(const System& sys, std::size_t dims) {
  std::vector<System> stages{sys};
  for (std::size_t v = dims; v-- > 0;) stages.push_back(eliminate(stages.back(), v));
  if (trivially_infeasible(stages.back())) return std::nullopt;
  std::vector<Rational> x(dims);
  for (std::size_t v = 0; v < dims; ++v) {
    // stages[dims - v - 1] involves x_0..x_v only
    const System& s = stages[dims - v - 1];
    std::optional<Rational> lo, hi;
    for (const auto& in : s) {
      const Rational& a = in.coeffs[v];
      if (a == 0) continue;
      Rational rest = in.constant;
      for (std::size_t i = 0; i < v; ++i) rest += in.coeffs[i] * x[i];
      Rational bound = -rest / a;
      if (a > 0) {
        if (!lo || bound > *lo) lo = bound;
      } else {
        if (!hi || bound < *hi) hi = bound;
      }
    }
    if (lo && hi && *lo > *hi) return std::nullopt;
    if (lo) {
      Rational c(ceil(*lo));
      x[v] = (!hi || c <= *hi) ? c : *lo;
    } else if (hi) {
      x[v] = Rational(floor(*hi));
    } else {
      x[v] = 0;
    }
  }
  return x;
}

}  // namespace holoscope::fm
