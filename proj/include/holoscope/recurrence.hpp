#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "holoscope/linalg.hpp"
#include "holoscope/poly.hpp"
#include "holoscope/sequence.hpp"

namespace holoscope {

/// sum_{j=0}^{d} P_j(n) a_{n+j} = 0, normalized to integer coefficients with
/// content 1 and P_d having a positive leading coefficient.
struct Recurrence {
  std::vector<PolyQ> coeffs;  // P_0 .. P_d

  long order() const { return static_cast<long>(coeffs.size()) - 1; }
  long degree() const {
    long d = -1;
    for (const auto& p : coeffs) d = std::max(d, p.degree());
    return d;
  }
  const PolyQ& leading() const { return coeffs.back(); }

  /// sum_j P_j(n) a_{n+j} for a window of values a_n..a_{n+d}.
  Rational apply(long n, const std::vector<Rational>& window) const {
    Rational acc = 0;
    Rational x(n);
    for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j](x) * window[j];
    return acc;
  }

  Recurrence normalized() const {
    if (coeffs.empty() || coeffs.back().is_zero()) throw PreconditionError("recurrence: leading coefficient is zero");
    std::vector<Rational> all;
    for (const auto& p : coeffs)
      for (const auto& c : p.coeffs()) all.push_back(c);
    Integer den = common_denominator(all);
    Integer g = 0;
    for (const auto& c : all) g = gcd(g, c.get_num() * (den / c.get_den()));
    Rational s = Rational(den) / Rational(g);
    if (coeffs.back().leading() < 0) s = -s;
    Recurrence r;
    for (const auto& p : coeffs) r.coeffs.push_back(s * p);
    return r;
  }

  friend bool operator==(const Recurrence&, const Recurrence&) = default;
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(std::size_t required, std::size_t available)
      : Error("insufficient data: need at least " + std::to_string(required) + " values, have " + std::to_string(available)),
        required_(required) {}
  std::size_t required() const { return required_; }

 private:
  std::size_t required_;
};

class SingularStepError : public Error {
 public:
  explicit SingularStepError(long n)
      : Error("singular step: leading coefficient vanishes at n = " + std::to_string(n) + "; sequence not determined past it"),
        n_(n) {}
  long n() const { return n_; }

 private:
  long n_;
};

/// true iff the recurrence holds at every shift the sequence covers.
inline bool verify_recurrence(const Recurrence& r, const ExactSequence& s) {
  const long d = r.order();
  if (static_cast<long>(s.size()) < d + 1)
    throw PreconditionError("verify_recurrence: sequence shorter than order + 1");
  std::vector<Rational> window(static_cast<std::size_t>(d + 1));
  for (long n = s.offset; n + d <= s.last_index(); ++n) {
    for (long j = 0; j <= d; ++j) window[static_cast<std::size_t>(j)] = s.at(n + j);
    if (r.apply(n, window) != 0) return false;
  }
  return true;
}

/// Runs the recurrence forward from a_start..a_{start+d-1} = initial up to n_max.
inline ExactSequence extend_sequence(const Recurrence& r, const std::vector<Rational>& initial, long n_max, long start = 0) {
  const long d = r.order();
  if (static_cast<long>(initial.size()) != d)
    throw PreconditionError("extend_sequence: need exactly " + std::to_string(d) + " initial values");
  ExactSequence s{start, initial, Provenance::RecurrenceExtension};
  const PolyQ& lead = r.leading();
  for (long n = start; n + d <= n_max; ++n) {
    Rational x(n);
    Rational pd = lead(x);
    if (pd == 0) throw SingularStepError(n);
    Rational acc = 0;
    for (long j = 0; j < d; ++j) acc += r.coeffs[static_cast<std::size_t>(j)](x) * s.values[static_cast<std::size_t>(n - start + j)];
    s.values.push_back(-acc / pd);
  }
  const long wanted = std::max(0L, n_max + 1 - start);
  if (wanted < static_cast<long>(s.values.size())) s.values.resize(static_cast<std::size_t>(wanted));
  return s;
}

/// Continues an existing sequence with the recurrence up to n_max.
inline ExactSequence extend_sequence(const Recurrence& r, const ExactSequence& s, long n_max) {
  const long d = r.order();
  if (static_cast<long>(s.size()) < d) throw PreconditionError("extend_sequence: sequence shorter than the order");
  if (n_max <= s.last_index()) return s;
  std::vector<Rational> tail(s.values.end() - d, s.values.end());
  ExactSequence ext = extend_sequence(r, tail, n_max, s.last_index() - d + 1);
  ExactSequence out = s;
  out.values.insert(out.values.end(), ext.values.begin() + d, ext.values.end());
  return out;
}

inline constexpr std::size_t kGuardBand = 10;

/// Values needed to try a recurrence of this order and degree.
inline std::size_t guess_data_required(long order, long degree, std::size_t guard = kGuardBand) {
  return static_cast<std::size_t>((order + 1) * (degree + 1) + order) + guard;
}

namespace detail {

/// Reduced row echelon form over Q, in place; returns pivot columns.
inline std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    Rational inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Tries one (order, degree) cell. Columns are ordered (j = d..0, e = D..0),
/// so in the reduced basis the last row pivoting inside P_d has the smallest
/// degree P_d.
inline std::optional<Recurrence> guess_cell(const ExactSequence& s, long d, long deg, std::size_t guard) {
  const long L = static_cast<long>(s.size());
  const long fit_rows = L - d - static_cast<long>(guard);
  const long width = deg + 1;
  const std::size_t unknowns = static_cast<std::size_t>((d + 1) * width);
  auto row_at = [&](long n) {
    std::vector<Rational> row(unknowns);
    Rational x(n), xp = 1;
    std::vector<Rational> powers(static_cast<std::size_t>(width));
    for (long e = 0; e < width; ++e, xp *= x) powers[static_cast<std::size_t>(e)] = xp;
    for (long j = d; j >= 0; --j)
      for (long e = deg; e >= 0; --e) {
        std::size_t col = static_cast<std::size_t>((d - j) * width + (deg - e));
        row[col] = powers[static_cast<std::size_t>(e)] * s.at(n + j);
      }
    return row;
  };
  MatrixQ m(static_cast<std::size_t>(fit_rows), unknowns);
  for (long i = 0; i < fit_rows; ++i) {
    auto row = row_at(s.offset + i);
    for (std::size_t c = 0; c < unknowns; ++c) m(static_cast<std::size_t>(i), c) = row[c];
  }
  auto basis = nullspace(m);
  if (basis.empty()) return std::nullopt;
  auto pivots = rref(basis);
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < pivots.size(); ++i)
    if (pivots[i] < static_cast<std::size_t>(width)) pick = i;
  if (!pick) return std::nullopt;
  const auto& v = basis[*pick];
  Recurrence r;
  for (long j = 0; j <= d; ++j) {
    std::vector<Rational> c(static_cast<std::size_t>(width));
    for (long e = 0; e <= deg; ++e) c[static_cast<std::size_t>(e)] = v[static_cast<std::size_t>((d - j) * width + (deg - e))];
    r.coeffs.emplace_back(std::move(c));
  }
  if (r.leading().is_zero()) return std::nullopt;
  r = r.normalized();
  // held-out guard band
  std::vector<Rational> window(static_cast<std::size_t>(d + 1));
  for (long n = s.offset + fit_rows; n + d <= s.last_index(); ++n) {
    for (long j = 0; j <= d; ++j) window[static_cast<std::size_t>(j)] = s.at(n + j);
    if (r.apply(n, window) != 0) return std::nullopt;
  }
  return r;
}

}  // namespace detail

/// Smallest (order, then degree) recurrence fitted on the prefix that also
/// holds on the last `guard` held-out shifts. Cells that need more data than
/// the sequence has are skipped; if not even order 1, degree 0 fits, the
/// result is an InsufficientDataError. Empirically verified, not certified.
inline std::optional<Recurrence> guess_recurrence(const ExactSequence& s, long max_order, long max_degree,
                                                  std::size_t guard = kGuardBand) {
  if (max_order < 1 || max_degree < 0) throw PreconditionError("guess_recurrence: max_order >= 1 and max_degree >= 0 required");
  const std::size_t smallest = guess_data_required(1, 0, guard);
  if (s.size() < smallest) throw InsufficientDataError(smallest, s.size());
  for (long d = 1; d <= max_order; ++d)
    for (long deg = 0; deg <= max_degree; ++deg) {
      if (s.size() < guess_data_required(d, deg, guard)) break;
      if (auto r = detail::guess_cell(s, d, deg, guard)) return r;
    }
  return std::nullopt;
}

/// Text format: "order d", then "P_j: c0 c1 ..." (ascending degree).
inline Recurrence read_recurrence(std::istream& in) {
  std::string line;
  long order = -1;
  std::vector<std::optional<PolyQ>> polys;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    auto where = [&] { return "recurrence file line " + std::to_string(lineno) + ": "; };
    if (order < 0) {
      std::string extra;
      if (head != "order" || !(ls >> order) || order < 1 || (ls >> extra)) throw Error(where() + "expected 'order d' with d >= 1");
      polys.resize(static_cast<std::size_t>(order + 1));
      continue;
    }
    if (head.size() < 3 || head[0] != 'P' || head[1] != '_' || head.back() != ':') throw Error(where() + "expected 'P_j: ...'");
    long j = -1;
    try {
      j = std::stol(head.substr(2, head.size() - 3));
    } catch (...) {
      throw Error(where() + "bad index in '" + head + "'");
    }
    if (j < 0 || j > order) throw Error(where() + "index out of range in '" + head + "'");
    if (polys[static_cast<std::size_t>(j)]) throw Error(where() + "duplicate '" + head + "'");
    std::vector<Rational> c;
    std::string word;
    try {
      while (ls >> word) c.push_back(parse_rational(word));
    } catch (const Error& e) {
      throw Error(where() + e.what());
    }
    polys[static_cast<std::size_t>(j)] = PolyQ(std::move(c));
  }
  if (order < 0) throw Error("recurrence file: missing 'order d' line");
  Recurrence r;
  for (std::size_t j = 0; j < polys.size(); ++j) {
    if (!polys[j]) throw Error("recurrence file: missing P_" + std::to_string(j));
    r.coeffs.push_back(*polys[j]);
  }
  if (r.leading().is_zero()) throw Error("recurrence file: P_" + std::to_string(order) + " is zero");
  return r;
}

inline void write_recurrence(std::ostream& out, const Recurrence& r) {
  out << "order " << r.order() << "\n";
  for (std::size_t j = 0; j < r.coeffs.size(); ++j) {
    out << "P_" << j << ":";
    for (const auto& c : r.coeffs[j].coeffs()) out << " " << to_string(c);
    if (r.coeffs[j].is_zero()) out << " 0";
    out << "\n";
  }
}

inline std::string to_string(const Recurrence& r) {
  std::string out;
  for (long j = r.order(); j >= 0; --j) {
    const PolyQ& p = r.coeffs[static_cast<std::size_t>(j)];
    if (p.is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + p.to_string("n") + ")*a(" + (j == 0 ? std::string("n") : "n+" + std::to_string(j)) + ")";
  }
  return out + " = 0";
}

}  // namespace holoscope
