#pragma once

#include <cstddef>
#include <vector>

#include "holoscope/rational.hpp"

namespace holoscope {

/// Row-major dense matrix of rationals.
class MatrixQ {
 public:
  MatrixQ() = default;
  MatrixQ(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), d_(rows * cols) {}
  MatrixQ(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (const auto& row : init) {
      if (row.size() != cols_) throw PreconditionError("ragged matrix literal");
      d_.insert(d_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return d_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return d_[i * cols_ + j]; }

  std::vector<Rational> apply(const std::vector<Rational>& v) const {
    if (v.size() != cols_) throw PreconditionError("dimension mismatch in matrix-vector product");
    std::vector<Rational> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> d_;
};

namespace detail {

using IntMatrix = std::vector<std::vector<Integer>>;

inline IntMatrix integer_rows(const MatrixQ& m) {
  IntMatrix a(m.rows(), std::vector<Integer>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer den = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) den = lcm(den, m(i, j).get_den());
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j).get_num() * (den / m(i, j).get_den());
  }
  return a;
}

/// Fraction-free (Bareiss) row echelon form in place. Returns pivot columns.
inline std::vector<std::size_t> bareiss_echelon(IntMatrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[r], a[p]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

/// Basis of the right null space of m. Each vector has integer entries with
/// content 1; the free variable that generates it is set positive.
inline std::vector<std::vector<Rational>> nullspace(const MatrixQ& m) {
  const std::size_t n = m.cols();
  auto a = detail::integer_rows(m);
  auto pivots = detail::bareiss_echelon(a, n);

  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(n);
    v[free] = 1;
    for (std::size_t k = pivots.size(); k-- > 0;) {
      const std::size_t c = pivots[k];
      Rational s = 0;
      for (std::size_t j = c + 1; j < n; ++j)
        if (v[j] != 0 && a[k][j] != 0) s += Rational(a[k][j]) * v[j];
      v[c] = -s / Rational(a[k][c]);
    }
    basis.push_back(primitive_part(v));
  }
  return basis;
}

/// Rank over Q.
inline std::size_t rank(const MatrixQ& m) {
  auto a = detail::integer_rows(m);
  return detail::bareiss_echelon(a, m.cols()).size();
}

/// Determinant by fraction-free elimination.
inline Rational determinant(const MatrixQ& m) {
  if (m.rows() != m.cols()) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Rational scale = 1;
  detail::IntMatrix a(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Integer den = 1;
    for (std::size_t j = 0; j < n; ++j) den = lcm(den, m(i, j).get_den());
    scale *= Rational(den);
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j).get_num() * (den / m(i, j).get_den());
  }
  int sgn = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(a[p], a[k]);
      sgn = -sgn;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return Rational(sgn * a[n - 1][n - 1]) / scale;
}

}  // namespace holoscope
