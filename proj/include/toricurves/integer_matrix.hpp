#pragma once

// Small exact integer linear algebra: determinants, rational solves and
// Smith normal form with a deterministic pivoting rule.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "toricurves/laurent.hpp"

namespace toricurves {

using IntMatrix = std::vector<std::vector<long long>>;

inline IntMatrix transpose(const IntMatrix& a) {
  if (a.empty()) return {};
  IntMatrix t(a[0].size(), std::vector<long long>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t inner = b.size();
  const std::size_t cols = inner ? b[0].size() : 0;
  IntMatrix c(a.size(), std::vector<long long>(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k)
      for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// Determinant of a square matrix (fraction-free, exact).
inline BigInt determinant(const IntMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("determinant: matrix is not square");
    for (std::size_t j = 0; j < n; ++j) m[i][j] = to_big(a[i][j]);
  }
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]);
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Solves columns * x = b for square nonsingular `columns` (given as a list of column vectors).
inline std::optional<std::vector<Rational>> solve_columns(const std::vector<std::vector<long long>>& columns,
                                                          const std::vector<long long>& b) {
  const std::size_t n = b.size();
  if (columns.size() != n) return std::nullopt;
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) m[i][j] = Rational(to_big(columns[j][i]));
  for (std::size_t i = 0; i < n; ++i) m[i][n] = Rational(to_big(b[i]));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[k], m[piv]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m[i][k] == 0) continue;
      const Rational f = m[i][k] / m[k][k];
      for (std::size_t j = k; j <= n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
  return x;
}

/// U * A * V = D with U, V unimodular and D diagonal (invariant factors d_1 | d_2 | ...).
struct SmithForm {
  IntMatrix left;   // U, rows x rows
  IntMatrix diag;   // D, rows x cols
  IntMatrix right;  // V, cols x cols
  std::vector<long long> invariant_factors;
};

namespace detail {

inline long long checked_mul(long long a, long long b) {
  long long out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("integer matrix overflow");
  return out;
}

inline long long checked_sub(long long a, long long b) {
  long long out;
  if (__builtin_sub_overflow(a, b, &out)) throw std::overflow_error("integer matrix overflow");
  return out;
}

inline IntMatrix identity(std::size_t n) {
  IntMatrix id(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

// row_i -= f * row_j on a matrix
inline void row_axpy(IntMatrix& m, std::size_t i, std::size_t j, long long f) {
  for (std::size_t c = 0; c < m[i].size(); ++c) m[i][c] = checked_sub(m[i][c], checked_mul(f, m[j][c]));
}

inline void col_axpy(IntMatrix& m, std::size_t i, std::size_t j, long long f) {
  for (auto& row : m) row[i] = checked_sub(row[i], checked_mul(f, row[j]));
}

inline void swap_cols(IntMatrix& m, std::size_t i, std::size_t j) {
  for (auto& row : m) std::swap(row[i], row[j]);
}

inline SmithForm finalize(SmithForm& s, std::size_t rank) {
  s.invariant_factors.clear();
  for (std::size_t i = 0; i < rank; ++i) s.invariant_factors.push_back(s.diag[i][i]);
  return s;
}

}  // namespace detail

/// Pivot rule: the nonzero entry of smallest absolute value in the remaining
/// block, ties broken by smallest row then smallest column.
inline SmithForm smith_normal_form(const IntMatrix& a) {
  using namespace detail;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  SmithForm s{identity(rows), a, identity(cols), {}};
  IntMatrix& d = s.diag;
  IntMatrix& u = s.left;
  IntMatrix& v = s.right;

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // pivot search
      std::optional<std::pair<std::size_t, std::size_t>> piv;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (d[i][j] != 0 && (!piv || std::llabs(d[i][j]) < std::llabs(d[piv->first][piv->second]))) piv = {i, j};
      if (!piv) return finalize(s, t);
      std::swap(d[t], d[piv->first]);
      std::swap(u[t], u[piv->first]);
      swap_cols(d, t, piv->second);
      swap_cols(v, t, piv->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d[i][t] == 0) continue;
        const long long q = d[i][t] / d[t][t];
        row_axpy(d, i, t, q);
        row_axpy(u, i, t, q);
        if (d[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d[t][j] == 0) continue;
        const long long q = d[t][j] / d[t][t];
        col_axpy(d, j, t, q);
        col_axpy(v, j, t, q);
        if (d[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility: the pivot must divide the remaining block
      std::optional<std::size_t> bad_row;
      for (std::size_t i = t + 1; i < rows && !bad_row; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (d[i][j] % d[t][t] != 0) {
            bad_row = i;
            break;
          }
      if (!bad_row) break;
      // fold the offending row into row t and repeat
      row_axpy(d, t, *bad_row, -1);
      row_axpy(u, t, *bad_row, -1);
    }
    if (d[t][t] < 0) {
      for (auto& x : d[t]) x = -x;
      for (auto& x : u[t]) x = -x;
    }
  }
  return finalize(s, std::min(rows, cols));
}

}  // namespace toricurves
