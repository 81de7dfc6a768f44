#pragma once

// Exact row reduction over the rationals, used as an independent oracle for
// the SVD-based cohomology dimensions.

#include "invcx/linalg.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <random>
#include <vector>

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using QMatrix = std::vector<std::vector<Q>>;

inline QMatrix zeros(int r, int c) { return QMatrix(r, std::vector<Q>(c, Q(0))); }

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<int> rref(QMatrix& a) {
  std::vector<int> pivots;
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(a[r], a[sel]);
    const Q inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Q f = a[i][c];
      for (int j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline int rank(QMatrix a) { return static_cast<int>(rref(a).size()); }

inline QMatrix multiply(const QMatrix& a, const QMatrix& b) {
  const size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  QMatrix out = zeros(static_cast<int>(n), static_cast<int>(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l)
      if (a[i][l] != 0)
        for (size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
  return out;
}

inline QMatrix transpose(const QMatrix& a) {
  const int r = static_cast<int>(a.size()), c = r ? static_cast<int>(a[0].size()) : 0;
  QMatrix t = zeros(c, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) t[j][i] = a[i][j];
  return t;
}

// Rows spanning {y : y^T a = 0}, i.e. the null space of a^T.
inline QMatrix left_kernel(const QMatrix& a, int rows_of_a) {
  QMatrix at = transpose(a);
  if (at.empty()) {
    QMatrix id = zeros(rows_of_a, rows_of_a);
    for (int i = 0; i < rows_of_a; ++i) id[i][i] = 1;
    return id;
  }
  const std::vector<int> pivots = rref(at);
  QMatrix basis;
  for (int free = 0; free < rows_of_a; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<Q> v(rows_of_a, Q(0));
    v[free] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -at[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline QMatrix random_int(int r, int c, std::mt19937_64& rng, int range = 3) {
  std::uniform_int_distribution<int> d(-range, range);
  QMatrix m = zeros(r, c);
  for (auto& row : m)
    for (auto& x : row) x = d(rng);
  return m;
}

inline invcx::CMatrix to_complex(const QMatrix& a, int rows, int cols) {
  invcx::CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = static_cast<double>(a[i][j]);
  return m;
}

struct RandomComplex {
  invcx::CMatrix p, q;
  int h = 0;  // exact cohomology dimension at the middle space
};

// Q : C^k -> C^n of random rank, P = R K with the rows of K annihilating ran Q.
inline RandomComplex random_exact_complex(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 8), small(0, 8);
  const int n = dim(rng);
  const int k = small(rng) % 9;
  const int m = small(rng) % 9;
  const int rq = k == 0 ? 0 : static_cast<int>(rng() % (std::min(n, k) + 1));
  QMatrix qm = zeros(n, k);
  if (rq > 0) qm = multiply(random_int(n, rq, rng), random_int(rq, k, rng));
  const QMatrix kern = left_kernel(qm, n);
  const int kr = static_cast<int>(kern.size());
  QMatrix pm = zeros(m, n);
  if (kr > 0 && m > 0) {
    const int rr = static_cast<int>(rng() % (std::min(m, kr) + 1));
    if (rr > 0) pm = multiply(multiply(random_int(m, rr, rng), random_int(rr, kr, rng)), kern);
  }
  RandomComplex out;
  out.q = to_complex(qm, n, k);
  out.p = to_complex(pm, m, n);
  out.h = n - rank(pm) - rank(qm);
  return out;
}

}  // namespace oracle
