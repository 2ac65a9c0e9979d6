#pragma once

// Helpers shared by the unit tests. Oracles here are deliberately naive
// (cofactor determinants, Gauss-Jordan inverses, subset enumeration) so they
// share no code with the library routines they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ginv/dense.hpp"

namespace ginv::testing {

inline DenseMatrix random_matrix(std::mt19937_64& rng, Index m, Index n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  DenseMatrix a(m, n);
  for (double& x : a.data()) x = u(rng);
  return a;
}

// Product of an m x k and k x n random matrix: rank k with probability one.
inline DenseMatrix random_low_rank(std::mt19937_64& rng, Index m, Index n, Index k) {
  const auto l = random_matrix(rng, m, k);
  const auto r = random_matrix(rng, k, n);
  DenseMatrix a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Index p = 0; p < k; ++p) s += l(i, p) * r(p, j);
      a(i, j) = s;
    }
  return a;
}

inline DenseMatrix naive_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline double naive_fro(const DenseMatrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return std::sqrt(s);
}

inline double rel_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double num = 0.0;
  double den = 0.0;
  for (Index k = 0; k < a.size(); ++k) {
    num += (a.data()[k] - b.data()[k]) * (a.data()[k] - b.data()[k]);
    den += b.data()[k] * b.data()[k];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

// Laplace expansion along the first row.
inline double cofactor_det(const DenseMatrix& a) {
  const Index n = a.rows();
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  double det = 0.0;
  for (Index j = 0; j < n; ++j) {
    DenseMatrix minor(n - 1, n - 1);
    for (Index i = 1; i < n; ++i)
      for (Index k = 0, c = 0; k < n; ++k)
        if (k != j) minor(i - 1, c++) = a(i, k);
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    det += sign * a(0, j) * cofactor_det(minor);
  }
  return det;
}

// Gauss-Jordan with full pivoting.
inline DenseMatrix gauss_jordan_inverse(const DenseMatrix& a) {
  const Index n = a.rows();
  DenseMatrix w = a;
  DenseMatrix inv = DenseMatrix::identity(n);
  std::vector<Index> colperm(n);
  for (Index k = 0; k < n; ++k) colperm[k] = k;
  for (Index k = 0; k < n; ++k) {
    Index pi = k;
    Index pj = k;
    for (Index i = k; i < n; ++i)
      for (Index j = k; j < n; ++j)
        if (std::abs(w(i, j)) > std::abs(w(pi, pj))) {
          pi = i;
          pj = j;
        }
    for (Index j = 0; j < n; ++j) {
      std::swap(w(k, j), w(pi, j));
      std::swap(inv(k, j), inv(pi, j));
    }
    for (Index i = 0; i < n; ++i) std::swap(w(i, k), w(i, pj));
    std::swap(colperm[k], colperm[pj]);
    const double p = w(k, k);
    for (Index j = 0; j < n; ++j) {
      w(k, j) /= p;
      inv(k, j) /= p;
    }
    for (Index i = 0; i < n; ++i) {
      if (i == k) continue;
      const double f = w(i, k);
      if (f == 0.0) continue;
      for (Index j = 0; j < n; ++j) {
        w(i, j) -= f * w(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  // Undo the column permutation (it permutes rows of the inverse).
  DenseMatrix out(n, n);
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < n; ++j) out(colperm[k], j) = inv(k, j);
  return out;
}

inline double naive_one_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += std::abs(x);
  return s;
}

// Calls f on every increasing k-subset of {0..n-1}.
inline void for_each_subset(Index n, Index k, const std::function<void(const IndexList&)>& f) {
  IndexList idx(k);
  std::function<void(Index, Index)> rec = [&](Index pos, Index start) {
    if (pos == k) {
      f(idx);
      return;
    }
    for (Index i = start; i + (k - pos) <= n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

inline DenseMatrix pick(const DenseMatrix& a, const IndexList& rows, const IndexList& cols) {
  DenseMatrix out(rows.size(), cols.size());
  for (Index i = 0; i < rows.size(); ++i)
    for (Index j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  return out;
}

// Matrix with prescribed condition number: Q1 diag(s) Q2 with Householder
// reflections for Q1, Q2 and s log-spaced in [1/cond, 1].
inline DenseMatrix random_conditioned(std::mt19937_64& rng, Index n, double cond) {
  auto householder = [&](DenseMatrix& a, bool left) {
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    double nv = 0.0;
    for (double& x : v) {
      x = g(rng);
      nv += x * x;
    }
    nv = std::sqrt(nv);
    for (double& x : v) x /= nv;
    if (left) {
      for (Index j = 0; j < n; ++j) {
        double d = 0.0;
        for (Index i = 0; i < n; ++i) d += v[i] * a(i, j);
        for (Index i = 0; i < n; ++i) a(i, j) -= 2.0 * d * v[i];
      }
    } else {
      for (Index i = 0; i < n; ++i) {
        double d = 0.0;
        for (Index j = 0; j < n; ++j) d += a(i, j) * v[j];
        for (Index j = 0; j < n; ++j) a(i, j) -= 2.0 * d * v[j];
      }
    }
  };
  DenseMatrix a(n, n);
  for (Index k = 0; k < n; ++k)
    a(k, k) = n == 1 ? 1.0 : std::pow(cond, -static_cast<double>(k) / static_cast<double>(n - 1));
  for (int rep = 0; rep < 2; ++rep) {
    householder(a, true);
    householder(a, false);
  }
  return a;
}

}  // namespace ginv::testing
