#include "ginv/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ginv/error.hpp"
#include "ginv/kernels.hpp"

namespace ginv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using EigenMap = Eigen::Map<const Eigen::MatrixXd>;

EigenMap as_eigen(const DenseMatrix& m) {
  return EigenMap(m.data().data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatchError(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(Index rows, Index cols, double fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const Index r = rows.size();
  const Index c = r == 0 ? 0 : rows.begin()->size();
  DenseMatrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionMismatchError("from_rows: ragged rows");
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

DenseMatrix DenseMatrix::identity(Index n) {
  DenseMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> values) {
  DenseMatrix m(values.size(), values.size());
  for (Index i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

std::vector<double> DenseMatrix::row(Index i) const {
  std::vector<double> out(cols_);
  for (Index j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (Index j = 0; j < cols_; ++j)
    for (Index i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix submatrix(const DenseMatrix& a, std::span<const Index> rows, std::span<const Index> cols) {
  DenseMatrix s(rows.size(), cols.size());
  for (Index j = 0; j < cols.size(); ++j)
    for (Index i = 0; i < rows.size(); ++i) s(i, j) = a(rows[i], cols[j]);
  return s;
}

DenseMatrix select_columns(const DenseMatrix& a, std::span<const Index> cols) {
  DenseMatrix s(a.rows(), cols.size());
  for (Index j = 0; j < cols.size(); ++j) std::copy_n(a.col(cols[j]).begin(), a.rows(), s.col(j).begin());
  return s;
}

DenseMatrix select_rows(const DenseMatrix& a, std::span<const Index> rows) {
  DenseMatrix s(rows.size(), a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < rows.size(); ++i) s(i, j) = a(rows[i], j);
  return s;
}

IndexList iota_indices(Index n) {
  IndexList v(n);
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

IndexList complement_indices(Index n, std::span<const Index> chosen) {
  std::vector<char> used(n, 0);
  for (Index i : chosen) used.at(i) = 1;
  IndexList rest;
  rest.reserve(n - std::min(n, chosen.size()));
  for (Index i = 0; i < n; ++i)
    if (!used[i]) rest.push_back(i);
  return rest;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatchError("multiply: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  kernels::serial::gemm(a, b, c);
  return c;
}

std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionMismatchError("multiply: vector length");
  std::vector<double> y(a.rows(), 0.0);
  for (Index j = 0; j < a.cols(); ++j) {
    const auto aj = a.col(j);
    for (Index i = 0; i < a.rows(); ++i) y[i] += aj[i] * x[j];
  }
  return y;
}

std::vector<double> multiply_transposed(const DenseMatrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw DimensionMismatchError("multiply_transposed: vector length");
  std::vector<double> y(a.cols(), 0.0);
  for (Index j = 0; j < a.cols(); ++j) {
    const auto aj = a.col(j);
    double s = 0.0;
    for (Index i = 0; i < a.rows(); ++i) s += aj[i] * x[i];
    y[j] = s;
  }
  return y;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "subtract");
  DenseMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (Index k = 0; k < cd.size(); ++k) cd[k] -= bd[k];
  return c;
}

double frobenius_norm(const DenseMatrix& m) {
  // scaled accumulation, avoids overflow for large entries
  double scale = max_abs(m);
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : m.data()) {
    const double t = v / scale;
    sum += t * t;
  }
  return scale * std::sqrt(sum);
}

double max_abs(std::span<const double> v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

double max_abs(const DenseMatrix& m) { return max_abs(m.data()); }

double one_norm_entrywise(const DenseMatrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += std::abs(v);
  return s;
}

Index count_nonzeros(const DenseMatrix& m) {
  return static_cast<Index>(std::count_if(m.data().begin(), m.data().end(), [](double v) { return v != 0.0; }));
}

bool all_finite(const DenseMatrix& m) {
  return std::all_of(m.data().begin(), m.data().end(), [](double v) { return std::isfinite(v); });
}

bool is_symmetric(const DenseMatrix& m, double rel_tol) {
  if (!m.is_square()) return false;
  const double bound = rel_tol * max_abs(m);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i)
      if (std::abs(m(i, j) - m(j, i)) > bound) return false;
  return true;
}

// --- LU -------------------------------------------------------------------

DenseMatrix LUFactors::lower() const {
  const Index n = order();
  DenseMatrix l(n, n);
  for (Index j = 0; j < n; ++j) {
    l(j, j) = 1.0;
    for (Index i = j + 1; i < n; ++i) l(i, j) = lu(i, j);
  }
  return l;
}

DenseMatrix LUFactors::upper() const {
  const Index n = order();
  DenseMatrix u(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= j; ++i) u(i, j) = lu(i, j);
  return u;
}

LUFactors lu_factor(const DenseMatrix& m) {
  if (!m.is_square()) throw DimensionMismatchError("lu_factor: matrix is not square");
  const Index n = m.rows();
  LUFactors f;
  f.lu = m;
  f.perm = iota_indices(n);
  f.pivot_tol = static_cast<double>(n) * kEps * max_abs(m);
  auto& a = f.lu;

  for (Index k = 0; k < n; ++k) {
    Index p = k;
    double best = std::abs(a(k, k));
    for (Index i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        p = i;
      }
    }
    if (p != k) {
      for (Index j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(f.perm[k], f.perm[p]);
      f.perm_sign = -f.perm_sign;
    }
    if (best <= f.pivot_tol) {
      f.singular = true;
      if (best == 0.0) continue;
    }
    const double pivot = a(k, k);
    for (Index i = k + 1; i < n; ++i) a(i, k) /= pivot;
    for (Index j = k + 1; j < n; ++j) {
      const double akj = a(k, j);
      if (akj == 0.0) continue;
      for (Index i = k + 1; i < n; ++i) a(i, j) -= a(i, k) * akj;
    }
  }
  return f;
}

void solve_lu_into(const LUFactors& f, std::span<const double> rhs, std::span<double> out, bool transposed) {
  if (f.singular) throw SingularMatrixError("solve_lu: factors are singular");
  const Index n = f.order();
  if (rhs.size() != n || out.size() != n) throw DimensionMismatchError("solve_lu: length mismatch");
  const auto& a = f.lu;

  if (!transposed) {
    for (Index i = 0; i < n; ++i) out[i] = rhs[f.perm[i]];
    for (Index j = 0; j < n; ++j) {
      const double xj = out[j];
      if (xj == 0.0) continue;
      for (Index i = j + 1; i < n; ++i) out[i] -= a(i, j) * xj;
    }
    for (Index j = n; j-- > 0;) {
      out[j] /= a(j, j);
      const double xj = out[j];
      if (xj == 0.0) continue;
      for (Index i = 0; i < j; ++i) out[i] -= a(i, j) * xj;
    }
    return;
  }

  // A^T x = b  with  A^T = U^T L^T P
  std::vector<double> w(rhs.begin(), rhs.end());
  for (Index j = 0; j < n; ++j) {
    double s = w[j];
    for (Index i = 0; i < j; ++i) s -= a(i, j) * w[i];
    w[j] = s / a(j, j);
  }
  for (Index j = n; j-- > 0;) {
    double s = w[j];
    for (Index i = j + 1; i < n; ++i) s -= a(i, j) * w[i];
    w[j] = s;
  }
  for (Index i = 0; i < n; ++i) out[f.perm[i]] = w[i];
}

std::vector<double> solve_lu(const LUFactors& f, std::span<const double> rhs, bool transposed) {
  std::vector<double> out(rhs.size());
  solve_lu_into(f, rhs, out, transposed);
  return out;
}

LogDet det_from_lu(const LUFactors& f) {
  LogDet d;
  if (f.singular) return d;
  d.sign = f.perm_sign;
  for (Index i = 0; i < f.order(); ++i) {
    const double u = f.lu(i, i);
    if (u < 0.0) d.sign = -d.sign;
    d.log_magnitude += std::log(std::abs(u));
  }
  return d;
}

LogDet log_det(const DenseMatrix& m) { return det_from_lu(lu_factor(m)); }

DenseMatrix inverse(const LUFactors& f) {
  const Index n = f.order();
  DenseMatrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    solve_lu_into(f, e, inv.col(j));
    e[j] = 0.0;
  }
  return inv;
}

DenseMatrix inverse(const DenseMatrix& m) { return inverse(lu_factor(m)); }

// --- spectral -------------------------------------------------------------

std::vector<double> singular_values(const DenseMatrix& m) {
  if (m.empty()) return {};
  Eigen::BDCSVD<Eigen::MatrixXd> svd(as_eigen(m));
  const auto& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double rank_tolerance(const DenseMatrix& m, double sigma_max) {
  return static_cast<double>(std::max(m.rows(), m.cols())) * kEps * sigma_max;
}

Index numeric_rank(const DenseMatrix& m) {
  const auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0;
  const double tol = rank_tolerance(m, s.front());
  return static_cast<Index>(std::count_if(s.begin(), s.end(), [tol](double v) { return v > tol; }));
}

DenseMatrix mp_pseudoinverse(const DenseMatrix& m) {
  DenseMatrix out(m.cols(), m.rows());
  if (m.empty()) return out;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(as_eigen(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return out;
  const double tol = rank_tolerance(m, s(0));
  Eigen::VectorXd inv_s = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > tol) inv_s(k) = 1.0 / s(k);
  const Eigen::MatrixXd pinv = svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().transpose();
  std::copy_n(pinv.data(), out.size(), out.data().begin());
  return out;
}

}  // namespace ginv
