#include "ginv/kernels.hpp"

#include <cmath>

namespace ginv::kernels {

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

// One output column of C = A*B; shared by both schedules.
inline void gemm_column(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c, Index j) {
  auto cj = c.col(j);
  std::fill(cj.begin(), cj.end(), 0.0);
  for (Index k = 0; k < a.cols(); ++k) {
    const double bkj = b(k, j);
    if (bkj == 0.0) continue;
    const auto ak = a.col(k);
    for (Index i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
  }
}

inline void project_column(DenseMatrix& residuals, std::span<const double> q, std::span<double> norms, Index j) {
  auto rj = residuals.col(j);
  double dot = 0.0;
  for (Index i = 0; i < rj.size(); ++i) dot += q[i] * rj[i];
  double sq = 0.0;
  for (Index i = 0; i < rj.size(); ++i) {
    rj[i] -= dot * q[i];
    sq += rj[i] * rj[i];
  }
  norms[j] = std::sqrt(sq);
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// Row i of M and the part of ||M - M^T||^2 from pairs (i, k), k > i.
inline void asymmetry_row(const DenseMatrix& ft, const DenseMatrix& gt, Index i, double& asym, double& sq) {
  const auto fi = ft.col(i);
  const auto gi = gt.col(i);
  asym = 0.0;
  const double mii = dot(fi, gi);
  sq = mii * mii;
  for (Index k = i + 1; k < ft.cols(); ++k) {
    const double mik = dot(fi, gt.col(k));
    const double mki = dot(ft.col(k), gi);
    asym += 2.0 * (mik - mki) * (mik - mki);
    sq += mik * mik + mki * mki;
  }
}

Asymmetry finish_asymmetry(const std::vector<double>& asym, const std::vector<double>& sq) {
  double a = 0.0;
  double s = 0.0;
  for (Index i = 0; i < asym.size(); ++i) {
    a += asym[i];
    s += sq[i];
  }
  return {std::sqrt(a), std::sqrt(s)};
}

}  // namespace

namespace serial {

Asymmetry product_asymmetry(const DenseMatrix& ft, const DenseMatrix& gt) {
  const Index k = ft.cols();
  std::vector<double> asym(k), sq(k);
  for (Index i = 0; i < k; ++i) asymmetry_row(ft, gt, i, asym[i], sq[i]);
  return finish_asymmetry(asym, sq);
}

void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c) {
  for (Index j = 0; j < b.cols(); ++j) gemm_column(a, b, c, j);
}

void project_out(DenseMatrix& residuals, std::span<const double> q, std::span<double> norms,
                 std::span<const char> skip) {
  for (Index j = 0; j < residuals.cols(); ++j) {
    if (!skip[j]) project_column(residuals, q, norms, j);
  }
}

}  // namespace serial

namespace omp {

void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c) {
  const auto n = static_cast<std::ptrdiff_t>(b.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) gemm_column(a, b, c, static_cast<Index>(j));
}

void project_out(DenseMatrix& residuals, std::span<const double> q, std::span<double> norms,
                 std::span<const char> skip) {
  const auto n = static_cast<std::ptrdiff_t>(residuals.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    if (!skip[static_cast<Index>(j)]) project_column(residuals, q, norms, static_cast<Index>(j));
  }
}

Asymmetry product_asymmetry(const DenseMatrix& ft, const DenseMatrix& gt) {
  const Index k = ft.cols();
  std::vector<double> asym(k), sq(k);
  const auto n = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    asymmetry_row(ft, gt, static_cast<Index>(i), asym[static_cast<Index>(i)], sq[static_cast<Index>(i)]);
  }
  return finish_asymmetry(asym, sq);
}

}  // namespace omp

}  // namespace ginv::kernels
