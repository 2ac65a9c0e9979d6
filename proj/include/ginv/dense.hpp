#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ginv {

using Index = std::size_t;
using IndexList = std::vector<Index>;

//
// Column-major real matrix. Every matrix in the library (inputs, working
// blocks, outputs) is one of these.
//
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(Index rows, Index cols, double fill = 0.0);

  // Row-wise literal, e.g. DenseMatrix::from_rows({{1, 2}, {3, 4}}).
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix identity(Index n);
  static DenseMatrix diagonal(std::span<const double> values);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(Index i, Index j) noexcept { return data_[j * rows_ + i]; }
  double operator()(Index i, Index j) const noexcept { return data_[j * rows_ + i]; }

  std::span<double> col(Index j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(Index j) const noexcept { return {data_.data() + j * rows_, rows_}; }
  std::vector<double> row(Index i) const;

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  DenseMatrix transpose() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

// --- elementary helpers -------------------------------------------------

DenseMatrix submatrix(const DenseMatrix& a, std::span<const Index> rows, std::span<const Index> cols);
DenseMatrix select_columns(const DenseMatrix& a, std::span<const Index> cols);
DenseMatrix select_rows(const DenseMatrix& a, std::span<const Index> rows);
IndexList iota_indices(Index n);
IndexList complement_indices(Index n, std::span<const Index> chosen);

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x);
std::vector<double> multiply_transposed(const DenseMatrix& a, std::span<const double> x);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm(const DenseMatrix& m);
double max_abs(const DenseMatrix& m);
double max_abs(std::span<const double> v);
// ||vec(m)||_1, the sum of |m_ij|.
double one_norm_entrywise(const DenseMatrix& m);
Index count_nonzeros(const DenseMatrix& m);
bool all_finite(const DenseMatrix& m);
bool is_symmetric(const DenseMatrix& m, double rel_tol = 0.0);

// --- LU with partial pivoting -------------------------------------------

// P*A = L*U. `lu` holds L strictly below the diagonal (unit diagonal implied)
// and U on and above it. perm[i] is the row of A that ended up in row i.
struct LUFactors {
  DenseMatrix lu;
  IndexList perm;
  int perm_sign = 1;
  bool singular = false;
  double pivot_tol = 0.0;

  Index order() const noexcept { return lu.rows(); }
  DenseMatrix lower() const;
  DenseMatrix upper() const;
};

// sign is 0 iff the matrix is numerically singular.
struct LogDet {
  int sign = 0;
  double log_magnitude = 0.0;
};

LUFactors lu_factor(const DenseMatrix& m);

// Solves A x = rhs, or A^T x = rhs when `transposed`. Throws SingularMatrixError.
std::vector<double> solve_lu(const LUFactors& f, std::span<const double> rhs, bool transposed = false);
void solve_lu_into(const LUFactors& f, std::span<const double> rhs, std::span<double> out, bool transposed = false);

LogDet det_from_lu(const LUFactors& f);
LogDet log_det(const DenseMatrix& m);
DenseMatrix inverse(const LUFactors& f);
DenseMatrix inverse(const DenseMatrix& m);

// --- spectral ------------------------------------------------------------

// Nonincreasing, length min(rows, cols).
std::vector<double> singular_values(const DenseMatrix& m);
double rank_tolerance(const DenseMatrix& m, double sigma_max);
Index numeric_rank(const DenseMatrix& m);
DenseMatrix mp_pseudoinverse(const DenseMatrix& m);

}  // namespace ginv
