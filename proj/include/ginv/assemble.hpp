#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "ginv/search_ah.hpp"
#include "ginv/search_gi.hpp"
#include "ginv/search_sym.hpp"

namespace ginv {

enum class Variant { general, ah_symmetric, symmetric };

// "gi", "ah", "sym"
std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

//
// H (n x m) with all nonzeros in rows `row_support` and columns
// `col_support`: H[row_support, col_support] = payload.
//
struct SparseBlockInverse {
  Variant variant = Variant::general;
  Index rows = 0;  // n
  Index cols = 0;  // m
  IndexList row_support;
  IndexList col_support;
  DenseMatrix payload;

  DenseMatrix densify() const;
  Index nnz() const;
  double one_norm() const;
};

// H[T,S] = A[S,T]^{-1}. Throws SingularMatrixError.
SparseBlockInverse assemble_gi(const DenseMatrix& a, const BlockIndex& b);
// Rows T of H = A[:,T]^+. Throws RankDeficiencyError when A[:,T] has rank < r.
SparseBlockInverse assemble_ah(const DenseMatrix& a, const ColumnBlock& b);
// H[S,S] = A[S]^{-1}, symmetrized so that H = H^T exactly.
SparseBlockInverse assemble_sym(const DenseMatrix& a, const PrincipalBlock& b);

struct PenroseReport {
  std::array<double, 4> residual{};  // P1..P4, relative Frobenius
  std::array<bool, 4> pass{};
  double tol = 1e-8;
  Index rank = 0;
  double one_norm = 0.0;
  Index nnz = 0;
  bool symmetric = false;  // H == H^T exactly
};

// Residuals:
//   P1 ||AHA - A|| / ||A||            P2 ||HAH - H|| / max(||H||, tiny)
//   P3 ||AH - (AH)^T|| / max(||AH||, tiny)   P4 likewise for HA
// with tiny = 1e-300. Throws DimensionMismatchError.
PenroseReport check_penrose(const DenseMatrix& a, const DenseMatrix& h, double tol = 1e-8,
                            kernels::Exec exec = kernels::Exec::serial);
// Uses the block structure; never forms m x m or n x n products.
PenroseReport check_penrose(const DenseMatrix& a, const SparseBlockInverse& h, double tol = 1e-8,
                            kernels::Exec exec = kernels::Exec::serial);

// P2 verdict, cross-checked against rank(H) == rank(A). Requires P1 to hold
// (InvalidArgumentError otherwise); a disagreement throws InconsistencyError.
bool reflexivity_rank_check(const DenseMatrix& a, const DenseMatrix& h, double tol = 1e-8);

// ||A^T (A H b - b)||_inf <= tol ||A^T b||_inf for the given b.
bool least_squares_check(const DenseMatrix& a, const DenseMatrix& h, std::span<const double> b, double tol);
// Same for `trials` random b in [-1, 1]^m.
bool least_squares_check(const DenseMatrix& a, const DenseMatrix& h, Index trials, double tol,
                         std::uint64_t seed = 1);

//
// Brute-force local-maximizer certificates: every admissible single swap is
// evaluated with a fresh LU. The *_ratio functions return the largest
// |det(swapped)| / |det(block)| (0 when no swap exists).
//
double max_single_swap_ratio(const DenseMatrix& a, const BlockIndex& b, kernels::Exec exec = kernels::Exec::serial);
double max_single_swap_ratio(const DenseMatrix& a, const ColumnBlock& b, kernels::Exec exec = kernels::Exec::serial);
double max_single_swap_ratio(const DenseMatrix& a, const PrincipalBlock& b,
                             kernels::Exec exec = kernels::Exec::serial);

template <typename Block>
bool is_local_max_det(const DenseMatrix& a, const Block& b, double delta,
                      kernels::Exec exec = kernels::Exec::serial) {
  return max_single_swap_ratio(a, b, exec) <= 1.0 + delta;
}

// ||H||_1 / z_opt. Throws InvalidArgumentError when z_opt <= 0.
double bound_ratio(const SparseBlockInverse& h, double z_opt);
// r^2 (1+eps)^2 for general, r (1+eps) for ah-symmetric, r^2 (1+eps) for symmetric.
double bound_limit(Variant v, Index r, double epsilon = 0.0);

}  // namespace ginv
