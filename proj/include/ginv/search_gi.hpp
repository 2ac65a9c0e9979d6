#pragma once

#include <span>
#include <vector>

#include "ginv/block_init.hpp"
#include "ginv/dense.hpp"
#include "ginv/kernels.hpp"

namespace ginv {

struct SearchConfig {
  double delta = 1e-12;  // accept a swap only if it gains more than a factor 1 + delta
  double epsilon = 0.0;  // local-maximizer slack; combined with delta
  Index max_sweeps = 100000;
  kernels::Exec exec = kernels::Exec::serial;
};

void validate(const SearchConfig& cfg);

// (1 + epsilon)(1 + delta)
double acceptance_factor(const SearchConfig& cfg);

struct SearchStats {
  Index swaps = 0;
  Index sweeps = 0;
  double initial_log_det = 0.0;
  double final_log_det = 0.0;
  double initial_norm = 0.0;  // ||H||_1 of the starting block
  double final_norm = 0.0;
  double elapsed_ms = 0.0;
};

template <typename Block>
struct BasicSearchResult {
  Block block;
  SearchStats stats;
};

using SearchResult = BasicSearchResult<BlockIndex>;

// Throws InvalidArgumentError for malformed index lists (sizes, duplicates,
// out of range) and SingularMatrixError when A[S,T] is singular.
void check_block(const DenseMatrix& a, const BlockIndex& b);

//
// Current block A[S,T], its LU factors and the complement lists. Swaps put
// the outgoing index at the position the incoming one occupied in the
// complement, and refactor the block from scratch.
//
class SearchState {
 public:
  SearchState(const DenseMatrix& a, BlockIndex block);

  const BlockIndex& block() const noexcept { return block_; }
  const IndexList& row_complement() const noexcept { return row_comp_; }
  const IndexList& col_complement() const noexcept { return col_comp_; }
  const LUFactors& factors() const noexcept { return lu_; }
  LogDet log_det() const noexcept { return det_; }

  // alpha with A[S,T] alpha = A[S, col]: det changes by alpha_j when
  // column `col` replaces position j.
  std::vector<double> column_ratios(Index col) const;
  // alpha with alpha^T A[S,T] = A[row, T]: det changes by alpha_i when
  // row `row` replaces position i.
  std::vector<double> row_ratios(Index row) const;

  // Replace T[j] by col_complement()[pos]. Returns alpha_j. Throws
  // DegenerateSwapError when the swapped block would be singular.
  double swap_column(Index pos, Index j);
  double swap_row(Index pos, Index i);

 private:
  void refactor();

  const DenseMatrix* a_;
  BlockIndex block_;
  IndexList row_comp_;
  IndexList col_comp_;
  LUFactors lu_;
  LogDet det_;
};

// Alternating column and row sweeps; the first improving candidate is
// taken. Position: least index with a large enough ratio, or the argmax
// when `plus` is set.
SearchResult fi_det(const DenseMatrix& a, const BlockIndex& b, const SearchConfig& cfg = {}, bool plus = false);

// One swap per iteration: the best over all column and row candidates.
// Ties between the two kinds go to the column swap.
SearchResult bi_det(const DenseMatrix& a, const BlockIndex& b, const SearchConfig& cfg = {});

// One iteration of bi_det: performs the best swap if it gains more than
// acceptance_factor(cfg). Returns whether a swap was made.
bool bi_det_step(SearchState& st, const SearchConfig& cfg);

// First-improvement search on ||A[S,T]^{-1}||_1, columns then rows.
SearchResult fi_norm(const DenseMatrix& a, const BlockIndex& b, const SearchConfig& cfg = {});

//
// Rank-one swap formulas.
//

// Theta * m where Theta = I + (vbar - e_j) e_j^T and
// vbar = (-v_1/v_j, ..., 1/v_j, ..., -v_r/v_j). `m` has r rows.
DenseMatrix theta_apply(const DenseMatrix& m, std::span<const double> v, Index j);

// ||Theta * m||_1 without forming the product.
double theta_apply_norm(const DenseMatrix& m, std::span<const double> v, Index j);

// Inverse of B with column j replaced by gamma, from Binv. Throws
// ZeroPivotError when |v_j| <= 1e-12 ||v||_inf, v = Binv gamma.
DenseMatrix inverse_swap_update(const DenseMatrix& binv, std::span<const double> gamma, Index j);

// Pivot threshold used for v_j in the norm searches.
double pivot_threshold(std::span<const double> v);

}  // namespace ginv
