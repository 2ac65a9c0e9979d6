#pragma once

#include "ginv/search_gi.hpp"

namespace ginv {

// Columns T of A; the reference rows S only score determinants and are
// never changed by a search.
struct ColumnBlock {
  IndexList T;
  IndexList S;

  Index order() const noexcept { return T.size(); }
  friend bool operator==(const ColumnBlock&, const ColumnBlock&) = default;
};

using ColumnSearchResult = BasicSearchResult<ColumnBlock>;

inline ColumnBlock column_block(const BlockIndex& b) { return {b.T, b.S}; }

// Throws InvalidArgumentError / SingularMatrixError as check_block on (S, T).
void check_column_block(const DenseMatrix& a, const ColumnBlock& b);

// Column sweep of fi_det with S fixed. Stats report ||A[:,T]^+||_1.
ColumnSearchResult fi_det_ah(const DenseMatrix& a, const BlockIndex& b, const SearchConfig& cfg = {},
                             bool plus = false);

// One best column swap per iteration.
ColumnSearchResult bi_det_ah(const DenseMatrix& a, const BlockIndex& b, const SearchConfig& cfg = {});

// First-improvement search on ||A[:,T]^+||_1. v for a candidate column is
// solved from A[S,T] v = A[S,l]; an accepted candidate must satisfy
// ||A[:,T] v - A[:,l]||_inf <= 1e-8 ||A[:,l]||_inf or RangeViolationError
// is thrown.
ColumnSearchResult fi_norm_ah(const DenseMatrix& a, const ColumnBlock& b, const SearchConfig& cfg = {});

// Theta * Apinv (pseudoinverse after replacing column j of Ahat by
// Ahat v). Throws ZeroPivotError when |v_j| <= 1e-12 ||v||_inf.
DenseMatrix pinv_swap_update(const DenseMatrix& apinv, std::span<const double> v, Index j);

// As above, first checking that gamma = Ahat v within 1e-8 relative
// (RangeViolationError otherwise).
DenseMatrix pinv_swap_update(const DenseMatrix& ahat, const DenseMatrix& apinv, std::span<const double> gamma,
                             std::span<const double> v, Index j);

}  // namespace ginv
