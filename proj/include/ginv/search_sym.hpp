#pragma once

#include "ginv/search_gi.hpp"

namespace ginv {

// Principal block A[S,S].
struct PrincipalBlock {
  IndexList S;

  Index order() const noexcept { return S.size(); }
  friend bool operator==(const PrincipalBlock&, const PrincipalBlock&) = default;
};

using PrincipalSearchResult = BasicSearchResult<PrincipalBlock>;

enum class SymVariant { fi, fi_plus, bi };

// How a candidate principal block is priced.
//   rank_two: exact rank-two update of det and inverse from A[S]^{-1}
//             (O(r) per position for det, O(r^2) for the norm);
//   direct:   LU of the candidate block.
enum class SymPricing { rank_two, direct };

// Throws InvalidArgumentError unless A is square and symmetric (relative
// tolerance 1e-12) and the indices are valid; SingularMatrixError when A[S]
// is singular.
void check_principal_block(const DenseMatrix& a, const PrincipalBlock& b);

// Candidate move: replace S[j] by an outside index l. FI takes the first
// improving (l, j) in loop order, FI+ the best j for the first improving l,
// BI the best pair overall.
PrincipalSearchResult fi_det_sym(const DenseMatrix& a, const PrincipalBlock& b, const SearchConfig& cfg = {},
                                 SymVariant variant = SymVariant::fi, SymPricing pricing = SymPricing::rank_two);

// First improvement on ||A[S]^{-1}||_1.
PrincipalSearchResult fi_norm_sym(const DenseMatrix& a, const PrincipalBlock& b, const SearchConfig& cfg = {},
                                  SymPricing pricing = SymPricing::rank_two);

//
// Swap pricing for one outside index l against every position j.
//
class PrincipalPricer {
 public:
  // ginv = A[S]^{-1}
  PrincipalPricer(const DenseMatrix& a, const IndexList& s, const DenseMatrix& ginv);

  // det(A[S with S_j := l]) / det(A[S]) for all j.
  std::vector<double> det_ratios(Index l) const;
  // ||A[S with S_j := l]^{-1}||_1, or +inf when the ratio |det| is below
  // 1e-12 (candidate numerically singular).
  double swapped_inverse_norm(Index l, Index j) const;
  // Same inverse, formed explicitly.
  DenseMatrix swapped_inverse(Index l, Index j) const;

 private:
  struct Terms {
    std::vector<double> gu;  // G u
    std::vector<double> gw;  // G w
    double k[2][2];          // I + V^T G U
    double det;
  };
  Terms terms(Index l, Index j, const std::vector<double>& z) const;
  std::vector<double> solve_z(Index l) const;

  const DenseMatrix* a_;
  const IndexList* s_;
  const DenseMatrix* g_;
};

std::vector<double> direct_det_ratios(const DenseMatrix& a, const IndexList& s, Index l);
double direct_swapped_inverse_norm(const DenseMatrix& a, const IndexList& s, Index l, Index j);

// Congruence form of the symmetric swap identity: for symmetric nonsingular
// B and alpha = B^{-1} gamma, returns
//   [I + e_j (alpha - e_j)^T] B [I + (alpha - e_j) e_j^T].
// Its determinant is alpha_j^2 det(B); its (j,j) entry is gamma^T B^{-1} gamma.
DenseMatrix congruence_swap(const DenseMatrix& b, std::span<const double> gamma, Index j);

}  // namespace ginv
