#pragma once

#include "ginv/dense.hpp"
#include "ginv/kernels.hpp"

namespace ginv {

// Row indices S and column indices T of an r x r block; A[S,T] is
// nonsingular for every block handed out by the library.
struct BlockIndex {
  IndexList S;
  IndexList T;

  Index order() const noexcept { return S.size(); }
  friend bool operator==(const BlockIndex&, const BlockIndex&) = default;
};

struct InitConfig {
  double tau0 = 1.0;
  double decrease = 0.1;
  Index max_retries = 60;  // counted over the row and column phases together
  kernels::Exec exec = kernels::Exec::serial;
};

void validate(const InitConfig& cfg);

//
// Greedy selection of r rows then r columns of A[S,:], maximizing the volume
// of the partial selection at each step (ties to the least index). The
// volume is tracked as the product of Gram-Schmidt residual norms, which
// equals the product of singular values of the selected vectors.
//
BlockIndex greedy(const DenseMatrix& a, Index r, kernels::Exec exec = kernels::Exec::serial);

// Least admissible index whose volume exceeds tau (strictly). A pass that
// cannot complete lowers tau by `decrease` and restarts; the lowered tau is
// kept for the column phase.
BlockIndex greedy_light(const DenseMatrix& a, Index r, const InitConfig& cfg = {});

// Symmetric A: pick r columns only and return S = T.
BlockIndex greedy_sym(const DenseMatrix& a, Index r, bool light, const InitConfig& cfg = {});

//
// Building blocks, exposed for testing.
//

// Selects `count` vectors (columns of `vectors`) greedily. With `light`
// false the largest residual wins; otherwise the least index whose running
// volume exceeds tau. `complete` is false when the light rule runs out of
// admissible vectors. `tol` is the numerical-zero threshold on residuals.
struct VolumeSelection {
  IndexList chosen;
  double volume = 1.0;
  bool complete = false;
};

VolumeSelection select_by_volume(const DenseMatrix& vectors, Index count, bool light, double tau, double tol,
                                 kernels::Exec exec = kernels::Exec::serial);

// max(m, n) * eps * ||A||_F
double selection_tolerance(const DenseMatrix& a);

}  // namespace ginv
