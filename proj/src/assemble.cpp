#include "ginv/assemble.hpp"

#include <cmath>
#include <optional>
#include <random>

#include "ginv/error.hpp"

namespace ginv {

namespace {

constexpr double kTiny = 1e-300;

double rel(double num, double den) { return num / std::max(den, kTiny); }

PenroseReport make_report(const std::array<double, 4>& res, double tol) {
  PenroseReport rep;
  rep.tol = tol;
  rep.residual = res;
  for (int k = 0; k < 4; ++k) rep.pass[k] = res[k] <= tol;
  return rep;
}

// Largest |det(A[rows', cols'])| / |det(A[rows, cols])| over `count`
// candidates produced by `make(k, rows, cols)`.
template <typename Make>
double max_ratio(const DenseMatrix& a, const IndexList& rows, const IndexList& cols, Index count, Make make,
                 kernels::Exec exec) {
  const auto base = log_det(submatrix(a, rows, cols));
  if (base.sign == 0) throw SingularMatrixError("certificate: block is singular");
  auto best = kernels::best_hit(
      exec, 0, count,
      [&](Index k) {
        IndexList r = rows;
        IndexList c = cols;
        make(k, r, c);
        const auto d = log_det(submatrix(a, r, c));
        return std::optional(d.sign == 0 ? 0.0 : std::exp(d.log_magnitude - base.log_magnitude));
      },
      [](double x) { return x; });
  return best ? best->payload : 0.0;
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::general: return "gi";
    case Variant::ah_symmetric: return "ah";
    case Variant::symmetric: return "sym";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "gi" || s == "general") return Variant::general;
  if (s == "ah" || s == "ah-symmetric") return Variant::ah_symmetric;
  if (s == "sym" || s == "symmetric") return Variant::symmetric;
  throw InvalidArgumentError("unknown variant '" + s + "' (expected gi, ah or sym)");
}

// --- SparseBlockInverse ---------------------------------------------------------

DenseMatrix SparseBlockInverse::densify() const {
  DenseMatrix h(rows, cols);
  for (Index c = 0; c < col_support.size(); ++c)
    for (Index r = 0; r < row_support.size(); ++r) h(row_support[r], col_support[c]) = payload(r, c);
  return h;
}

Index SparseBlockInverse::nnz() const { return count_nonzeros(payload); }

double SparseBlockInverse::one_norm() const { return one_norm_entrywise(payload); }

SparseBlockInverse assemble_gi(const DenseMatrix& a, const BlockIndex& b) {
  check_block(a, b);
  return {Variant::general, a.cols(), a.rows(), b.T, b.S, inverse(submatrix(a, b.S, b.T))};
}

SparseBlockInverse assemble_ah(const DenseMatrix& a, const ColumnBlock& b) {
  if (b.T.empty()) throw InvalidArgumentError("assemble_ah: empty column block");
  const auto ahat = select_columns(a, b.T);
  if (numeric_rank(ahat) < b.T.size()) throw RankDeficiencyError("assemble_ah: A[:,T] does not have full column rank");
  return {Variant::ah_symmetric, a.cols(), a.rows(), b.T, iota_indices(a.rows()), mp_pseudoinverse(ahat)};
}

SparseBlockInverse assemble_sym(const DenseMatrix& a, const PrincipalBlock& b) {
  check_principal_block(a, b);
  DenseMatrix p = inverse(submatrix(a, b.S, b.S));
  for (Index j = 0; j < p.cols(); ++j)
    for (Index i = j + 1; i < p.rows(); ++i) p(i, j) = p(j, i) = 0.5 * (p(i, j) + p(j, i));
  return {Variant::symmetric, a.cols(), a.rows(), b.S, b.S, std::move(p)};
}

// --- Penrose ------------------------------------------------------------------

PenroseReport check_penrose(const DenseMatrix& a, const DenseMatrix& h, double tol, kernels::Exec exec) {
  if (h.rows() != a.cols() || h.cols() != a.rows())
    throw DimensionMismatchError("check_penrose: H must be n x m for m x n A");
  DenseMatrix ah(a.rows(), a.rows());
  DenseMatrix ha(a.cols(), a.cols());
  kernels::gemm(exec, a, h, ah);
  kernels::gemm(exec, h, a, ha);
  DenseMatrix aha(a.rows(), a.cols());
  DenseMatrix hah(h.rows(), h.cols());
  kernels::gemm(exec, ah, a, aha);
  kernels::gemm(exec, ha, h, hah);
  const double nh = frobenius_norm(h);
  auto rep = make_report({rel(frobenius_norm(subtract(aha, a)), frobenius_norm(a)),
                          rel(frobenius_norm(subtract(hah, h)), nh),
                          rel(frobenius_norm(subtract(ah, ah.transpose())), frobenius_norm(ah)),
                          rel(frobenius_norm(subtract(ha, ha.transpose())), frobenius_norm(ha))},
                         tol);
  rep.rank = numeric_rank(h);
  rep.one_norm = one_norm_entrywise(h);
  rep.nnz = count_nonzeros(h);
  rep.symmetric = h.is_square() && h == h.transpose();
  return rep;
}

PenroseReport check_penrose(const DenseMatrix& a, const SparseBlockInverse& h, double tol, kernels::Exec exec) {
  if (h.rows != a.cols() || h.cols != a.rows()) throw DimensionMismatchError("check_penrose: H must be n x m for m x n A");
  const auto& R = h.row_support;
  const auto& C = h.col_support;
  const auto& P = h.payload;
  const Index p = R.size();

  // Y = P A[C,:] = (HA)[R,:]
  const auto a_c = select_rows(a, C);
  DenseMatrix y(p, a.cols());
  kernels::gemm(exec, P, a_c, y);

  // P1: A[:,R] Y - A
  const auto a_r = select_columns(a, R);
  DenseMatrix aha(a.rows(), a.cols());
  kernels::gemm(exec, a_r, y, aha);
  const double p1 = rel(frobenius_norm(subtract(aha, a)), frobenius_norm(a));

  // P2: (P A[C,R]) P - P
  const auto y_r = select_columns(y, R);
  DenseMatrix hah(p, C.size());
  kernels::gemm(exec, y_r, P, hah);
  const double p2 = rel(frobenius_norm(subtract(hah, P)), frobenius_norm(P));

  // P3: AH = A[:,R] (P E_C^T)
  DenseMatrix gt3(p, a.rows());
  for (Index c = 0; c < C.size(); ++c)
    for (Index i = 0; i < p; ++i) gt3(i, C[c]) = P(i, c);
  const auto s3 = kernels::product_asymmetry(exec, a_r.transpose(), gt3);

  // P4: HA = E_R Y
  DenseMatrix ft4(p, a.cols());
  for (Index i = 0; i < p; ++i) ft4(i, R[i]) = 1.0;
  const auto s4 = kernels::product_asymmetry(exec, ft4, y);

  auto rep = make_report({p1, p2, rel(s3.asymmetry, s3.norm), rel(s4.asymmetry, s4.norm)}, tol);
  rep.rank = numeric_rank(P);
  rep.one_norm = h.one_norm();
  rep.nnz = h.nnz();
  if (h.rows == h.cols) {
    const auto d = h.densify();
    rep.symmetric = d == d.transpose();
  }
  return rep;
}

bool reflexivity_rank_check(const DenseMatrix& a, const DenseMatrix& h, double tol) {
  const auto rep = check_penrose(a, h, tol);
  if (!rep.pass[0]) throw InvalidArgumentError("reflexivity_rank_check: H is not a generalized inverse at this tolerance");
  const bool rank_equal = numeric_rank(h) == numeric_rank(a);
  if (rank_equal != rep.pass[1])
    throw InconsistencyError("reflexivity_rank_check: P2 verdict disagrees with rank(H) = rank(A)");
  return rep.pass[1];
}

bool least_squares_check(const DenseMatrix& a, const DenseMatrix& h, std::span<const double> b, double tol) {
  if (h.rows() != a.cols() || h.cols() != a.rows() || b.size() != a.rows())
    throw DimensionMismatchError("least_squares_check: size mismatch");
  const auto x = multiply(h, b);
  auto res = multiply(a, x);
  for (Index i = 0; i < res.size(); ++i) res[i] -= b[i];
  return max_abs(multiply_transposed(a, res)) <= tol * max_abs(multiply_transposed(a, b));
}

bool least_squares_check(const DenseMatrix& a, const DenseMatrix& h, Index trials, double tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> b(a.rows());
  for (Index t = 0; t < trials; ++t) {
    for (double& x : b) x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    if (!least_squares_check(a, h, b, tol)) return false;
  }
  return true;
}

// --- certificates -------------------------------------------------------------

double max_single_swap_ratio(const DenseMatrix& a, const BlockIndex& b, kernels::Exec exec) {
  check_block(a, b);
  const Index r = b.order();
  const auto col_comp = complement_indices(a.cols(), b.T);
  const auto row_comp = complement_indices(a.rows(), b.S);
  const Index nc = col_comp.size() * r;
  return max_ratio(
      a, b.S, b.T, nc + row_comp.size() * r,
      [&](Index k, IndexList& rows, IndexList& cols) {
        if (k < nc)
          cols[k % r] = col_comp[k / r];
        else
          rows[(k - nc) % r] = row_comp[(k - nc) / r];
      },
      exec);
}

double max_single_swap_ratio(const DenseMatrix& a, const ColumnBlock& b, kernels::Exec exec) {
  check_column_block(a, b);
  const Index r = b.order();
  const auto col_comp = complement_indices(a.cols(), b.T);
  return max_ratio(
      a, b.S, b.T, col_comp.size() * r,
      [&](Index k, IndexList&, IndexList& cols) { cols[k % r] = col_comp[k / r]; }, exec);
}

double max_single_swap_ratio(const DenseMatrix& a, const PrincipalBlock& b, kernels::Exec exec) {
  check_principal_block(a, b);
  const Index r = b.order();
  const auto comp = complement_indices(a.rows(), b.S);
  return max_ratio(
      a, b.S, b.S, comp.size() * r,
      [&](Index k, IndexList& rows, IndexList& cols) {
        rows[k % r] = comp[k / r];
        cols[k % r] = comp[k / r];
      },
      exec);
}

double bound_ratio(const SparseBlockInverse& h, double z_opt) {
  if (!(z_opt > 0.0)) throw InvalidArgumentError("bound_ratio: optimum must be positive");
  return h.one_norm() / z_opt;
}

double bound_limit(Variant v, Index r, double epsilon) {
  const double rr = static_cast<double>(r);
  switch (v) {
    case Variant::general: return rr * rr * (1 + epsilon) * (1 + epsilon);
    case Variant::ah_symmetric: return rr * (1 + epsilon);
    case Variant::symmetric: return rr * rr * (1 + epsilon);
  }
  return 0.0;
}

}  // namespace ginv
