#include "ginv/block_init.hpp"

#include <cmath>
#include <limits>

#include "ginv/error.hpp"

namespace ginv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Unit vector from residual column j, reorthogonalized once against the basis.
std::vector<double> basis_vector(const DenseMatrix& residuals, Index j, const std::vector<std::vector<double>>& basis) {
  std::vector<double> q(residuals.col(j).begin(), residuals.col(j).end());
  for (const auto& b : basis) {
    double dot = 0.0;
    for (Index i = 0; i < q.size(); ++i) dot += b[i] * q[i];
    for (Index i = 0; i < q.size(); ++i) q[i] -= dot * b[i];
  }
  const double nq = norm2(q);
  for (double& x : q) x /= nq;
  return q;
}

void check_rank_arg(const DenseMatrix& a, Index r) {
  if (a.empty()) throw InvalidArgumentError("init: empty matrix");
  if (r < 1 || r > std::min(a.rows(), a.cols())) throw InvalidArgumentError("init: need 1 <= r <= min(m, n)");
}

void ensure_nonsingular(const DenseMatrix& a, const BlockIndex& b) {
  if (log_det(submatrix(a, b.S, b.T)).sign == 0) throw RankDeficiencyError("init: selected block is numerically singular");
}

}  // namespace

void validate(const InitConfig& cfg) {
  if (!(cfg.tau0 > 0.0)) throw InvalidArgumentError("init: tau0 must be > 0");
  if (!(cfg.decrease > 0.0 && cfg.decrease < 1.0)) throw InvalidArgumentError("init: decrease factor must be in (0, 1)");
}

double selection_tolerance(const DenseMatrix& a) {
  return static_cast<double>(std::max(a.rows(), a.cols())) * kEps * frobenius_norm(a);
}

VolumeSelection select_by_volume(const DenseMatrix& vectors, Index count, bool light, double tau, double tol,
                                 kernels::Exec exec) {
  DenseMatrix residuals = vectors;
  const Index k = residuals.cols();
  std::vector<double> norms(k);
  for (Index j = 0; j < k; ++j) norms[j] = norm2(residuals.col(j));
  std::vector<char> taken(k, 0);
  std::vector<std::vector<double>> basis;

  VolumeSelection sel;
  for (Index step = 0; step < count; ++step) {
    Index pick = k;
    if (light) {
      for (Index j = 0; j < k; ++j) {
        if (!taken[j] && norms[j] > tol && sel.volume * norms[j] > tau) {
          pick = j;
          break;
        }
      }
    } else {
      for (Index j = 0; j < k; ++j) {
        if (!taken[j] && norms[j] > tol && (pick == k || norms[j] > norms[pick])) pick = j;
      }
    }
    if (pick == k) return sel;
    sel.chosen.push_back(pick);
    sel.volume *= norms[pick];
    taken[pick] = 1;
    if (step + 1 == count) break;
    basis.push_back(basis_vector(residuals, pick, basis));
    kernels::project_out(exec, residuals, basis.back(), norms, taken);
  }
  sel.complete = true;
  return sel;
}

BlockIndex greedy(const DenseMatrix& a, Index r, kernels::Exec exec) {
  check_rank_arg(a, r);
  const double tol = selection_tolerance(a);
  auto rows = select_by_volume(a.transpose(), r, false, 0.0, tol, exec);
  if (!rows.complete) throw RankDeficiencyError("greedy: no admissible row (rank of A below r)");
  auto cols = select_by_volume(select_rows(a, rows.chosen), r, false, 0.0, tol, exec);
  if (!cols.complete) throw RankDeficiencyError("greedy: no admissible column (rank of A below r)");
  BlockIndex b{std::move(rows.chosen), std::move(cols.chosen)};
  ensure_nonsingular(a, b);
  return b;
}

namespace {

IndexList light_phase(const DenseMatrix& vectors, Index r, double tol, double& tau, Index& retries,
                      const InitConfig& cfg) {
  for (;;) {
    auto sel = select_by_volume(vectors, r, true, tau, tol, cfg.exec);
    if (sel.complete) return std::move(sel.chosen);
    if (retries == cfg.max_retries) throw ExhaustedRetriesError("greedy_light: tolerance retries exhausted");
    ++retries;
    tau *= cfg.decrease;
  }
}

}  // namespace

BlockIndex greedy_light(const DenseMatrix& a, Index r, const InitConfig& cfg) {
  check_rank_arg(a, r);
  validate(cfg);
  const double tol = selection_tolerance(a);
  double tau = cfg.tau0;
  Index retries = 0;
  BlockIndex b;
  b.S = light_phase(a.transpose(), r, tol, tau, retries, cfg);
  b.T = light_phase(select_rows(a, b.S), r, tol, tau, retries, cfg);
  ensure_nonsingular(a, b);
  return b;
}

BlockIndex greedy_sym(const DenseMatrix& a, Index r, bool light, const InitConfig& cfg) {
  check_rank_arg(a, r);
  if (!is_symmetric(a, 1e-12)) throw InvalidArgumentError("greedy_sym: matrix is not symmetric");
  const double tol = selection_tolerance(a);
  IndexList cols;
  if (light) {
    validate(cfg);
    double tau = cfg.tau0;
    Index retries = 0;
    cols = light_phase(a, r, tol, tau, retries, cfg);
  } else {
    auto sel = select_by_volume(a, r, false, 0.0, tol, cfg.exec);
    if (!sel.complete) throw RankDeficiencyError("greedy_sym: no admissible column (rank of A below r)");
    cols = std::move(sel.chosen);
  }
  BlockIndex b{cols, cols};
  ensure_nonsingular(a, b);
  return b;
}

}  // namespace ginv
