#include "ginv/search_ah.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include "ginv/error.hpp"

namespace ginv {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double pinv_norm(const DenseMatrix& a, const IndexList& cols) {
  return one_norm_entrywise(mp_pseudoinverse(select_columns(a, cols)));
}

void next_sweep(SearchStats& s, const SearchConfig& cfg) {
  if (s.sweeps == cfg.max_sweeps) throw NonConvergenceError("search: sweep limit reached");
  ++s.sweeps;
}

std::optional<Index> choose_position(const std::vector<double>& alpha, double thr, bool plus) {
  std::optional<Index> best;
  for (Index j = 0; j < alpha.size(); ++j) {
    if (std::abs(alpha[j]) <= thr) continue;
    if (!plus) return j;
    if (!best || std::abs(alpha[j]) > std::abs(alpha[*best])) best = j;
  }
  return best;
}

ColumnSearchResult finish(const DenseMatrix& a, const SearchState& st, SearchStats stats, Clock::time_point t0) {
  ColumnSearchResult res{column_block(st.block()), stats};
  res.stats.final_log_det = st.log_det().log_magnitude;
  res.stats.final_norm = pinv_norm(a, res.block.T);
  res.stats.elapsed_ms = ms_since(t0);
  return res;
}

double range_residual(const DenseMatrix& ahat, std::span<const double> gamma, std::span<const double> v) {
  const auto av = multiply(ahat, v);
  double worst = 0.0;
  for (Index i = 0; i < av.size(); ++i) worst = std::max(worst, std::abs(av[i] - gamma[i]));
  return worst;
}

}  // namespace

void check_column_block(const DenseMatrix& a, const ColumnBlock& b) { check_block(a, BlockIndex{b.S, b.T}); }

ColumnSearchResult fi_det_ah(const DenseMatrix& a, const BlockIndex& b, const SearchConfig& cfg, bool plus) {
  validate(cfg);
  const auto t0 = Clock::now();
  SearchState st(a, b);
  SearchStats stats;
  stats.initial_log_det = st.log_det().log_magnitude;
  stats.initial_norm = pinv_norm(a, b.T);
  const double thr = acceptance_factor(cfg);

  bool cont = true;
  while (cont) {
    next_sweep(stats, cfg);
    cont = false;
    for (Index l = 0;;) {
      auto hit = kernels::first_hit(cfg.exec, l, st.col_complement().size(), [&](Index k) {
        return choose_position(st.column_ratios(st.col_complement()[k]), thr, plus);
      });
      if (!hit) break;
      st.swap_column(hit->index, hit->payload);
      ++stats.swaps;
      cont = true;
      l = hit->index + 1;
    }
  }
  return finish(a, st, stats, t0);
}

ColumnSearchResult bi_det_ah(const DenseMatrix& a, const BlockIndex& b, const SearchConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  SearchState st(a, b);
  SearchStats stats;
  stats.initial_log_det = st.log_det().log_magnitude;
  stats.initial_norm = pinv_norm(a, b.T);
  const double thr = acceptance_factor(cfg);

  for (;;) {
    next_sweep(stats, cfg);
    auto best = kernels::best_hit(
        cfg.exec, 0, st.col_complement().size(),
        [&](Index k) {
          const auto alpha = st.column_ratios(st.col_complement()[k]);
          std::pair<double, Index> m{0.0, 0};
          for (Index j = 0; j < alpha.size(); ++j)
            if (std::abs(alpha[j]) > m.first) m = {std::abs(alpha[j]), j};
          return std::optional(m);
        },
        [](const std::pair<double, Index>& p) { return p.first; });
    if (!best || best->payload.first <= thr) break;
    st.swap_column(best->index, best->payload.second);
    ++stats.swaps;
  }
  return finish(a, st, stats, t0);
}

DenseMatrix pinv_swap_update(const DenseMatrix& apinv, std::span<const double> v, Index j) {
  if (v.size() != apinv.rows() || j >= v.size()) throw DimensionMismatchError("pinv_swap_update: size mismatch");
  if (std::abs(v[j]) <= pivot_threshold(v)) throw ZeroPivotError("pinv_swap_update: |v_j| below tolerance");
  return theta_apply(apinv, v, j);
}

DenseMatrix pinv_swap_update(const DenseMatrix& ahat, const DenseMatrix& apinv, std::span<const double> gamma,
                             std::span<const double> v, Index j) {
  if (ahat.rows() != gamma.size() || ahat.cols() != v.size())
    throw DimensionMismatchError("pinv_swap_update: size mismatch");
  if (range_residual(ahat, gamma, v) > 1e-8 * max_abs(gamma))
    throw RangeViolationError("pinv_swap_update: gamma is not in the range of the column block");
  return pinv_swap_update(apinv, v, j);
}

ColumnSearchResult fi_norm_ah(const DenseMatrix& a, const ColumnBlock& b, const SearchConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  check_column_block(a, b);
  const Index r = b.order();
  ColumnSearchResult res{b, {}};
  auto& T = res.block.T;
  const auto& S = res.block.S;
  LUFactors lu = lu_factor(submatrix(a, S, T));
  res.stats.initial_log_det = det_from_lu(lu).log_magnitude;
  const double thr = acceptance_factor(cfg);

  struct Move {
    Index j;
    std::vector<double> v;
  };
  bool first = true;
  bool cont = true;
  while (cont) {
    next_sweep(res.stats, cfg);
    cont = false;
    DenseMatrix pinv = mp_pseudoinverse(select_columns(a, T));
    double norm = one_norm_entrywise(pinv);
    if (first) res.stats.initial_norm = norm;
    first = false;
    IndexList comp = complement_indices(a.cols(), T);
    for (Index l = 0;;) {
      auto hit = kernels::first_hit(cfg.exec, l, comp.size(), [&](Index k) -> std::optional<Move> {
        std::vector<double> rhs(r);
        for (Index i = 0; i < r; ++i) rhs[i] = a(S[i], comp[k]);
        auto v = solve_lu(lu, rhs);
        const double tol = pivot_threshold(v);
        for (Index j = 0; j < r; ++j) {
          if (std::abs(v[j]) <= tol) continue;
          if (theta_apply_norm(pinv, v, j) * thr < norm) return Move{j, std::move(v)};
        }
        return std::nullopt;
      });
      if (!hit) break;
      const Index j = hit->payload.j;
      const Index incoming = comp[hit->index];
      pinv = pinv_swap_update(select_columns(a, T), pinv, a.col(incoming), hit->payload.v, j);
      norm = one_norm_entrywise(pinv);
      T[j] = incoming;
      comp = complement_indices(a.cols(), T);
      lu = lu_factor(submatrix(a, S, T));
      ++res.stats.swaps;
      cont = true;
      l = hit->index + 1;
    }
  }
  res.stats.final_log_det = det_from_lu(lu).log_magnitude;
  res.stats.final_norm = pinv_norm(a, T);
  res.stats.elapsed_ms = ms_since(t0);
  return res;
}

}  // namespace ginv
