#include "ginv/search_gi.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <utility>

#include "ginv/error.hpp"

namespace ginv {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_indices(const IndexList& idx, Index bound, const char* what) {
  std::vector<char> seen(bound, 0);
  for (Index i : idx) {
    if (i >= bound) throw InvalidArgumentError(std::string("block: ") + what + " index out of range");
    if (seen[i]) throw InvalidArgumentError(std::string("block: repeated ") + what + " index");
    seen[i] = 1;
  }
}

// Position to swap for a candidate with ratios alpha, or none when no
// ratio exceeds the threshold.
std::optional<Index> choose_position(const std::vector<double>& alpha, double thr, bool plus) {
  std::optional<Index> best;
  for (Index j = 0; j < alpha.size(); ++j) {
    if (std::abs(alpha[j]) <= thr) continue;
    if (!plus) return j;
    if (!best || std::abs(alpha[j]) > std::abs(alpha[*best])) best = j;
  }
  return best;
}

// (max |alpha_j|, least argmax)
std::pair<double, Index> max_ratio(const std::vector<double>& alpha) {
  std::pair<double, Index> best{0.0, 0};
  for (Index j = 0; j < alpha.size(); ++j)
    if (std::abs(alpha[j]) > best.first) best = {std::abs(alpha[j]), j};
  return best;
}

void begin_stats(SearchStats& s, const SearchState& st) {
  s.initial_log_det = st.log_det().log_magnitude;
  s.initial_norm = one_norm_entrywise(inverse(st.factors()));
}

void end_stats(SearchStats& s, const SearchState& st, Clock::time_point t0) {
  s.final_log_det = st.log_det().log_magnitude;
  s.final_norm = one_norm_entrywise(inverse(st.factors()));
  s.elapsed_ms = ms_since(t0);
}

void next_sweep(SearchStats& s, const SearchConfig& cfg) {
  if (s.sweeps == cfg.max_sweeps) throw NonConvergenceError("search: sweep limit reached");
  ++s.sweeps;
}

}  // namespace

void validate(const SearchConfig& cfg) {
  if (!(cfg.delta >= 0.0)) throw InvalidArgumentError("search: delta must be >= 0");
  if (!(cfg.epsilon >= 0.0)) throw InvalidArgumentError("search: epsilon must be >= 0");
  if (cfg.max_sweeps < 1) throw InvalidArgumentError("search: max sweeps must be >= 1");
}

double acceptance_factor(const SearchConfig& cfg) { return (1.0 + cfg.epsilon) * (1.0 + cfg.delta); }

void check_block(const DenseMatrix& a, const BlockIndex& b) {
  if (b.S.empty() || b.S.size() != b.T.size()) throw InvalidArgumentError("block: S and T must have the same nonzero size");
  check_indices(b.S, a.rows(), "row");
  check_indices(b.T, a.cols(), "column");
  if (log_det(submatrix(a, b.S, b.T)).sign == 0) throw SingularMatrixError("block: A[S,T] is singular");
}

// --- SearchState --------------------------------------------------------------

SearchState::SearchState(const DenseMatrix& a, BlockIndex block) : a_(&a), block_(std::move(block)) {
  check_block(a, block_);
  row_comp_ = complement_indices(a.rows(), block_.S);
  col_comp_ = complement_indices(a.cols(), block_.T);
  refactor();
}

void SearchState::refactor() {
  lu_ = lu_factor(submatrix(*a_, block_.S, block_.T));
  det_ = det_from_lu(lu_);
}

std::vector<double> SearchState::column_ratios(Index col) const {
  const Index r = block_.order();
  std::vector<double> rhs(r);
  for (Index i = 0; i < r; ++i) rhs[i] = (*a_)(block_.S[i], col);
  return solve_lu(lu_, rhs);
}

std::vector<double> SearchState::row_ratios(Index row) const {
  const Index r = block_.order();
  std::vector<double> rhs(r);
  for (Index j = 0; j < r; ++j) rhs[j] = (*a_)(row, block_.T[j]);
  return solve_lu(lu_, rhs, true);
}

double SearchState::swap_column(Index pos, Index j) {
  const double alpha = column_ratios(col_comp_[pos])[j];
  if (alpha == 0.0) throw DegenerateSwapError("swap_column: zero ratio, swapped block would be singular");
  std::swap(block_.T[j], col_comp_[pos]);
  refactor();
  if (det_.sign == 0) {
    std::swap(block_.T[j], col_comp_[pos]);
    refactor();
    throw DegenerateSwapError("swap_column: swapped block is numerically singular");
  }
  return alpha;
}

double SearchState::swap_row(Index pos, Index i) {
  const double alpha = row_ratios(row_comp_[pos])[i];
  if (alpha == 0.0) throw DegenerateSwapError("swap_row: zero ratio, swapped block would be singular");
  std::swap(block_.S[i], row_comp_[pos]);
  refactor();
  if (det_.sign == 0) {
    std::swap(block_.S[i], row_comp_[pos]);
    refactor();
    throw DegenerateSwapError("swap_row: swapped block is numerically singular");
  }
  return alpha;
}

// --- det searches -------------------------------------------------------------

SearchResult fi_det(const DenseMatrix& a, const BlockIndex& b, const SearchConfig& cfg, bool plus) {
  validate(cfg);
  const auto t0 = Clock::now();
  SearchState st(a, b);
  SearchResult res;
  begin_stats(res.stats, st);
  const double thr = acceptance_factor(cfg);

  bool cont = true;
  while (cont) {
    next_sweep(res.stats, cfg);
    cont = false;
    for (Index l = 0;;) {
      auto hit = kernels::first_hit(cfg.exec, l, st.col_complement().size(), [&](Index k) {
        return choose_position(st.column_ratios(st.col_complement()[k]), thr, plus);
      });
      if (!hit) break;
      st.swap_column(hit->index, hit->payload);
      ++res.stats.swaps;
      cont = true;
      l = hit->index + 1;
    }
    for (Index l = 0;;) {
      auto hit = kernels::first_hit(cfg.exec, l, st.row_complement().size(), [&](Index k) {
        return choose_position(st.row_ratios(st.row_complement()[k]), thr, plus);
      });
      if (!hit) break;
      st.swap_row(hit->index, hit->payload);
      ++res.stats.swaps;
      cont = true;
      l = hit->index + 1;
    }
  }
  res.block = st.block();
  end_stats(res.stats, st, t0);
  return res;
}

bool bi_det_step(SearchState& st, const SearchConfig& cfg) {
  const auto score = [](const std::pair<double, Index>& p) { return p.first; };
  auto col = kernels::best_hit(
      cfg.exec, 0, st.col_complement().size(),
      [&](Index k) { return std::optional(max_ratio(st.column_ratios(st.col_complement()[k]))); }, score);
  auto row = kernels::best_hit(
      cfg.exec, 0, st.row_complement().size(),
      [&](Index k) { return std::optional(max_ratio(st.row_ratios(st.row_complement()[k]))); }, score);
  const double bc = col ? col->payload.first : 0.0;
  const double br = row ? row->payload.first : 0.0;
  if (std::max(bc, br) <= acceptance_factor(cfg)) return false;
  if (bc >= br)
    st.swap_column(col->index, col->payload.second);
  else
    st.swap_row(row->index, row->payload.second);
  return true;
}

SearchResult bi_det(const DenseMatrix& a, const BlockIndex& b, const SearchConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  SearchState st(a, b);
  SearchResult res;
  begin_stats(res.stats, st);
  for (;;) {
    next_sweep(res.stats, cfg);
    if (!bi_det_step(st, cfg)) break;
    ++res.stats.swaps;
  }
  res.block = st.block();
  end_stats(res.stats, st, t0);
  return res;
}

// --- norm search --------------------------------------------------------------

double pivot_threshold(std::span<const double> v) { return 1e-12 * max_abs(v); }

DenseMatrix theta_apply(const DenseMatrix& m, std::span<const double> v, Index j) {
  const Index r = m.rows();
  if (v.size() != r || j >= r) throw DimensionMismatchError("theta_apply: size mismatch");
  if (v[j] == 0.0) throw ZeroPivotError("theta_apply: v_j is zero");
  DenseMatrix out(r, m.cols());
  const double inv = 1.0 / v[j];
  for (Index c = 0; c < m.cols(); ++c) {
    const double mj = m(j, c);
    for (Index i = 0; i < r; ++i) out(i, c) = i == j ? mj * inv : m(i, c) - v[i] * inv * mj;
  }
  return out;
}

double theta_apply_norm(const DenseMatrix& m, std::span<const double> v, Index j) {
  const Index r = m.rows();
  const double inv = 1.0 / v[j];
  double s = 0.0;
  for (Index c = 0; c < m.cols(); ++c) {
    const auto mc = m.col(c);
    const double mj = mc[j] * inv;
    for (Index i = 0; i < r; ++i) s += i == j ? std::abs(mj) : std::abs(mc[i] - v[i] * mj);
  }
  return s;
}

DenseMatrix inverse_swap_update(const DenseMatrix& binv, std::span<const double> gamma, Index j) {
  if (!binv.is_square() || gamma.size() != binv.rows() || j >= binv.rows())
    throw DimensionMismatchError("inverse_swap_update: size mismatch");
  const auto v = multiply(binv, gamma);
  if (std::abs(v[j]) <= pivot_threshold(v)) throw ZeroPivotError("inverse_swap_update: |v_j| below tolerance");
  return theta_apply(binv, v, j);
}

namespace {

// One first-improvement pass swapping columns of a[rows, cols].
bool norm_phase(const DenseMatrix& a, const IndexList& rows, IndexList& cols, const SearchConfig& cfg,
                SearchStats& stats) {
  const double thr = acceptance_factor(cfg);
  const Index r = rows.size();
  IndexList comp = complement_indices(a.cols(), cols);
  DenseMatrix binv = inverse(submatrix(a, rows, cols));
  double norm = one_norm_entrywise(binv);
  bool changed = false;

  struct Move {
    Index j;
    std::vector<double> v;
  };
  for (Index l = 0;;) {
    auto hit = kernels::first_hit(cfg.exec, l, comp.size(), [&](Index k) -> std::optional<Move> {
      std::vector<double> gamma(r);
      for (Index i = 0; i < r; ++i) gamma[i] = a(rows[i], comp[k]);
      auto v = multiply(binv, gamma);
      const double tol = pivot_threshold(v);
      for (Index j = 0; j < r; ++j) {
        if (std::abs(v[j]) <= tol) continue;
        if (theta_apply_norm(binv, v, j) * thr < norm) return Move{j, std::move(v)};
      }
      return std::nullopt;
    });
    if (!hit) break;
    const Index j = hit->payload.j;
    binv = theta_apply(binv, hit->payload.v, j);
    norm = one_norm_entrywise(binv);
    cols[j] = comp[hit->index];
    comp = complement_indices(a.cols(), cols);
    ++stats.swaps;
    changed = true;
    l = hit->index + 1;
  }
  return changed;
}

}  // namespace

SearchResult fi_norm(const DenseMatrix& a, const BlockIndex& b, const SearchConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  check_block(a, b);
  SearchResult res;
  res.block = b;
  {
    const auto f = lu_factor(submatrix(a, b.S, b.T));
    res.stats.initial_log_det = det_from_lu(f).log_magnitude;
    res.stats.initial_norm = one_norm_entrywise(inverse(f));
  }
  const DenseMatrix at = a.transpose();
  bool cont = true;
  while (cont) {
    next_sweep(res.stats, cfg);
    const bool c1 = norm_phase(a, res.block.S, res.block.T, cfg, res.stats);
    const bool c2 = norm_phase(at, res.block.T, res.block.S, cfg, res.stats);
    cont = c1 || c2;
  }
  const auto f = lu_factor(submatrix(a, res.block.S, res.block.T));
  res.stats.final_log_det = det_from_lu(f).log_magnitude;
  res.stats.final_norm = one_norm_entrywise(inverse(f));
  res.stats.elapsed_ms = ms_since(t0);
  return res;
}

}  // namespace ginv
