#pragma once

//
// Data-parallel kernels. Each kernel has a serial reference implementation
// and an OpenMP one; both produce bitwise identical results because each
// work item is evaluated by the same code, only the schedule differs.
//

#include <algorithm>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <span>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ginv/dense.hpp"

namespace ginv::kernels {

enum class Exec { serial, parallel };

int max_threads() noexcept;

// A scored hit produced by a candidate evaluator.
template <typename Payload>
struct Hit {
  Index index = 0;
  Payload payload{};
};

struct Asymmetry {
  double asymmetry = 0.0;  // ||M - M^T||_F
  double norm = 0.0;       // ||M||_F
};

namespace serial {

// C = A * B
void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c);

// Remove the component along unit vector q from every column of `residuals`
// and refresh `norms` with the new column norms. Columns flagged in `skip`
// are left untouched.
void project_out(DenseMatrix& residuals, std::span<const double> q, std::span<double> norms,
                 std::span<const char> skip);

// For M = F G^T (F, G given transposed: ft = F^T, gt = G^T, both p x k),
// returns {||M - M^T||_F, ||M||_F} without forming M. Partial sums are kept
// per row and added in row order.
Asymmetry product_asymmetry(const DenseMatrix& ft, const DenseMatrix& gt);

// First index in [begin, end) whose evaluator returns a payload.
template <typename Eval>
auto first_hit(Index begin, Index end, Eval&& eval)
    -> std::optional<Hit<typename std::invoke_result_t<Eval, Index>::value_type>> {
  using Payload = typename std::invoke_result_t<Eval, Index>::value_type;
  for (Index i = begin; i < end; ++i) {
    if (auto p = eval(i)) return Hit<Payload>{i, std::move(*p)};
  }
  return std::nullopt;
}

// Index in [begin, end) whose payload has the largest `score(payload)`;
// ties go to the least index.
template <typename Eval, typename Score>
auto best_hit(Index begin, Index end, Eval&& eval, Score&& score)
    -> std::optional<Hit<typename std::invoke_result_t<Eval, Index>::value_type>> {
  using Payload = typename std::invoke_result_t<Eval, Index>::value_type;
  std::optional<Hit<Payload>> best;
  for (Index i = begin; i < end; ++i) {
    auto p = eval(i);
    if (!p) continue;
    if (!best || score(*p) > score(best->payload)) best = Hit<Payload>{i, std::move(*p)};
  }
  return best;
}

}  // namespace serial

namespace omp {

void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c);
void project_out(DenseMatrix& residuals, std::span<const double> q, std::span<double> norms,
                 std::span<const char> skip);
Asymmetry product_asymmetry(const DenseMatrix& ft, const DenseMatrix& gt);

// Evaluates candidates in blocks, in parallel, then scans the block in
// order. The returned hit is the same one the serial scan finds.
template <typename Eval>
auto first_hit(Index begin, Index end, Eval&& eval)
    -> std::optional<Hit<typename std::invoke_result_t<Eval, Index>::value_type>> {
  using Payload = typename std::invoke_result_t<Eval, Index>::value_type;
  const Index block = static_cast<Index>(std::max(1, 4 * max_threads()));
  std::vector<std::optional<Payload>> results;
  for (Index lo = begin; lo < end; lo += block) {
    const Index hi = std::min(end, lo + block);
    results.assign(hi - lo, std::nullopt);
    const auto count = static_cast<std::ptrdiff_t>(hi - lo);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      results[static_cast<Index>(k)] = eval(lo + static_cast<Index>(k));
    }
    for (Index k = 0; k < results.size(); ++k) {
      if (results[k]) return Hit<Payload>{lo + k, std::move(*results[k])};
    }
  }
  return std::nullopt;
}

template <typename Eval, typename Score>
auto best_hit(Index begin, Index end, Eval&& eval, Score&& score)
    -> std::optional<Hit<typename std::invoke_result_t<Eval, Index>::value_type>> {
  using Payload = typename std::invoke_result_t<Eval, Index>::value_type;
  std::vector<std::optional<Payload>> results(end > begin ? end - begin : 0);
  const auto count = static_cast<std::ptrdiff_t>(results.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    results[static_cast<Index>(k)] = eval(begin + static_cast<Index>(k));
  }
  std::optional<Hit<Payload>> best;
  for (Index k = 0; k < results.size(); ++k) {
    if (!results[k]) continue;
    if (!best || score(*results[k]) > score(best->payload)) best = Hit<Payload>{begin + k, std::move(*results[k])};
  }
  return best;
}

}  // namespace omp

// --- dispatch -------------------------------------------------------------

inline void gemm(Exec exec, const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c) {
  exec == Exec::parallel ? omp::gemm(a, b, c) : serial::gemm(a, b, c);
}

inline void project_out(Exec exec, DenseMatrix& residuals, std::span<const double> q, std::span<double> norms,
                        std::span<const char> skip) {
  exec == Exec::parallel ? omp::project_out(residuals, q, norms, skip)
                         : serial::project_out(residuals, q, norms, skip);
}

inline Asymmetry product_asymmetry(Exec exec, const DenseMatrix& ft, const DenseMatrix& gt) {
  return exec == Exec::parallel ? omp::product_asymmetry(ft, gt) : serial::product_asymmetry(ft, gt);
}

template <typename Eval>
auto first_hit(Exec exec, Index begin, Index end, Eval&& eval) {
  return exec == Exec::parallel ? omp::first_hit(begin, end, eval) : serial::first_hit(begin, end, eval);
}

template <typename Eval, typename Score>
auto best_hit(Exec exec, Index begin, Index end, Eval&& eval, Score&& score) {
  return exec == Exec::parallel ? omp::best_hit(begin, end, eval, score)
                                : serial::best_hit(begin, end, eval, score);
}

}  // namespace ginv::kernels
