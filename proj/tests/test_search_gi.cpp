#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "ginv/assemble.hpp"
#include "ginv/error.hpp"
#include "ginv/instance.hpp"
#include "ginv/search_gi.hpp"
#include "test_support.hpp"

using namespace ginv;
using namespace ginv::testing;

namespace {

IndexList sorted(IndexList v) {
  std::sort(v.begin(), v.end());
  return v;
}

SearchConfig with_exec(kernels::Exec e) {
  SearchConfig c;
  c.exec = e;
  return c;
}

}  // namespace

TEST_CASE("fi_det: rank-one 2x2 walks to the largest entry") {
  const auto a = DenseMatrix::from_rows({{1, 2}, {2, 4}});
  for (bool plus : {false, true}) {
    const auto res = fi_det(a, {{0}, {0}}, {}, plus);
    CHECK(res.block.S == IndexList{1});
    CHECK(res.block.T == IndexList{1});
    CHECK(res.stats.swaps == 2);
    CHECK(res.stats.final_norm == doctest::Approx(0.25));
    CHECK(res.stats.initial_norm == doctest::Approx(1.0));
    CHECK(res.stats.final_log_det == doctest::Approx(std::log(4.0)));
  }
}

TEST_CASE("fi_det: no candidates or zero ratios give no swaps") {
  const auto i2 = DenseMatrix::identity(2);
  CHECK(fi_det(i2, {{0, 1}, {0, 1}}).stats.swaps == 0);
  CHECK(bi_det(i2, {{0, 1}, {0, 1}}).stats.swaps == 0);
  CHECK(fi_norm(i2, {{0, 1}, {0, 1}}).stats.swaps == 0);

  const auto a = DenseMatrix::from_rows({{1, 0}, {0, 0}});
  const auto res = fi_det(a, {{0}, {0}});
  CHECK(res.stats.swaps == 0);
  CHECK(res.stats.sweeps == 1);
  CHECK(bi_det(a, {{0}, {0}}).stats.swaps == 0);
}

TEST_CASE("fi_det: singular start and sweep limit") {
  const auto a = DenseMatrix::from_rows({{0, 1}, {1, 1}});
  CHECK_THROWS_AS(fi_det(a, {{0}, {0}}), SingularMatrixError);
  CHECK_THROWS_AS(bi_det(a, {{0}, {0}}), SingularMatrixError);
  CHECK_THROWS_AS(fi_norm(a, {{0}, {0}}), SingularMatrixError);
  CHECK_THROWS_AS(fi_det(a, {{0}, {0, 1}}), InvalidArgumentError);
  CHECK_THROWS_AS(fi_det(a, {{0, 0}, {0, 1}}), InvalidArgumentError);
  CHECK_THROWS_AS(fi_det(a, {{2}, {0}}), InvalidArgumentError);

  SearchConfig cfg;
  cfg.max_sweeps = 1;
  const auto b = DenseMatrix::from_rows({{1, 2}, {2, 4}});
  CHECK_THROWS_AS(fi_det(b, {{0}, {0}}, cfg), NonConvergenceError);
  cfg.max_sweeps = 0;
  CHECK_THROWS_AS(fi_det(b, {{0}, {0}}, cfg), InvalidArgumentError);
  cfg = {};
  cfg.delta = -1;
  CHECK_THROWS_AS(bi_det(b, {{0}, {0}}, cfg), InvalidArgumentError);
}

TEST_CASE("bi_det: column branch wins a tie") {
  const auto a = DenseMatrix::from_rows({{1, 2}, {2, 4}});
  SearchState st(a, {{0}, {0}});
  REQUIRE(bi_det_step(st, {}));
  CHECK(st.block().S == IndexList{0});
  CHECK(st.block().T == IndexList{1});
  REQUIRE(bi_det_step(st, {}));
  CHECK(st.block().S == IndexList{1});
  CHECK_FALSE(bi_det_step(st, {}));

  const auto res = bi_det(a, {{0}, {0}});
  CHECK(res.stats.swaps == 2);
  CHECK(res.block.S == IndexList{1});
  CHECK(res.block.T == IndexList{1});
}

TEST_CASE("bi_det: takes the single best swap") {
  // Column ratios 2 and 4, row ratio 3.
  const auto a = DenseMatrix::from_rows({{1, 2, 4}, {3, 6, 12}});
  SearchState st(a, {{0}, {0}});
  REQUIRE(bi_det_step(st, {}));
  CHECK(st.block().T == IndexList{2});
  CHECK(st.block().S == IndexList{0});
}

TEST_CASE("fi_norm: reaches the minimal inverse norm") {
  const auto a = DenseMatrix::from_rows({{1, 0, 1}, {0, 1, 1}, {1, 1, 2}});
  // Oracle: every nonsingular 2x2 block, inverted by Gauss-Jordan.
  double best = 1e300;
  for_each_subset(3, 2, [&](const IndexList& s) {
    for_each_subset(3, 2, [&](const IndexList& t) {
      const auto b = pick(a, s, t);
      if (std::abs(cofactor_det(b)) > 0.5) best = std::min(best, naive_one_norm(gauss_jordan_inverse(b)));
    });
  });
  CHECK(best == doctest::Approx(2.0));

  const auto res = fi_norm(a, {{1, 2}, {1, 2}});
  CHECK(res.stats.initial_norm == doctest::Approx(5.0));
  CHECK(res.stats.final_norm == doctest::Approx(2.0));
  CHECK(sorted(res.block.S) == IndexList{0, 1});
  CHECK(sorted(res.block.T) == IndexList{0, 1});
  // Column T[0]: 5 -> 4, row S[1]: 4 -> 3, column T[1]: 3 -> 2.
  CHECK(res.stats.swaps == 3);

  const auto idle = fi_norm(a, {{0, 1}, {0, 1}});
  CHECK(idle.stats.swaps == 0);
  CHECK(idle.stats.final_norm == doctest::Approx(2.0));
}

TEST_CASE("swap_column / swap_row update the determinant") {
  {
    const auto a = DenseMatrix::from_rows({{1, 0, 3}, {0, 1, 4}});
    SearchState st(a, {{0, 1}, {0, 1}});
    CHECK(st.column_ratios(2) == std::vector<double>{3, 4});
    CHECK(st.swap_column(0, 0) == doctest::Approx(3.0));
    CHECK(st.log_det().log_magnitude == doctest::Approx(std::log(3.0)));
    CHECK(st.block().T == IndexList{2, 1});
    CHECK(st.col_complement() == IndexList{0});
  }
  {
    const auto a = DenseMatrix::from_rows({{1, 0, 0}, {0, 1, 1}});
    SearchState st(a, {{0, 1}, {0, 1}});
    CHECK_THROWS_AS(st.swap_column(0, 0), DegenerateSwapError);
    CHECK(st.block().T == IndexList{0, 1});
  }
  {
    const auto a = DenseMatrix::from_rows({{2, 0, 0}, {0, 1, 5}});
    SearchState st(a, {{0, 1}, {0, 1}});
    const auto alpha = st.column_ratios(2);
    CHECK(alpha[0] == doctest::Approx(0.0));
    CHECK(alpha[1] == doctest::Approx(5.0));
    st.swap_column(0, 1);
    CHECK(std::exp(st.log_det().log_magnitude) == doctest::Approx(10.0));
  }
  {
    const auto a = DenseMatrix::from_rows({{1, 0}, {0, 1}, {3, 4}});
    SearchState st(a, {{0, 1}, {0, 1}});
    CHECK(st.swap_row(0, 1) == doctest::Approx(4.0));
    CHECK(st.block().S == IndexList{0, 2});
    CHECK(st.row_complement() == IndexList{1});
  }
}

TEST_CASE("inverse_swap_update examples") {
  const auto i2 = DenseMatrix::identity(2);
  const std::vector<double> g1{2, 1};
  const auto r1 = inverse_swap_update(i2, g1, 0);
  CHECK(rel_diff(r1, DenseMatrix::from_rows({{0.5, 0}, {-0.5, 1}})) < 1e-15);

  const std::vector<double> e1{1, 0};
  CHECK(rel_diff(inverse_swap_update(i2, e1, 0), i2) == 0.0);

  const auto d = DenseMatrix::diagonal(std::vector<double>{0.5, 0.25});
  const std::vector<double> g3{0, 8};
  CHECK(rel_diff(inverse_swap_update(d, g3, 1), DenseMatrix::diagonal(std::vector<double>{0.5, 0.125})) < 1e-15);

  const std::vector<double> e2{0, 1};
  CHECK_THROWS_AS(inverse_swap_update(i2, e2, 0), ZeroPivotError);
  CHECK_THROWS_AS(inverse_swap_update(i2, e2, 2), DimensionMismatchError);
}

TEST_CASE("Cramer ratio times det(B) equals the swapped determinant") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 6);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index r = dim(rng);
    const auto b = random_conditioned(rng, r, 1e4);
    const auto g = random_matrix(rng, r, 1);
    const auto h = random_matrix(rng, 1, r);
    const Index j = std::uniform_int_distribution<Index>(0, r - 1)(rng);
    // A = [[B, g], [h, 0]] so both column and row candidates exist.
    DenseMatrix a(r + 1, r + 1);
    for (Index p = 0; p < r; ++p) {
      for (Index q = 0; q < r; ++q) a(p, q) = b(p, q);
      a(p, r) = g(p, 0);
      a(r, p) = h(0, p);
    }
    const auto iota = iota_indices(r);
    SearchState st(a, {iota, iota});
    const double det_b = cofactor_det(b);

    auto bc = b;
    for (Index p = 0; p < r; ++p) bc(p, j) = g(p, 0);
    const double want_c = cofactor_det(bc);
    const double got_c = st.column_ratios(r)[j] * det_b;
    if (std::abs(got_c - want_c) > 1e-9 * std::max(std::abs(want_c), std::abs(det_b))) ++bad;

    auto br = b;
    for (Index q = 0; q < r; ++q) br(j, q) = h(0, q);
    const double want_r = cofactor_det(br);
    const double got_r = st.row_ratios(r)[j] * det_b;
    if (std::abs(got_r - want_r) > 1e-9 * std::max(std::abs(want_r), std::abs(det_b))) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("Theta update equals direct inversion of the swapped matrix") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> dim(1, 8);
  int done = 0;
  double worst = 0.0;
  while (done < 1000) {
    const Index r = dim(rng);
    const auto b = random_conditioned(rng, r, 1e4);
    const auto g = random_matrix(rng, r, 1);
    const Index j = std::uniform_int_distribution<Index>(0, r - 1)(rng);
    auto bs = b;
    for (Index p = 0; p < r; ++p) bs(p, j) = g(p, 0);
    const auto sv = singular_values(bs);
    if (sv.back() <= 0.0 || sv.front() / sv.back() > 1e6) continue;
    const auto binv = gauss_jordan_inverse(b);
    const auto got = inverse_swap_update(binv, g.col(0), j);
    worst = std::max(worst, rel_diff(got, gauss_jordan_inverse(bs)));
    ++done;
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("theta_apply_norm matches the norm of theta_apply") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Index r = 1 + trial % 7;
    const auto m = random_matrix(rng, r, 3 + trial % 4);
    const auto vm = random_matrix(rng, r, 1);
    const Index j = trial % r;
    std::vector<double> vv(vm.col(0).begin(), vm.col(0).end());
    CHECK(theta_apply_norm(m, vv, j) == doctest::Approx(naive_one_norm(theta_apply(m, vv, j))).epsilon(1e-12));
  }
}

TEST_CASE("searches on random instances: monotone, terminating, locally maximal") {
  SuiteOptions opt;
  opt.sizes = {6, 9, 12};
  opt.rank_fractions = {0.25, 0.5};
  opt.densities = {0.5, 1.0};
  opt.count = 2;
  opt.seed_base = 21;
  const SearchConfig cfg;
  for (const auto& spec : suite("custom", opt)) {
    CAPTURE(spec.id);
    const auto a = generate(spec);
    const auto b0 = greedy_light(a, spec.r);
    for (int kind = 0; kind < 3; ++kind) {
      const auto res = kind == 2 ? bi_det(a, b0, cfg) : fi_det(a, b0, cfg, kind == 1);
      CHECK(res.stats.final_log_det >= res.stats.initial_log_det);
      CHECK(res.stats.sweeps < cfg.max_sweeps);
      CHECK(is_local_max_det(a, res.block, cfg.delta));
      CHECK(log_det(submatrix(a, res.block.S, res.block.T)).log_magnitude ==
            doctest::Approx(res.stats.final_log_det));
    }
    const auto nres = fi_norm(a, b0, cfg);
    CHECK(nres.stats.final_norm <= nres.stats.initial_norm);
    CHECK(nres.stats.sweeps < cfg.max_sweeps);
    CHECK(nres.stats.final_norm == doctest::Approx(one_norm_entrywise(inverse(submatrix(a, nres.block.S, nres.block.T)))));
  }
}

TEST_CASE("det searches strictly improve at every swap") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_low_rank(rng, 8, 7, 3);
    SearchState st(a, greedy(a, 3));
    double prev = st.log_det().log_magnitude;
    SearchConfig cfg;
    while (bi_det_step(st, cfg)) {
      const double now = st.log_det().log_magnitude;
      CHECK(now > prev + std::log1p(cfg.delta));
      prev = now;
    }
  }
}

TEST_CASE("serial and parallel searches agree") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_low_rank(rng, 15, 12, 4);
    const auto b0 = greedy(a, 4);
    const auto s = with_exec(kernels::Exec::serial);
    const auto p = with_exec(kernels::Exec::parallel);
    CHECK(fi_det(a, b0, s).block == fi_det(a, b0, p).block);
    CHECK(fi_det(a, b0, s, true).block == fi_det(a, b0, p, true).block);
    CHECK(bi_det(a, b0, s).block == bi_det(a, b0, p).block);
    CHECK(fi_norm(a, b0, s).block == fi_norm(a, b0, p).block);
  }
}
