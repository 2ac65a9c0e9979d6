#include <cmath>
#include <numeric>

#include "doctest.h"
#include "ginv/error.hpp"
#include "ginv/instance.hpp"
#include "test_support.hpp"

using namespace ginv;

namespace {

double fill_fraction(const DenseMatrix& a) {
  return static_cast<double>(count_nonzeros(a)) / static_cast<double>(a.size());
}

InstanceSpec make(Index m, Index n, Index r, double d, std::uint64_t seed, bool sym = false) {
  InstanceSpec s;
  s.m = m;
  s.n = n;
  s.r = r;
  s.density = d;
  s.seed = seed;
  s.symmetric = sym;
  return s;
}

}  // namespace

TEST_CASE("prescribed_spectrum examples") {
  auto s = prescribed_spectrum(1);
  CHECK(s.ratio == doctest::Approx(0.5));
  REQUIRE(s.values.size() == 1);
  CHECK(s.values[0] == doctest::Approx(1.0));

  s = prescribed_spectrum(3);
  CHECK(s.ratio == doctest::Approx(std::pow(2.0, -0.5)));
  CHECK(s.values[0] == doctest::Approx(1.414214).epsilon(1e-6));
  CHECK(s.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.values[2] == doctest::Approx(0.707107).epsilon(1e-6));

  // r = 2: 2 * 2^(-2/3) = 2^(1/3) and 2 * 2^(-4/3) = 2^(-1/3).
  s = prescribed_spectrum(2);
  CHECK(s.values[0] == doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
  CHECK(s.values[1] == doctest::Approx(1.0 / std::cbrt(2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(prescribed_spectrum(0), InvalidArgumentError);
  CHECK_THROWS_AS(prescribed_spectrum(2, 1.0), InvalidArgumentError);
}

TEST_CASE("property: spectrum invariants") {
  for (Index r = 1; r <= 200; ++r) {
    const auto s = prescribed_spectrum(r);
    double log_prod = 0.0;
    for (Index k = 0; k < r; ++k) {
      CHECK(s.values[k] >= 0.5);
      CHECK(s.values[k] < 2.0);
      if (k > 0) CHECK(s.values[k] < s.values[k - 1]);
      log_prod += std::log(s.values[k]);
    }
    CHECK(std::abs(log_prod) <= 1e-9);
  }
}

TEST_CASE("random_rank_r examples") {
  const auto spec = make(4, 4, 2, 1.0, 7);
  const auto a = random_rank_r(spec);
  const auto sv = singular_values(a);
  CHECK(sv[0] == doctest::Approx(std::cbrt(2.0)).epsilon(1e-8));
  CHECK(sv[1] == doctest::Approx(1.0 / std::cbrt(2.0)).epsilon(1e-8));
  CHECK(sv[2] < 1e-12);
  CHECK(sv[3] < 1e-12);
  CHECK(numeric_rank(a) == 2);
  CHECK(random_rank_r(spec) == a);

  const auto b = random_rank_r(make(2, 2, 2, 1.0, 99));
  CHECK(std::abs(testing::cofactor_det(b)) == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(random_rank_r(make(3, 2, 3, 1.0, 1)), InvalidArgumentError);
}

TEST_CASE("random_symmetric_rank_r examples") {
  const auto a = random_symmetric_rank_r(make(4, 4, 2, 1.0, 3, true));
  CHECK(a == a.transpose());
  CHECK(numeric_rank(a) == 2);
  const auto sv = singular_values(a);  // |eigenvalues| for symmetric input
  CHECK(sv[0] == doctest::Approx(std::cbrt(2.0)).epsilon(1e-8));
  CHECK(sv[1] == doctest::Approx(1.0 / std::cbrt(2.0)).epsilon(1e-8));

  const auto one = random_symmetric_rank_r(make(1, 1, 1, 1.0, 5, true));
  CHECK(std::abs(one(0, 0)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(random_symmetric_rank_r(make(3, 4, 2, 1.0, 1, true)), InvalidArgumentError);
  CHECK_THROWS_AS(random_symmetric_rank_r(make(3, 3, 2, 1.0, 1, false)), InvalidArgumentError);
}

TEST_CASE("property: generated instances") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    for (double d : {0.25, 0.5, 1.0}) {
      for (bool sym : {false, true}) {
        const Index n = 20 + 5 * (seed % 3);
        const Index m = sym ? n : n + 7;
        const Index r = 2 + seed % 6;
        const auto spec = make(m, n, r, d, seed, sym);
        const auto a = generate(spec);
        CHECK(all_finite(a));
        CHECK(numeric_rank(a) == r);
        CHECK(std::abs(fill_fraction(a) - d) <= 0.15);
        if (sym) CHECK(a == a.transpose());
        CHECK(generate(spec) == a);
        if (d == 1.0) {
          const auto sv = singular_values(a);
          const auto want = prescribed_spectrum(r).values;
          for (Index k = 0; k < r; ++k) CHECK(sv[k] == doctest::Approx(want[k]).epsilon(1e-8));
        }
      }
    }
  }
}

TEST_CASE("suite sizes") {
  const auto small = suite("small");
  CHECK(small.size() == 90);
  CHECK(suite("large").size() == 12);
  for (const auto& s : suite("large")) {
    CHECK(s.density == 1.0);
    CHECK(s.n == 1000);
  }
  const auto msym = suite("medium-sym");
  CHECK(msym.size() == 360);
  CHECK(std::all_of(msym.begin(), msym.end(), [](const InstanceSpec& s) { return s.symmetric; }));
  CHECK(suite("medium").size() == 360);
  CHECK(suite("small-sym").size() == 90);
  CHECK_THROWS_AS(suite("huge"), InvalidArgumentError);

  // 18 parameter combinations, 5 each, distinct seeds.
  std::vector<std::uint64_t> seeds;
  for (const auto& s : small) seeds.push_back(s.seed);
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::unique(seeds.begin(), seeds.end()) == seeds.end());
  CHECK(suite("small", {.seed_base = 42})[0].seed == suite("small", {.seed_base = 42})[0].seed);
  CHECK(suite("small", {.seed_base = 42})[0].seed != suite("small", {.seed_base = 43})[0].seed);
}

TEST_CASE("custom suite") {
  SuiteOptions o;
  o.sizes = {30};
  o.ranks = {3, 6};
  o.densities = {0.5};
  o.count = 4;
  const auto specs = suite("custom", o);
  CHECK(specs.size() == 8);
  CHECK(specs[0].m == 30);
  CHECK(specs[0].r == 3);
  CHECK(specs[4].r == 6);
  CHECK_THROWS_AS(suite("custom", {}), InvalidArgumentError);
}
