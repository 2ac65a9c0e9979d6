#include "ginv/instance.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "ginv/error.hpp"

namespace ginv {

namespace {

Index pick(std::mt19937_64& rng, Index n) { return static_cast<Index>(uniform01(rng) * static_cast<double>(n)); }

// Two distinct indices in [0, n).
std::pair<Index, Index> pick_plane(std::mt19937_64& rng, Index n) {
  const Index i = pick(rng, n);
  Index j = pick(rng, n - 1);
  if (j >= i) ++j;
  return {i, j};
}

Index count_row(const DenseMatrix& a, Index i) {
  Index c = 0;
  for (Index k = 0; k < a.cols(); ++k) c += a(i, k) != 0.0;
  return c;
}

Index count_col(const DenseMatrix& a, Index j) {
  Index c = 0;
  for (double v : a.col(j)) c += v != 0.0;
  return c;
}

void rotate_rows(DenseMatrix& a, Index i, Index j, double c, double s) {
  for (Index k = 0; k < a.cols(); ++k) {
    const double x = a(i, k);
    const double y = a(j, k);
    a(i, k) = c * x - s * y;
    a(j, k) = s * x + c * y;
  }
}

void rotate_cols(DenseMatrix& a, Index i, Index j, double c, double s) {
  auto ci = a.col(i);
  auto cj = a.col(j);
  for (Index k = 0; k < a.rows(); ++k) {
    const double x = ci[k];
    const double y = cj[k];
    ci[k] = c * x - s * y;
    cj[k] = s * x + c * y;
  }
}

// Nonzeros in the union of rows {i, j} and columns {i, j} of a square matrix.
Index count_cross(const DenseMatrix& a, Index i, Index j) {
  Index c = count_row(a, i) + count_row(a, j) + count_col(a, i) + count_col(a, j);
  for (Index r : {i, j})
    for (Index k : {i, j}) c -= a(r, k) != 0.0;
  return c;
}

Index target_nonzeros(const InstanceSpec& spec) {
  return static_cast<Index>(std::ceil(spec.density * static_cast<double>(spec.m * spec.n) - 1e-9));
}

// Generous cap; fill is normally reached after O((m + n) log(mn)) rotations.
Index rotation_cap(const InstanceSpec& spec) { return 400 * (spec.m + spec.n) * (8 + static_cast<Index>(std::log2(spec.m * spec.n + 1.0))); }

std::string format_id(const std::string& category, Index m, Index n, Index r, double d, Index k) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s_m%zu_n%zu_r%zu_d%.2f_%02zu", category.c_str(), m, n, r, d, k + 1);
  return buf;
}

}  // namespace

SpectrumSpec prescribed_spectrum(Index rank, double scale) {
  if (rank < 1) throw InvalidArgumentError("prescribed_spectrum: rank must be >= 1");
  if (!(scale > 1.0)) throw InvalidArgumentError("prescribed_spectrum: scale must be > 1");
  SpectrumSpec s;
  s.rank = rank;
  s.scale = scale;
  s.ratio = std::pow(1.0 / scale, 2.0 / static_cast<double>(rank + 1));
  s.values.resize(rank);
  for (Index k = 0; k < rank; ++k) s.values[k] = scale * std::pow(s.ratio, static_cast<double>(k + 1));
  return s;
}

void validate(const InstanceSpec& spec) {
  if (spec.m < 1 || spec.n < 1) throw InvalidArgumentError("instance: dimensions must be positive");
  if (spec.r < 1 || spec.r > std::min(spec.m, spec.n)) throw InvalidArgumentError("instance: need 1 <= r <= min(m, n)");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) throw InvalidArgumentError("instance: density must be in (0, 1]");
  if (spec.symmetric && spec.m != spec.n) throw InvalidArgumentError("instance: symmetric instances need m = n");
}

DenseMatrix random_rank_r(const InstanceSpec& spec) {
  validate(spec);
  if (spec.symmetric) throw InvalidArgumentError("random_rank_r: spec is symmetric");
  const auto spectrum = prescribed_spectrum(spec.r);
  DenseMatrix a(spec.m, spec.n);
  for (Index k = 0; k < spec.r; ++k) a(k, k) = spectrum.values[k];

  std::mt19937_64 rng(spec.seed);
  Index nnz = spec.r;
  const Index target = target_nonzeros(spec);
  const Index cap = rotation_cap(spec);
  for (Index step = 0; nnz < target; ++step) {
    if (step == cap) throw Error("random_rank_r: density target not reached");
    const bool left = spec.n == 1 || (spec.m > 1 && uniform01(rng) < 0.5);
    const double theta = 2.0 * std::numbers::pi * uniform01(rng);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    if (left) {
      auto [i, j] = pick_plane(rng, spec.m);
      const Index before = count_row(a, i) + count_row(a, j);
      rotate_rows(a, i, j, c, s);
      nnz = nnz - before + count_row(a, i) + count_row(a, j);
    } else {
      auto [i, j] = pick_plane(rng, spec.n);
      const Index before = count_col(a, i) + count_col(a, j);
      rotate_cols(a, i, j, c, s);
      nnz = nnz - before + count_col(a, i) + count_col(a, j);
    }
  }
  return a;
}

DenseMatrix random_symmetric_rank_r(const InstanceSpec& spec) {
  validate(spec);
  if (!spec.symmetric) throw InvalidArgumentError("random_symmetric_rank_r: spec is not symmetric");
  const auto spectrum = prescribed_spectrum(spec.r);
  std::mt19937_64 rng(spec.seed);
  const Index n = spec.n;
  DenseMatrix a(n, n);
  for (Index k = 0; k < spec.r; ++k) a(k, k) = (rng() >> 63) ? -spectrum.values[k] : spectrum.values[k];

  Index nnz = spec.r;
  const Index target = target_nonzeros(spec);
  const Index cap = rotation_cap(spec);
  for (Index step = 0; nnz < target; ++step) {
    if (step == cap) throw Error("random_symmetric_rank_r: density target not reached");
    const double theta = 2.0 * std::numbers::pi * uniform01(rng);
    auto [i, j] = pick_plane(rng, n);
    const Index before = count_cross(a, i, j);
    rotate_rows(a, i, j, std::cos(theta), std::sin(theta));
    rotate_cols(a, i, j, std::cos(theta), std::sin(theta));
    nnz = nnz - before + count_cross(a, i, j);
  }
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) a(i, j) = a(j, i);
  return a;
}

DenseMatrix generate(const InstanceSpec& spec) {
  return spec.symmetric ? random_symmetric_rank_r(spec) : random_rank_r(spec);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<InstanceSpec> suite(const std::string& category, const SuiteOptions& options) {
  struct Grid {
    std::vector<Index> rows;
    std::vector<Index> cols;
    std::vector<double> rank_fractions;
    std::vector<Index> ranks;
    std::vector<double> densities;
    Index count;
    bool symmetric;
  };
  Grid g;
  if (category == "small" || category == "small-sym") {
    g = {{50, 80, 100}, {}, {0.1, 0.5}, {}, {0.25, 0.5, 1.0}, 5, category == "small-sym"};
  } else if (category == "medium" || category == "medium-sym") {
    g = {{1000, 2000}, {}, {0.05, 0.1}, {}, {0.25, 0.5, 1.0}, 30, category == "medium-sym"};
  } else if (category == "large") {
    g = {{5000, 10000}, {1000}, {}, {50, 100}, {1.0}, 3, false};
  } else if (category == "custom") {
    if (options.sizes.empty() || options.densities.empty() || (options.rank_fractions.empty() && options.ranks.empty()))
      throw InvalidArgumentError("suite custom: sizes, densities and ranks (or rank fractions) are required");
    g = {options.rows.empty() ? options.sizes : options.rows,
         options.rows.empty() ? std::vector<Index>{} : options.sizes,
         options.rank_fractions,
         options.ranks,
         options.densities,
         options.count,
         options.symmetric};
  } else {
    throw InvalidArgumentError("suite: unknown category '" + category + "'");
  }

  std::vector<InstanceSpec> out;
  for (double d : g.densities) {
    for (Index m : g.rows) {
      const std::vector<Index> ns = g.cols.empty() ? std::vector<Index>{m} : g.cols;
      for (Index n : ns) {
        std::vector<Index> ranks = g.ranks;
        for (double f : g.rank_fractions) ranks.push_back(static_cast<Index>(std::llround(f * static_cast<double>(n))));
        for (Index r : ranks) {
          for (Index k = 0; k < g.count; ++k) {
            InstanceSpec s;
            s.category = category;
            s.m = m;
            s.n = n;
            s.r = r;
            s.density = d;
            s.symmetric = g.symmetric;
            s.id = format_id(category, m, n, r, d, k);
            s.seed = derive_seed(options.seed_base, out.size());
            validate(s);
            out.push_back(std::move(s));
          }
        }
      }
    }
  }
  return out;
}

}  // namespace ginv
