#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ginv/dense.hpp"

namespace ginv {

// Singular values (or eigenvalue magnitudes) scale * (rho^1, ..., rho^r) with
// rho = (1/scale)^(2/(r+1)); their product is one.
struct SpectrumSpec {
  Index rank = 0;
  double scale = 2.0;
  double ratio = 0.0;
  std::vector<double> values;
};

SpectrumSpec prescribed_spectrum(Index rank, double scale = 2.0);

struct InstanceSpec {
  std::string id;
  std::string category = "custom";
  Index m = 0;
  Index n = 0;
  Index r = 0;
  double density = 1.0;
  bool symmetric = false;
  std::uint64_t seed = 0;
};

void validate(const InstanceSpec& spec);

//
// Random rank-r test matrices. Starting from the diagonal of prescribed
// singular values, random plane rotations are applied (to rows or columns
// for the general case, two-sided for the symmetric one) until the fraction
// of nonzero entries reaches the requested density. Rotations are orthogonal,
// so rank and spectrum are preserved.
//
// The random stream is std::mt19937_64 seeded with spec.seed; doubles are
// taken as the top 53 bits of each draw, so output is identical on every
// platform.
//
DenseMatrix random_rank_r(const InstanceSpec& spec);
DenseMatrix random_symmetric_rank_r(const InstanceSpec& spec);
DenseMatrix generate(const InstanceSpec& spec);

struct SuiteOptions {
  std::uint64_t seed_base = 0;
  // custom category only
  std::vector<Index> sizes;         // m = n for each size unless `rows` is set
  std::vector<Index> rows;          // optional explicit m values
  std::vector<double> rank_fractions;
  std::vector<Index> ranks;         // explicit ranks instead of fractions
  std::vector<double> densities;
  Index count = 1;
  bool symmetric = false;
};

// Categories: small, medium, large, small-sym, medium-sym, custom.
std::vector<InstanceSpec> suite(const std::string& category, const SuiteOptions& options = {});

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace ginv
