#include "ginv/search_sym.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "ginv/error.hpp"

namespace ginv {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kSingularRatio = 1e-12;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void next_sweep(SearchStats& s, const SearchConfig& cfg) {
  if (s.sweeps == cfg.max_sweeps) throw NonConvergenceError("search: sweep limit reached");
  ++s.sweeps;
}

DenseMatrix symmetric_inverse(const DenseMatrix& a, const IndexList& s) {
  DenseMatrix g = inverse(submatrix(a, s, s));
  for (Index j = 0; j < g.cols(); ++j)
    for (Index i = j + 1; i < g.rows(); ++i) g(i, j) = g(j, i) = 0.5 * (g(i, j) + g(j, i));
  return g;
}

IndexList swapped(IndexList s, Index l, Index j) {
  s[j] = l;
  return s;
}

std::optional<Index> choose_position(const std::vector<double>& ratio, double thr, bool plus) {
  std::optional<Index> best;
  for (Index j = 0; j < ratio.size(); ++j) {
    if (std::abs(ratio[j]) <= thr) continue;
    if (!plus) return j;
    if (!best || std::abs(ratio[j]) > std::abs(ratio[*best])) best = j;
  }
  return best;
}

}  // namespace

void check_principal_block(const DenseMatrix& a, const PrincipalBlock& b) {
  if (!a.is_square() || !is_symmetric(a, 1e-12)) throw InvalidArgumentError("symmetric search: A is not symmetric");
  check_block(a, BlockIndex{b.S, b.S});
}

// --- pricing ------------------------------------------------------------------

PrincipalPricer::PrincipalPricer(const DenseMatrix& a, const IndexList& s, const DenseMatrix& ginv)
    : a_(&a), s_(&s), g_(&ginv) {}

std::vector<double> PrincipalPricer::solve_z(Index l) const {
  const Index r = s_->size();
  std::vector<double> col(r);
  for (Index i = 0; i < r; ++i) col[i] = (*a_)((*s_)[i], l);
  return multiply(*g_, col);
}

//
// Replacing S_j by l changes column j of B = A[S] to a' (a = A[S,l] with
// a_j replaced by c = A[l,l]) and row j to a'^T. With u = a' - B e_j and
// w = u - u_j e_j this is B' = B + u e_j^T + e_j w^T, a rank-two update:
//   det B' = det B * det K,  K = I + [e_j, w]^T G [u, e_j],
//   B'^{-1} = G - G[u, e_j] K^{-1} [e_j, w]^T G.
// G u = z - e_j + (c - a_j) G e_j with z = G a, since G B e_j = e_j.
//
PrincipalPricer::Terms PrincipalPricer::terms(Index l, Index j, const std::vector<double>& z) const {
  const auto& a = *a_;
  const auto& s = *s_;
  const auto& g = *g_;
  const Index r = s.size();
  const double c = a(l, l);
  const double delta = c - a(s[j], l);
  const double uj = c - a(s[j], s[j]);
  const auto gj = g.col(j);
  Terms t;
  t.gu.resize(r);
  t.gw.resize(r);
  double wgu = 0.0;
  for (Index i = 0; i < r; ++i) {
    t.gu[i] = z[i] + delta * gj[i] - (i == j ? 1.0 : 0.0);
    t.gw[i] = t.gu[i] - uj * gj[i];
  }
  for (Index i = 0; i < r; ++i) {
    if (i == j) continue;
    wgu += (a(s[i], l) - a(s[i], s[j])) * t.gu[i];
  }
  t.k[0][0] = 1.0 + t.gu[j];
  t.k[0][1] = gj[j];
  t.k[1][0] = wgu;
  t.k[1][1] = 1.0 + t.gw[j];
  t.det = t.k[0][0] * t.k[1][1] - t.k[0][1] * t.k[1][0];
  return t;
}

std::vector<double> PrincipalPricer::det_ratios(Index l) const {
  const auto z = solve_z(l);
  std::vector<double> out(s_->size());
  for (Index j = 0; j < out.size(); ++j) out[j] = terms(l, j, z).det;
  return out;
}

double PrincipalPricer::swapped_inverse_norm(Index l, Index j) const {
  const auto z = solve_z(l);
  const auto t = terms(l, j, z);
  if (std::abs(t.det) <= kSingularRatio) return std::numeric_limits<double>::infinity();
  const auto& g = *g_;
  const Index r = s_->size();
  const auto gj = g.col(j);
  // P = [Gu, Ge_j] K^{-1};  Y = [Ge_j, Gw]
  std::vector<double> p0(r), p1(r);
  for (Index p = 0; p < r; ++p) {
    p0[p] = (t.gu[p] * t.k[1][1] - gj[p] * t.k[1][0]) / t.det;
    p1[p] = (gj[p] * t.k[0][0] - t.gu[p] * t.k[0][1]) / t.det;
  }
  double s = 0.0;
  for (Index q = 0; q < r; ++q) {
    const auto gq = g.col(q);
    const double y0 = gj[q];
    const double y1 = t.gw[q];
    for (Index p = 0; p < r; ++p) s += std::abs(gq[p] - p0[p] * y0 - p1[p] * y1);
  }
  return s;
}

DenseMatrix PrincipalPricer::swapped_inverse(Index l, Index j) const {
  const auto z = solve_z(l);
  const auto t = terms(l, j, z);
  if (std::abs(t.det) <= kSingularRatio) throw SingularMatrixError("swapped_inverse: candidate block is singular");
  const auto& g = *g_;
  const Index r = s_->size();
  const auto gj = g.col(j);
  DenseMatrix out(r, r);
  for (Index q = 0; q < r; ++q)
    for (Index p = 0; p < r; ++p) {
      const double p0 = (t.gu[p] * t.k[1][1] - gj[p] * t.k[1][0]) / t.det;
      const double p1 = (gj[p] * t.k[0][0] - t.gu[p] * t.k[0][1]) / t.det;
      out(p, q) = g(p, q) - p0 * gj[q] - p1 * t.gw[q];
    }
  return out;
}

std::vector<double> direct_det_ratios(const DenseMatrix& a, const IndexList& s, Index l) {
  const auto base = log_det(submatrix(a, s, s));
  std::vector<double> out(s.size());
  for (Index j = 0; j < s.size(); ++j) {
    const auto t = swapped(s, l, j);
    const auto d = log_det(submatrix(a, t, t));
    out[j] = d.sign == 0 ? 0.0 : d.sign * base.sign * std::exp(d.log_magnitude - base.log_magnitude);
  }
  return out;
}

double direct_swapped_inverse_norm(const DenseMatrix& a, const IndexList& s, Index l, Index j) {
  const auto t = swapped(s, l, j);
  const auto f = lu_factor(submatrix(a, t, t));
  if (f.singular) return std::numeric_limits<double>::infinity();
  return one_norm_entrywise(inverse(f));
}

DenseMatrix congruence_swap(const DenseMatrix& b, std::span<const double> gamma, Index j) {
  const Index n = b.rows();
  auto alpha = solve_lu(lu_factor(b), gamma);
  alpha[j] -= 1.0;
  DenseMatrix left = DenseMatrix::identity(n);   // I + e_j (alpha - e_j)^T
  DenseMatrix right = DenseMatrix::identity(n);  // I + (alpha - e_j) e_j^T
  for (Index k = 0; k < n; ++k) {
    left(j, k) += alpha[k];
    right(k, j) += alpha[k];
  }
  return multiply(multiply(left, b), right);
}

// --- searches -----------------------------------------------------------------

PrincipalSearchResult fi_det_sym(const DenseMatrix& a, const PrincipalBlock& b, const SearchConfig& cfg,
                                 SymVariant variant, SymPricing pricing) {
  validate(cfg);
  const auto t0 = Clock::now();
  check_principal_block(a, b);
  PrincipalSearchResult res{b, {}};
  IndexList& S = res.block.S;
  const double thr = acceptance_factor(cfg);

  DenseMatrix g = symmetric_inverse(a, S);
  res.stats.initial_log_det = log_det(submatrix(a, S, S)).log_magnitude;
  res.stats.initial_norm = one_norm_entrywise(g);

  auto ratios = [&](Index l) {
    return pricing == SymPricing::rank_two ? PrincipalPricer(a, S, g).det_ratios(l) : direct_det_ratios(a, S, l);
  };
  auto accept = [&](Index l, Index j) {
    S[j] = l;
    g = symmetric_inverse(a, S);
    ++res.stats.swaps;
  };

  bool cont = true;
  while (cont) {
    next_sweep(res.stats, cfg);
    cont = false;
    IndexList comp = complement_indices(a.rows(), S);
    if (variant == SymVariant::bi) {
      auto best = kernels::best_hit(
          cfg.exec, 0, comp.size(),
          [&](Index k) {
            const auto rt = ratios(comp[k]);
            std::pair<double, Index> m{0.0, 0};
            for (Index j = 0; j < rt.size(); ++j)
              if (std::abs(rt[j]) > m.first) m = {std::abs(rt[j]), j};
            return std::optional(m);
          },
          [](const std::pair<double, Index>& p) { return p.first; });
      if (best && best->payload.first > thr) {
        accept(comp[best->index], best->payload.second);
        cont = true;
      }
      continue;
    }
    const bool plus = variant == SymVariant::fi_plus;
    for (Index l = 0;;) {
      auto hit = kernels::first_hit(cfg.exec, l, comp.size(),
                                    [&](Index k) { return choose_position(ratios(comp[k]), thr, plus); });
      if (!hit) break;
      accept(comp[hit->index], hit->payload);
      comp = complement_indices(a.rows(), S);
      cont = true;
      l = hit->index + 1;
    }
  }
  res.stats.final_log_det = log_det(submatrix(a, S, S)).log_magnitude;
  res.stats.final_norm = one_norm_entrywise(g);
  res.stats.elapsed_ms = ms_since(t0);
  return res;
}

PrincipalSearchResult fi_norm_sym(const DenseMatrix& a, const PrincipalBlock& b, const SearchConfig& cfg,
                                  SymPricing pricing) {
  validate(cfg);
  const auto t0 = Clock::now();
  check_principal_block(a, b);
  PrincipalSearchResult res{b, {}};
  IndexList& S = res.block.S;
  const double thr = acceptance_factor(cfg);
  const Index r = S.size();

  DenseMatrix g = symmetric_inverse(a, S);
  double norm = one_norm_entrywise(g);
  res.stats.initial_log_det = log_det(submatrix(a, S, S)).log_magnitude;
  res.stats.initial_norm = norm;

  bool cont = true;
  while (cont) {
    next_sweep(res.stats, cfg);
    cont = false;
    IndexList comp = complement_indices(a.rows(), S);
    for (Index l = 0;;) {
      auto hit = kernels::first_hit(cfg.exec, l, comp.size(), [&](Index k) -> std::optional<Index> {
        const PrincipalPricer pricer(a, S, g);
        for (Index j = 0; j < r; ++j) {
          const double nn = pricing == SymPricing::rank_two ? pricer.swapped_inverse_norm(comp[k], j)
                                                            : direct_swapped_inverse_norm(a, S, comp[k], j);
          if (nn * thr < norm) return j;
        }
        return std::nullopt;
      });
      if (!hit) break;
      S[hit->payload] = comp[hit->index];
      g = symmetric_inverse(a, S);
      norm = one_norm_entrywise(g);
      ++res.stats.swaps;
      comp = complement_indices(a.rows(), S);
      cont = true;
      l = hit->index + 1;
    }
  }
  res.stats.final_log_det = log_det(submatrix(a, S, S)).log_magnitude;
  res.stats.final_norm = norm;
  res.stats.elapsed_ms = ms_since(t0);
  return res;
}

}  // namespace ginv
