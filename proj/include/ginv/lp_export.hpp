#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ginv/dense.hpp"

namespace ginv {

enum class LpProblem { p1, p123, p1sym };

// "p1", "p123", "p1sym"
std::string to_string(LpProblem p);
LpProblem parse_lp_problem(const std::string& s);

struct LpModel {
  LpProblem problem = LpProblem::p1;
  Index variables = 0;         // 2 n m
  Index p1_equalities = 0;     // n m
  Index abs_inequalities = 0;  // 2 n m
  Index sym_equalities = 0;    // (AH)^T = AH: m(m-1)/2, or H = H^T: n(n-1)/2
  Index refl_equalities = 0;   // H A A^+ = H: n m
  // Largest residual of the written constraints at H = A^+, T = |A^+|,
  // each row scaled by |c|_1 |x|_inf + |b|.
  double pinv_residual = 0.0;

  Index equalities() const noexcept { return p1_equalities + sym_equalities + refl_equalities; }
  Index constraints() const noexcept { return equalities() + abs_inequalities; }
};

// Counts only; nothing is written.
LpModel lp_model_counts(Index m, Index n, LpProblem p);

struct LpExportOptions {
  Index max_entries = 40000;  // refuse m n above this
  bool force = false;         // ignore max_entries
  double feasibility_tol = 1e-8;
};

//
// CPLEX LP text: minimize sum t_i_j subject to the problem's constraints,
// with -t_i_j <= h_i_j <= t_i_j, h free, t >= 0. Variables are named
// h_i_j / t_i_j with 0-based i < n, j < m for the n x m matrix H.
// Coefficients carry 17 significant digits.
//
// Throws SizeLimitError past the size guard, InvalidArgumentError for
// p1sym on a non-symmetric A, InconsistencyError if A^+ is not feasible
// for the written model and IoError on write failure.
//
LpModel export_lp(const DenseMatrix& a, LpProblem p, std::ostream& out, const LpExportOptions& opt = {});
LpModel export_lp(const DenseMatrix& a, LpProblem p, const std::filesystem::path& path,
                  const LpExportOptions& opt = {});

inline LpModel export_p1(const DenseMatrix& a, std::ostream& out, const LpExportOptions& opt = {}) {
  return export_lp(a, LpProblem::p1, out, opt);
}
inline LpModel export_p123(const DenseMatrix& a, std::ostream& out, const LpExportOptions& opt = {}) {
  return export_lp(a, LpProblem::p123, out, opt);
}
inline LpModel export_p1sym(const DenseMatrix& a, std::ostream& out, const LpExportOptions& opt = {}) {
  return export_lp(a, LpProblem::p1sym, out, opt);
}

// Objective value from a solution file: the first line of the form
// `objective <v>`, `Objective value = <v>`, `# Objective value = <v>` or
// `Objective: <v>` (case-insensitive). Throws MissingObjectiveError when
// no such line exists, ParseError when the value is malformed, IoError
// when the file cannot be read.
double read_objective(std::istream& in);
double read_objective(const std::filesystem::path& path);

}  // namespace ginv
