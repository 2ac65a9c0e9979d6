#include "ginv/lp_export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <regex>

#include "ginv/error.hpp"

namespace ginv {

namespace {

constexpr double kTiny = 1e-300;

struct Term {
  Index var;
  double coef;
};

enum class Sense { eq, ge };

// Streams constraints and evaluates each at the reference point x. The
// residual of a row is |c.x - b| / (|c|_1 |x|_inf + |b|).
class Writer {
 public:
  Writer(std::ostream& out, Index n, Index m, const std::vector<double>& x) : out_(out), n_(n), m_(m), x_(x) {
    buf_.reserve(1 << 16);
    for (double v : x) xmax_ = std::max(xmax_, std::abs(v));
  }

  // Variables 0 .. nm-1 are h, nm .. 2nm-1 are t.
  void name(Index var) {
    const Index nm = n_ * m_;
    const bool t = var >= nm;
    const Index k = t ? var - nm : var;
    buf_ += t ? "t_" : "h_";
    number(k / m_);
    buf_ += '_';
    number(k % m_);
  }

  void objective() {
    buf_ += "Minimize\n obj:";
    const Index nm = n_ * m_;
    for (Index v = nm; v < 2 * nm; ++v) {
      buf_ += v == nm ? " " : " + ";
      name(v);
      wrap(v - nm);
    }
    buf_ += "\nSubject To\n";
    flush();
  }

  void row(const char* prefix, Index i, Index j, const std::vector<Term>& terms, Sense sense, double rhs) {
    buf_ += ' ';
    buf_ += prefix;
    buf_ += '_';
    number(i);
    buf_ += '_';
    number(j);
    buf_ += ':';
    double lhs = 0.0;
    double scale = std::abs(rhs);
    Index written = 0;
    for (const auto& t : terms) {
      if (t.coef == 0.0) continue;
      buf_ += t.coef < 0 ? " - " : " + ";
      real(std::abs(t.coef));
      buf_ += ' ';
      name(t.var);
      wrap(written++);
      lhs += t.coef * x_[t.var];
      scale += std::abs(t.coef) * xmax_;
    }
    if (written == 0) {
      buf_ += " 0 ";
      name(0);
    }
    buf_ += sense == Sense::eq ? " = " : " >= ";
    real(rhs);
    buf_ += '\n';
    const double gap = sense == Sense::eq ? std::abs(lhs - rhs) : std::max(0.0, rhs - lhs);
    residual_ = std::max(residual_, gap / std::max(scale, kTiny));
    if (buf_.size() > (1 << 15)) flush();
  }

  void bounds() {
    buf_ += "Bounds\n";
    for (Index v = 0; v < n_ * m_; ++v) {
      buf_ += ' ';
      name(v);
      buf_ += " free\n";
      if (buf_.size() > (1 << 15)) flush();
    }
    buf_ += "End\n";
    flush();
  }

  void flush() {
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
  }

  double residual() const noexcept { return residual_; }
  std::string& buffer() noexcept { return buf_; }

 private:
  void number(Index v) {
    char tmp[24];
    auto r = std::to_chars(tmp, tmp + sizeof tmp, v);
    buf_.append(tmp, r.ptr);
  }
  void real(double v) {
    char tmp[40];
    auto r = std::to_chars(tmp, tmp + sizeof tmp, v, std::chars_format::general, 17);
    buf_.append(tmp, r.ptr);
  }
  void wrap(Index count) {
    if (count % 8 == 7) buf_ += "\n   ";
  }

  std::ostream& out_;
  Index n_;
  Index m_;
  const std::vector<double>& x_;
  std::string buf_;
  double residual_ = 0.0;
  double xmax_ = 0.0;
};

}  // namespace

std::string to_string(LpProblem p) {
  switch (p) {
    case LpProblem::p1: return "p1";
    case LpProblem::p123: return "p123";
    case LpProblem::p1sym: return "p1sym";
  }
  return "?";
}

LpProblem parse_lp_problem(const std::string& s) {
  if (s == "p1") return LpProblem::p1;
  if (s == "p123") return LpProblem::p123;
  if (s == "p1sym") return LpProblem::p1sym;
  throw InvalidArgumentError("unknown LP problem '" + s + "' (expected p1, p123 or p1sym)");
}

LpModel lp_model_counts(Index m, Index n, LpProblem p) {
  LpModel c;
  c.problem = p;
  c.variables = 2 * n * m;
  c.p1_equalities = n * m;
  c.abs_inequalities = 2 * n * m;
  if (p == LpProblem::p123) {
    c.sym_equalities = m * (m - (m > 0)) / 2;
    c.refl_equalities = n * m;
  } else if (p == LpProblem::p1sym) {
    c.sym_equalities = n * (n - (n > 0)) / 2;
  }
  return c;
}

LpModel export_lp(const DenseMatrix& a, LpProblem p, std::ostream& out, const LpExportOptions& opt) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (!opt.force && m * n > opt.max_entries)
    throw SizeLimitError("lp export: " + std::to_string(m) + " x " + std::to_string(n) + " exceeds the limit of " +
                         std::to_string(opt.max_entries) + " entries (use the override to export anyway)");
  if (p == LpProblem::p1sym && (!a.is_square() || !is_symmetric(a, 1e-12)))
    throw InvalidArgumentError("lp export: p1sym requires a symmetric matrix");

  const DenseMatrix pinv = mp_pseudoinverse(a);  // n x m
  const Index nm = n * m;
  auto h = [m](Index k, Index l) { return k * m + l; };
  std::vector<double> x(2 * nm);
  for (Index k = 0; k < n; ++k)
    for (Index l = 0; l < m; ++l) {
      x[h(k, l)] = pinv(k, l);
      x[nm + h(k, l)] = std::abs(pinv(k, l));
    }

  Writer w(out, n, m, x);
  w.buffer() += "\\ " + to_string(p) + " for a " + std::to_string(m) + " x " + std::to_string(n) + " matrix\n";
  w.objective();

  std::vector<Term> terms;
  // (A H A)[i,j] = sum_{k,l} A[i,k] A[l,j] h[k,l]
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      terms.clear();
      for (Index k = 0; k < n; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (Index l = 0; l < m; ++l) terms.push_back({h(k, l), aik * a(l, j)});
      }
      w.row("p1", i, j, terms, Sense::eq, a(i, j));
    }

  if (p == LpProblem::p123) {
    // (AH)[i,j] - (AH)[j,i] = 0
    for (Index i = 0; i < m; ++i)
      for (Index j = i + 1; j < m; ++j) {
        terms.clear();
        for (Index k = 0; k < n; ++k) {
          terms.push_back({h(k, j), a(i, k)});
          terms.push_back({h(k, i), -a(j, k)});
        }
        w.row("p3", i, j, terms, Sense::eq, 0.0);
      }
    // (H A A^+)[k,l] - h[k,l] = 0
    // A A^+ - I is a projector: entries below the rounding level are zero.
    DenseMatrix g = multiply(a, pinv);
    const double noise = 64.0 * static_cast<double>(m) * std::numeric_limits<double>::epsilon();
    for (Index l = 0; l < m; ++l)
      for (Index q = 0; q < m; ++q) {
        double& v = g(q, l);
        v -= q == l ? 1.0 : 0.0;
        if (std::abs(v) <= noise) v = 0.0;
      }
    for (Index k = 0; k < n; ++k)
      for (Index l = 0; l < m; ++l) {
        terms.clear();
        for (Index q = 0; q < m; ++q) terms.push_back({h(k, q), g(q, l)});
        w.row("rf", k, l, terms, Sense::eq, 0.0);
      }
  } else if (p == LpProblem::p1sym) {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) w.row("sy", i, j, {{h(i, j), 1.0}, {h(j, i), -1.0}}, Sense::eq, 0.0);
  }

  for (Index k = 0; k < n; ++k)
    for (Index l = 0; l < m; ++l) {
      w.row("tp", k, l, {{nm + h(k, l), 1.0}, {h(k, l), -1.0}}, Sense::ge, 0.0);
      w.row("tn", k, l, {{nm + h(k, l), 1.0}, {h(k, l), 1.0}}, Sense::ge, 0.0);
    }
  w.bounds();
  if (!out) throw IoError("lp export: write failed");

  auto model = lp_model_counts(m, n, p);
  model.pinv_residual = w.residual();
  if (model.pinv_residual > opt.feasibility_tol)
    throw InconsistencyError("lp export: the pseudoinverse violates the written model (residual " +
                             std::to_string(model.pinv_residual) + ")");
  return model;
}

LpModel export_lp(const DenseMatrix& a, LpProblem p, const std::filesystem::path& path, const LpExportOptions& opt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("lp export: cannot open " + path.string());
  return export_lp(a, p, out, opt);
}

double read_objective(std::istream& in) {
  static const std::regex line_re(R"(^\s*#?\s*objective(\s+value)?\s*[:=]?\s*(\S+)\s*$)", std::regex::icase);
  std::string line;
  std::smatch match;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!std::regex_match(line, match, line_re)) continue;
    const std::string v = match[2];
    double value = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), value);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
      throw ParseError("solution file: malformed objective value '" + v + "'");
    return value;
  }
  throw MissingObjectiveError("solution file: no objective line");
}

double read_objective(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read solution file " + path.string());
  return read_objective(in);
}

}  // namespace ginv
