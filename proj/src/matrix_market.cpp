#include "ginv/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ginv/error.hpp"

namespace ginv {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string spec_comment(const InstanceSpec& spec) {
  std::ostringstream os;
  os << "%ginv id=" << (spec.id.empty() ? "-" : spec.id) << " category=" << spec.category << " m=" << spec.m
     << " n=" << spec.n << " r=" << spec.r << " d=" << fmt17(spec.density) << " seed=" << spec.seed
     << " symmetric=" << (spec.symmetric ? 1 : 0);
  return os.str();
}

std::optional<InstanceSpec> parse_spec_comment(const std::string& line) {
  if (line.rfind("%ginv", 0) != 0) return std::nullopt;
  std::istringstream is(line.substr(5));
  std::map<std::string, std::string> kv;
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  InstanceSpec s;
  try {
    if (kv.count("id") && kv["id"] != "-") s.id = kv["id"];
    if (kv.count("category")) s.category = kv["category"];
    if (kv.count("m")) s.m = std::stoull(kv["m"]);
    if (kv.count("n")) s.n = std::stoull(kv["n"]);
    if (kv.count("r")) s.r = std::stoull(kv["r"]);
    if (kv.count("d")) s.density = std::stod(kv["d"]);
    if (kv.count("seed")) s.seed = std::stoull(kv["seed"]);
    if (kv.count("symmetric")) s.symmetric = kv["symmetric"] == "1";
  } catch (const std::exception&) {
    throw ParseError("matrix market: malformed %ginv comment: " + line);
  }
  return s;
}

void write_matrix_market(std::ostream& out, const DenseMatrix& a, MatrixMarketFormat format,
                         const InstanceSpec* spec) {
  if (format == MatrixMarketFormat::array) {
    out << "%%MatrixMarket matrix array real general\n";
    if (spec) out << spec_comment(*spec) << '\n';
    out << a.rows() << ' ' << a.cols() << '\n';
    for (double v : a.data()) out << fmt17(v) << '\n';
  } else {
    out << "%%MatrixMarket matrix coordinate real general\n";
    if (spec) out << spec_comment(*spec) << '\n';
    out << a.rows() << ' ' << a.cols() << ' ' << count_nonzeros(a) << '\n';
    for (Index j = 0; j < a.cols(); ++j)
      for (Index i = 0; i < a.rows(); ++i)
        if (a(i, j) != 0.0) out << i + 1 << ' ' << j + 1 << ' ' << fmt17(a(i, j)) << '\n';
  }
}

void write_matrix_market(const std::string& path, const DenseMatrix& a, MatrixMarketFormat format,
                         const InstanceSpec* spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_matrix_market(out, a, format, spec);
  if (!out) throw IoError("write failed for '" + path + "'");
}

MatrixFile read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("matrix market: empty input");
  std::istringstream hs(line);
  std::string banner, object, layout, field, symmetry;
  hs >> banner >> object >> layout >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") throw ParseError("matrix market: bad banner");
  layout = lower(layout);
  field = lower(field);
  symmetry = lower(symmetry);
  if (layout != "array" && layout != "coordinate") throw ParseError("matrix market: unsupported layout " + layout);
  if (field != "real" && field != "integer" && field != "double") throw ParseError("matrix market: unsupported field " + field);
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
    throw ParseError("matrix market: unsupported symmetry " + symmetry);

  MatrixFile file;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '%') {
      if (auto s = parse_spec_comment(line)) file.spec = s;
      continue;
    }
    break;
  }
  std::istringstream ss(line);
  Index rows = 0, cols = 0, entries = 0;
  if (!(ss >> rows >> cols)) throw ParseError("matrix market: bad size line");
  if (layout == "coordinate" && !(ss >> entries)) throw ParseError("matrix market: missing entry count");
  if (rows == 0 || cols == 0) throw ParseError("matrix market: empty matrix");

  DenseMatrix a(rows, cols);
  const bool sym = symmetry != "general";
  const double mirror = symmetry == "skew-symmetric" ? -1.0 : 1.0;
  if (layout == "array") {
    for (Index j = 0; j < cols; ++j) {
      for (Index i = sym ? j : 0; i < rows; ++i) {
        double v;
        if (!(in >> v)) throw ParseError("matrix market: truncated array data");
        a(i, j) = v;
        if (sym && i != j) a(j, i) = mirror * v;
      }
    }
  } else {
    for (Index k = 0; k < entries; ++k) {
      Index i, j;
      double v;
      if (!(in >> i >> j >> v)) throw ParseError("matrix market: truncated coordinate data");
      if (i < 1 || j < 1 || i > rows || j > cols) throw ParseError("matrix market: index out of range");
      a(i - 1, j - 1) = v;
      if (sym && i != j) a(j - 1, i - 1) = mirror * v;
    }
  }
  if (!all_finite(a)) throw ParseError("matrix market: non-finite entry");
  file.matrix = std::move(a);
  return file;
}

MatrixFile read_matrix_market(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_matrix_market(in);
}

}  // namespace ginv
