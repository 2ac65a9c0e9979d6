#include "ginv/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include "ginv/error.hpp"
#include "ginv/matrix_market.hpp"
#include "ginv/search_ah.hpp"
#include "ginv/search_sym.hpp"
#include "json.hpp"

namespace ginv {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <typename T>
std::string fmt_int(T v) {
  return std::to_string(v);
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (s == "inf") return INFINITY;
  if (s == "nan") return NAN;
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) throw ParseError(std::string("csv: malformed ") + what + " '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& s, const char* what) {
  std::uint64_t v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) throw ParseError(std::string("csv: malformed ") + what + " '" + s + "'");
  return v;
}

struct Phase {
  double norm_init = 0.0;
  double norm_final = 0.0;
  Index swaps = 0;
};

template <typename Result>
void absorb(Phase& p, const Result& res, bool first) {
  if (first) p.norm_init = res.stats.initial_norm;
  p.norm_final = res.stats.final_norm;
  p.swaps += res.stats.swaps;
}

// Each pipeline runs the search and assembles H, filling the timings.
SparseBlockInverse run_gi(const DenseMatrix& a, const BlockIndex& b0, SearchMethod s, const RunOptions& opt,
                          Phase& ph, ExperimentRecord& rec) {
  const auto& cfg = opt.search;
  BlockIndex b = b0;
  auto t0 = Clock::now();
  switch (s) {
    case SearchMethod::fi_det:
    case SearchMethod::fi_plus_det: {
      auto res = fi_det(a, b, cfg, s == SearchMethod::fi_plus_det);
      absorb(ph, res, true);
      b = res.block;
      break;
    }
    case SearchMethod::bi_det: {
      auto res = bi_det(a, b, cfg);
      absorb(ph, res, true);
      b = res.block;
      break;
    }
    case SearchMethod::fi_norm: {
      auto res = fi_norm(a, b, cfg);
      absorb(ph, res, true);
      b = res.block;
      break;
    }
    case SearchMethod::det_then_norm: {
      auto det = fi_det(a, b, cfg, opt.det_phase_plus);
      absorb(ph, det, true);
      auto norm = fi_norm(a, det.block, cfg);
      absorb(ph, norm, false);
      b = norm.block;
      break;
    }
    case SearchMethod::none: break;
  }
  rec.search_ms = ms_since(t0);
  t0 = Clock::now();
  auto h = assemble_gi(a, b);
  rec.assemble_ms = ms_since(t0);
  if (s == SearchMethod::none) ph.norm_init = ph.norm_final = h.one_norm();
  return h;
}

SparseBlockInverse run_ah(const DenseMatrix& a, const BlockIndex& b0, SearchMethod s, const RunOptions& opt,
                          Phase& ph, ExperimentRecord& rec) {
  const auto& cfg = opt.search;
  ColumnBlock b = column_block(b0);
  auto t0 = Clock::now();
  switch (s) {
    case SearchMethod::fi_det:
    case SearchMethod::fi_plus_det: {
      auto res = fi_det_ah(a, b0, cfg, s == SearchMethod::fi_plus_det);
      absorb(ph, res, true);
      b = res.block;
      break;
    }
    case SearchMethod::bi_det: {
      auto res = bi_det_ah(a, b0, cfg);
      absorb(ph, res, true);
      b = res.block;
      break;
    }
    case SearchMethod::fi_norm: {
      auto res = fi_norm_ah(a, b, cfg);
      absorb(ph, res, true);
      b = res.block;
      break;
    }
    case SearchMethod::det_then_norm: {
      auto det = fi_det_ah(a, b0, cfg, opt.det_phase_plus);
      absorb(ph, det, true);
      auto norm = fi_norm_ah(a, det.block, cfg);
      absorb(ph, norm, false);
      b = norm.block;
      break;
    }
    case SearchMethod::none: check_column_block(a, b); break;
  }
  rec.search_ms = ms_since(t0);
  t0 = Clock::now();
  auto h = assemble_ah(a, b);
  rec.assemble_ms = ms_since(t0);
  if (s == SearchMethod::none) ph.norm_init = ph.norm_final = h.one_norm();
  return h;
}

SparseBlockInverse run_sym(const DenseMatrix& a, const BlockIndex& b0, SearchMethod s, const RunOptions& opt,
                           Phase& ph, ExperimentRecord& rec) {
  const auto& cfg = opt.search;
  PrincipalBlock b{b0.S};
  auto t0 = Clock::now();
  switch (s) {
    case SearchMethod::fi_det:
    case SearchMethod::fi_plus_det:
    case SearchMethod::bi_det: {
      const SymVariant v = s == SearchMethod::fi_det        ? SymVariant::fi
                           : s == SearchMethod::fi_plus_det ? SymVariant::fi_plus
                                                            : SymVariant::bi;
      auto res = fi_det_sym(a, b, cfg, v);
      absorb(ph, res, true);
      b = res.block;
      break;
    }
    case SearchMethod::fi_norm: {
      auto res = fi_norm_sym(a, b, cfg);
      absorb(ph, res, true);
      b = res.block;
      break;
    }
    case SearchMethod::det_then_norm: {
      auto det = fi_det_sym(a, b, cfg, opt.det_phase_plus ? SymVariant::fi_plus : SymVariant::fi);
      absorb(ph, det, true);
      auto norm = fi_norm_sym(a, det.block, cfg);
      absorb(ph, norm, false);
      b = norm.block;
      break;
    }
    case SearchMethod::none: check_principal_block(a, b); break;
  }
  rec.search_ms = ms_since(t0);
  t0 = Clock::now();
  auto h = assemble_sym(a, b);
  rec.assemble_ms = ms_since(t0);
  if (s == SearchMethod::none) ph.norm_init = ph.norm_final = h.one_norm();
  return h;
}

void clear_numbers(ExperimentRecord& rec) {
  rec.norm_init = rec.norm_final = rec.improvement = 0.0;
  rec.swaps = 0;
  rec.init_ms = rec.search_ms = rec.assemble_ms = rec.verify_ms = 0.0;
  rec.residual = {};
  rec.rank_ok = false;
  rec.bound_ratio.reset();
}

ExperimentRecord error_record(const InstanceInfo& info, const MethodSpec& method, const std::string& what) {
  ExperimentRecord rec;
  rec.instance_id = info.id;
  rec.m = info.m;
  rec.n = info.n;
  rec.r = info.r;
  rec.d = info.d;
  rec.seed = info.seed;
  rec.variant = to_string(method.variant);
  rec.init = to_string(method.init);
  rec.search = to_string(method.search);
  rec.error = what.empty() ? "error" : what;
  return rec;
}

std::string opt_field(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

std::string to_string(InitMethod m) { return m == InitMethod::greedy ? "greedy" : "greedy-light"; }

InitMethod parse_init_method(const std::string& s) {
  if (s == "greedy") return InitMethod::greedy;
  if (s == "greedy-light") return InitMethod::greedy_light;
  throw InvalidArgumentError("unknown init method '" + s + "' (expected greedy or greedy-light)");
}

std::string to_string(SearchMethod m) {
  switch (m) {
    case SearchMethod::fi_det: return "fi-det";
    case SearchMethod::fi_plus_det: return "fi-plus-det";
    case SearchMethod::bi_det: return "bi-det";
    case SearchMethod::fi_norm: return "fi-norm";
    case SearchMethod::det_then_norm: return "det-then-norm";
    case SearchMethod::none: return "none";
  }
  return "?";
}

SearchMethod parse_search_method(const std::string& s) {
  for (auto m : {SearchMethod::fi_det, SearchMethod::fi_plus_det, SearchMethod::bi_det, SearchMethod::fi_norm,
                 SearchMethod::det_then_norm, SearchMethod::none})
    if (to_string(m) == s) return m;
  throw InvalidArgumentError("unknown search method '" + s +
                             "' (expected fi-det, fi-plus-det, bi-det, fi-norm, det-then-norm or none)");
}

InstanceInfo describe(const DenseMatrix& a, const std::optional<InstanceSpec>& spec, const std::string& fallback_id) {
  InstanceInfo info;
  info.m = a.rows();
  info.n = a.cols();
  if (spec) {
    info.id = spec->id.empty() ? fallback_id : spec->id;
    info.r = spec->r;
    info.d = spec->density;
    info.seed = spec->seed;
  } else {
    info.id = fallback_id;
    info.r = a.rows() && a.cols() ? numeric_rank(a) : 0;
    info.d = a.rows() && a.cols() ? static_cast<double>(count_nonzeros(a)) / static_cast<double>(a.rows() * a.cols())
                                  : 0.0;
  }
  return info;
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols{
      "instance_id", "m",         "n",          "r",         "d",          "seed",        "variant",
      "init",        "search",    "norm_init",  "norm_final", "improvement", "swaps",      "init_ms",
      "search_ms",   "assemble_ms", "verify_ms", "p1_res",    "p2_res",     "p3_res",      "p4_res",
      "rank_ok",     "z_opt",     "bound_ratio", "error"};
  return cols;
}

ExperimentRecord run_method(const DenseMatrix& a, const InstanceInfo& info, const MethodSpec& method,
                            const RunOptions& opt) {
  ExperimentRecord rec = error_record(info, method, "");
  rec.error.clear();
  try {
    if (info.r == 0) throw InvalidArgumentError("matrix rank must be at least 1");
    if (method.variant == Variant::symmetric && (!a.is_square() || !is_symmetric(a, 1e-12)))
      throw InvalidArgumentError("variant sym requires a symmetric matrix");

    const bool light = method.init == InitMethod::greedy_light;
    auto t0 = Clock::now();
    BlockIndex b0;
    if (method.variant == Variant::symmetric)
      b0 = greedy_sym(a, info.r, light, opt.init);
    else
      b0 = light ? greedy_light(a, info.r, opt.init) : greedy(a, info.r, opt.init.exec);
    rec.init_ms = ms_since(t0);

    Phase ph;
    SparseBlockInverse h;
    switch (method.variant) {
      case Variant::general: h = run_gi(a, b0, method.search, opt, ph, rec); break;
      case Variant::ah_symmetric: h = run_ah(a, b0, method.search, opt, ph, rec); break;
      case Variant::symmetric: h = run_sym(a, b0, method.search, opt, ph, rec); break;
    }
    rec.norm_init = ph.norm_init;
    rec.norm_final = ph.norm_final;
    rec.improvement = ph.norm_init > 0.0 ? (ph.norm_init - ph.norm_final) / ph.norm_init : 0.0;
    rec.swaps = ph.swaps;

    t0 = Clock::now();
    const auto rep = check_penrose(a, h, opt.verify_tol, opt.search.exec);
    rec.verify_ms = ms_since(t0);
    rec.residual = rep.residual;
    rec.rank_ok = rep.rank == info.r;

    const auto z = opt.z_opt.find({info.id, rec.variant});
    if (z != opt.z_opt.end()) {
      rec.z_opt = z->second;
      rec.bound_ratio = bound_ratio(h, z->second);
    }
  } catch (const std::exception& e) {
    clear_numbers(rec);
    rec.error = e.what();
    if (rec.error.empty()) rec.error = "error";
  }
  return rec;
}

std::vector<ExperimentRecord> run_batch(const std::vector<Instance>& instances, const std::vector<MethodSpec>& methods,
                                        const RunOptions& opt, unsigned jobs) {
  const std::size_t k = methods.size();
  std::vector<ExperimentRecord> out(instances.size() * k);
  const long count = static_cast<long>(instances.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1u, jobs))
  for (long i = 0; i < count; ++i)
    for (std::size_t j = 0; j < k; ++j)
      out[i * k + j] = run_method(instances[i].matrix, instances[i].info, methods[j], opt);
  return out;
}

std::vector<ExperimentRecord> run_files(const std::vector<std::filesystem::path>& files,
                                        const std::vector<MethodSpec>& methods, const RunOptions& opt,
                                        unsigned jobs) {
  const std::size_t k = methods.size();
  std::vector<ExperimentRecord> out(files.size() * k);
  const long count = static_cast<long>(files.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1u, jobs))
  for (long i = 0; i < count; ++i) {
    const std::string stem = files[i].stem().string();
    try {
      const auto file = read_matrix_market(files[i].string());
      const auto info = describe(file.matrix, file.spec, stem);
      for (std::size_t j = 0; j < k; ++j) out[i * k + j] = run_method(file.matrix, info, methods[j], opt);
    } catch (const std::exception& e) {
      InstanceInfo info;
      info.id = stem;
      for (std::size_t j = 0; j < k; ++j) out[i * k + j] = error_record(info, methods[j], e.what());
    }
  }
  return out;
}

std::vector<std::filesystem::path> collect_matrix_files(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(path, ec)) throw IoError("no such file or directory: " + path.string());
  if (!fs::is_directory(path, ec)) return {path};
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path, ec))
    if (e.is_regular_file() && e.path().extension() == ".mtx") files.push_back(e.path());
  if (ec) throw IoError("cannot list " + path.string());
  std::sort(files.begin(), files.end());
  return files;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;  // current row has content
  char c;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    any = false;
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) throw ParseError("csv: stray quote inside an unquoted field");
        quoted = any = true;
        break;
      case ',':
        end_field();
        any = true;
        break;
      case '\r':
        if (in.peek() == '\n') in.get(c);
        [[fallthrough]];
      case '\n':
        if (any || !row.empty() || !field.empty()) end_row();
        break;
      default:
        field += c;
        any = true;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quoted field");
  if (any || !row.empty() || !field.empty()) end_row();
  return rows;
}

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records, bool header) {
  if (header) {
    const auto& cols = record_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\r\n";
  }
  for (const auto& r : records) {
    const bool ok = r.ok();
    auto num = [&](double v) { return ok ? fmt(v) : std::string(); };
    std::vector<std::string> f{csv_field(r.instance_id),
                               fmt_int(r.m),
                               fmt_int(r.n),
                               fmt_int(r.r),
                               fmt(r.d),
                               fmt_int(r.seed),
                               csv_field(r.variant),
                               csv_field(r.init),
                               csv_field(r.search),
                               num(r.norm_init),
                               num(r.norm_final),
                               num(r.improvement),
                               ok ? fmt_int(r.swaps) : std::string(),
                               num(r.init_ms),
                               num(r.search_ms),
                               num(r.assemble_ms),
                               num(r.verify_ms),
                               num(r.residual[0]),
                               num(r.residual[1]),
                               num(r.residual[2]),
                               num(r.residual[3]),
                               ok ? (r.rank_ok ? "1" : "0") : std::string(),
                               opt_field(r.z_opt),
                               opt_field(r.bound_ratio),
                               csv_field(r.error)};
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
    out << "\r\n";
  }
}

void write_records_json(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  using nlohmann::json;
  json arr = json::array();
  for (const auto& r : records) {
    const bool ok = r.ok();
    auto num = [&](double v) { return ok && std::isfinite(v) ? json(v) : json(nullptr); };
    json o;
    o["instance_id"] = r.instance_id;
    o["m"] = r.m;
    o["n"] = r.n;
    o["r"] = r.r;
    o["d"] = r.d;
    o["seed"] = r.seed;
    o["variant"] = r.variant;
    o["init"] = r.init;
    o["search"] = r.search;
    o["norm_init"] = num(r.norm_init);
    o["norm_final"] = num(r.norm_final);
    o["improvement"] = num(r.improvement);
    o["swaps"] = ok ? json(r.swaps) : json(nullptr);
    o["init_ms"] = num(r.init_ms);
    o["search_ms"] = num(r.search_ms);
    o["assemble_ms"] = num(r.assemble_ms);
    o["verify_ms"] = num(r.verify_ms);
    o["p1_res"] = num(r.residual[0]);
    o["p2_res"] = num(r.residual[1]);
    o["p3_res"] = num(r.residual[2]);
    o["p4_res"] = num(r.residual[3]);
    o["rank_ok"] = ok ? json(r.rank_ok) : json(nullptr);
    o["z_opt"] = r.z_opt ? json(*r.z_opt) : json(nullptr);
    o["bound_ratio"] = r.bound_ratio ? json(*r.bound_ratio) : json(nullptr);
    o["error"] = r.error.empty() ? json(nullptr) : json(r.error);
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << '\n';
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  const auto rows = parse_csv(in);
  const auto& cols = record_columns();
  if (rows.empty() || rows[0] != cols) throw ParseError("csv: header does not match the record schema");
  std::vector<ExperimentRecord> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& f = rows[k];
    if (f.size() != cols.size())
      throw ParseError("csv: row " + std::to_string(k + 1) + " has " + std::to_string(f.size()) + " fields, expected " +
                       std::to_string(cols.size()));
    ExperimentRecord r;
    r.instance_id = f[0];
    r.m = parse_uint(f[1], "m");
    r.n = parse_uint(f[2], "n");
    r.r = parse_uint(f[3], "r");
    r.d = parse_double(f[4], "d");
    r.seed = parse_uint(f[5], "seed");
    r.variant = f[6];
    r.init = f[7];
    r.search = f[8];
    r.error = f[24];
    if (r.ok()) {
      r.norm_init = parse_double(f[9], "norm_init");
      r.norm_final = parse_double(f[10], "norm_final");
      r.improvement = parse_double(f[11], "improvement");
      r.swaps = parse_uint(f[12], "swaps");
      r.init_ms = parse_double(f[13], "init_ms");
      r.search_ms = parse_double(f[14], "search_ms");
      r.assemble_ms = parse_double(f[15], "assemble_ms");
      r.verify_ms = parse_double(f[16], "verify_ms");
      for (int p = 0; p < 4; ++p) r.residual[p] = parse_double(f[17 + p], "residual");
      if (f[21] != "0" && f[21] != "1") throw ParseError("csv: malformed rank_ok '" + f[21] + "'");
      r.rank_ok = f[21] == "1";
    }
    if (!f[22].empty()) r.z_opt = parse_double(f[22], "z_opt");
    if (!f[23].empty()) r.bound_ratio = parse_double(f[23], "bound_ratio");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ExperimentRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return read_records_csv(in);
}

ZOptTable read_z_opt_csv(std::istream& in) {
  const auto rows = parse_csv(in);
  if (rows.empty() || rows[0] != std::vector<std::string>{"instance_id", "variant", "z_opt"})
    throw ParseError("z_opt csv: expected header instance_id,variant,z_opt");
  ZOptTable z;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].size() != 3) throw ParseError("z_opt csv: row " + std::to_string(k + 1) + " needs 3 fields");
    z[{rows[k][0], rows[k][1]}] = parse_double(rows[k][2], "z_opt");
  }
  return z;
}

ZOptTable read_z_opt_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return read_z_opt_csv(in);
}

void write_z_opt_csv(std::ostream& out, const ZOptTable& z) {
  out << "instance_id,variant,z_opt\r\n";
  for (const auto& [key, v] : z) out << csv_field(key.first) << ',' << csv_field(key.second) << ',' << fmt(v) << "\r\n";
}

namespace {

Summary summarize(const std::vector<double>& v) {
  Summary s;
  if (v.empty()) return s;
  double sum = 0.0;
  s.max = v[0];
  for (double x : v) {
    sum += x;
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

double mean(const std::vector<double>& v) { return summarize(v).mean; }

}  // namespace

std::vector<ReportRow> aggregate(std::vector<ExperimentRecord> records, const ZOptTable& z) {
  for (auto& r : records) {
    const auto it = z.find({r.instance_id, r.variant});
    if (it != z.end()) r.z_opt = it->second;
    if (r.ok() && r.z_opt) {
      if (!(*r.z_opt > 0.0)) throw InvalidArgumentError("z_opt must be positive for " + r.instance_id);
      r.bound_ratio = r.norm_final / *r.z_opt;
    }
  }

  using Key = std::tuple<Index, Index, double, std::string, std::string, std::string>;
  std::map<Key, std::vector<const ExperimentRecord*>> groups;
  // (instance, variant, init, search) -> record, for the greedy-light / greedy pairing
  std::map<std::tuple<std::string, std::string, std::string, std::string>, const ExperimentRecord*> by_run;
  for (const auto& r : records) {
    groups[{r.m, r.r, r.d, r.variant, r.init, r.search}].push_back(&r);
    if (r.ok()) by_run[{r.instance_id, r.variant, r.init, r.search}] = &r;
  }

  std::vector<ReportRow> out;
  for (const auto& [key, recs] : groups) {
    ReportRow row;
    std::tie(row.m, row.r, row.d, row.variant, row.init, row.search) = key;
    std::vector<double> imp, swaps, time, norm, bound, nratio, tratio;
    for (const auto* r : recs) {
      if (!r->ok()) {
        ++row.errors;
        continue;
      }
      ++row.count;
      imp.push_back(r->improvement);
      swaps.push_back(static_cast<double>(r->swaps));
      time.push_back(r->init_ms + r->search_ms);
      norm.push_back(r->norm_final);
      if (r->bound_ratio) bound.push_back(*r->bound_ratio);
      if (r->init == "greedy-light") {
        const auto g = by_run.find({r->instance_id, r->variant, "greedy", r->search});
        if (g != by_run.end()) {
          const auto* gr = g->second;
          if (gr->norm_final > 0.0) nratio.push_back(r->norm_final / gr->norm_final);
          const double gt = gr->init_ms + gr->search_ms;
          if (gt > 0.0) tratio.push_back((r->init_ms + r->search_ms) / gt);
        }
      }
    }
    row.improvement = summarize(imp);
    row.swaps = summarize(swaps);
    row.time_ms = summarize(time);
    row.norm_final = summarize(norm);
    if (!bound.empty()) row.bound_ratio = summarize(bound);
    if (!nratio.empty()) row.norm_ratio = mean(nratio);
    if (!tratio.empty()) row.time_ratio = mean(tratio);
    out.push_back(std::move(row));
  }
  return out;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "m,r,d,variant,init,search,count,errors,improvement_mean,improvement_std,swaps_mean,swaps_std,"
         "time_ms_mean,time_ms_std,norm_final_mean,norm_final_std,bound_ratio_mean,bound_ratio_std,"
         "bound_ratio_max,norm_ratio,time_ratio\r\n";
  for (const auto& r : rows) {
    const bool any = r.count > 0;
    auto num = [&](double v) { return any ? fmt(v) : std::string(); };
    out << r.m << ',' << r.r << ',' << fmt(r.d) << ',' << csv_field(r.variant) << ',' << csv_field(r.init) << ','
        << csv_field(r.search) << ',' << r.count << ',' << r.errors << ',' << num(r.improvement.mean) << ','
        << num(r.improvement.std) << ',' << num(r.swaps.mean) << ',' << num(r.swaps.std) << ','
        << num(r.time_ms.mean) << ',' << num(r.time_ms.std) << ',' << num(r.norm_final.mean) << ','
        << num(r.norm_final.std) << ',';
    if (r.bound_ratio)
      out << fmt(r.bound_ratio->mean) << ',' << fmt(r.bound_ratio->std) << ',' << fmt(r.bound_ratio->max);
    else
      out << ",,";
    out << ',' << opt_field(r.norm_ratio) << ',' << opt_field(r.time_ratio) << "\r\n";
  }
}

}  // namespace ginv
