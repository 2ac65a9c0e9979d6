#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ginv/assemble.hpp"
#include "ginv/block_init.hpp"
#include "ginv/instance.hpp"
#include "ginv/search_gi.hpp"

namespace ginv {

enum class InitMethod { greedy, greedy_light };
enum class SearchMethod { fi_det, fi_plus_det, bi_det, fi_norm, det_then_norm, none };

// "greedy", "greedy-light"
std::string to_string(InitMethod m);
InitMethod parse_init_method(const std::string& s);
// "fi-det", "fi-plus-det", "bi-det", "fi-norm", "det-then-norm", "none"
std::string to_string(SearchMethod m);
SearchMethod parse_search_method(const std::string& s);

struct MethodSpec {
  Variant variant = Variant::general;
  InitMethod init = InitMethod::greedy_light;
  SearchMethod search = SearchMethod::fi_det;
};

// Keyed by (instance id, variant name).
using ZOptTable = std::map<std::pair<std::string, std::string>, double>;

struct RunOptions {
  SearchConfig search;
  InitConfig init;
  bool det_phase_plus = false;  // det-then-norm starts with FI+ instead of FI
  double verify_tol = 1e-8;
  ZOptTable z_opt;
};

struct InstanceInfo {
  std::string id;
  Index m = 0;
  Index n = 0;
  Index r = 0;
  double d = 0.0;
  std::uint64_t seed = 0;
};

// Uses the `%ginv` comment when present; otherwise r is the numerical rank
// and d the fraction of nonzero entries.
InstanceInfo describe(const DenseMatrix& a, const std::optional<InstanceSpec>& spec, const std::string& fallback_id);

struct ExperimentRecord {
  std::string instance_id;
  Index m = 0;
  Index n = 0;
  Index r = 0;
  double d = 0.0;
  std::uint64_t seed = 0;
  std::string variant;
  std::string init;
  std::string search;
  double norm_init = 0.0;
  double norm_final = 0.0;
  double improvement = 0.0;
  Index swaps = 0;
  double init_ms = 0.0;
  double search_ms = 0.0;
  double assemble_ms = 0.0;
  double verify_ms = 0.0;
  std::array<double, 4> residual{};
  bool rank_ok = false;
  std::optional<double> z_opt;
  std::optional<double> bound_ratio;
  std::string error;  // empty on success; the numeric fields are then meaningful

  bool ok() const noexcept { return error.empty(); }
};

// Column order of the CSV schema.
const std::vector<std::string>& record_columns();

// Never throws for per-instance failures: the message goes to `error`.
ExperimentRecord run_method(const DenseMatrix& a, const InstanceInfo& info, const MethodSpec& method,
                            const RunOptions& opt = {});

struct Instance {
  InstanceInfo info;
  DenseMatrix matrix;
};

// One record per (instance, method), instances outer. `jobs` workers take
// whole instances; output order does not depend on it.
std::vector<ExperimentRecord> run_batch(const std::vector<Instance>& instances, const std::vector<MethodSpec>& methods,
                                        const RunOptions& opt = {}, unsigned jobs = 1);
// As above, reading each Matrix Market file inside its worker. A file that
// cannot be read yields one error record per method.
std::vector<ExperimentRecord> run_files(const std::vector<std::filesystem::path>& files,
                                        const std::vector<MethodSpec>& methods, const RunOptions& opt = {},
                                        unsigned jobs = 1);

// Sorted *.mtx files of a directory, or the path itself for a file.
std::vector<std::filesystem::path> collect_matrix_files(const std::filesystem::path& path);

//
// CSV (RFC 4180) and JSON. Doubles are written in shortest round-trip form;
// optional fields and the numeric fields of error records are empty / null.
//
void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records, bool header = true);
void write_records_json(std::ostream& out, const std::vector<ExperimentRecord>& records);
// Throws ParseError on a header that differs from record_columns() or a
// malformed row.
std::vector<ExperimentRecord> read_records_csv(std::istream& in);
std::vector<ExperimentRecord> read_records_csv(const std::filesystem::path& path);

// Columns instance_id, variant, z_opt.
ZOptTable read_z_opt_csv(std::istream& in);
ZOptTable read_z_opt_csv(const std::filesystem::path& path);
void write_z_opt_csv(std::ostream& out, const ZOptTable& z);

std::vector<std::vector<std::string>> parse_csv(std::istream& in);
std::string csv_field(const std::string& s);

//
// Aggregation per (m, r, d, variant, init, search) over successful records.
// time is init_ms + search_ms; std is the sample standard deviation (0 for
// a single record). For greedy-light rows, norm_ratio and time_ratio are
// the means over instances of greedy-light / greedy for the same variant
// and search.
//
struct Summary {
  double mean = 0.0;
  double std = 0.0;
  double max = 0.0;
};

struct ReportRow {
  Index m = 0;
  Index r = 0;
  double d = 0.0;
  std::string variant;
  std::string init;
  std::string search;
  Index count = 0;
  Index errors = 0;
  Summary improvement;
  Summary swaps;
  Summary time_ms;
  Summary norm_final;
  std::optional<Summary> bound_ratio;
  std::optional<double> norm_ratio;
  std::optional<double> time_ratio;
};

// Entries of `z` fill in (and override) z_opt on the records.
std::vector<ReportRow> aggregate(std::vector<ExperimentRecord> records, const ZOptTable& z = {});
void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);

}  // namespace ginv
