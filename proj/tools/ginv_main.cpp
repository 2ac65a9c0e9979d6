#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ginv/assemble.hpp"
#include "ginv/error.hpp"
#include "ginv/experiment.hpp"
#include "ginv/instance.hpp"
#include "ginv/lp_export.hpp"
#include "ginv/matrix_market.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace ginv;

namespace {

// key=value lines; '#' starts a comment. Each key names a long option of
// `app` and is applied only when that option was not given on the command
// line.
void apply_config(CLI::App& app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgumentError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key == "config") throw InvalidArgumentError(path + ": config files cannot include other config files");
    CLI::Option* opt = app.get_option_no_throw("--" + key);
    if (!opt) throw InvalidArgumentError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1" || value == "yes" || value == "on") opt->add_result("true");
      else if (value == "false" || value == "0" || value == "no" || value == "off") continue;
      else throw InvalidArgumentError(path + ": flag '" + key + "' takes true or false");
    } else {
      opt->add_result(value);
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw InvalidArgumentError(path + ": bad value for '" + key + "': " + e.what());
    }
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot write " + path);
    path_ = path;
  }
  std::ostream& stream() { return path_.empty() ? std::cout : file_; }
  void close() {
    if (path_.empty()) {
      std::cout.flush();
      return;
    }
    file_.close();
    if (!file_) throw IoError("write failed: " + path_);
  }

 private:
  std::ofstream file_;
  std::string path_;
};

struct GenArgs {
  std::string category;
  std::string out = ".";
  std::uint64_t seed_base = 0;
  std::string format = "coordinate";
  SuiteOptions custom;
};

int cmd_gen(const GenArgs& g) {
  SuiteOptions opt = g.custom;
  opt.seed_base = g.seed_base;
  const auto specs = suite(g.category, opt);
  const auto format = g.format == "array" ? MatrixMarketFormat::array : MatrixMarketFormat::coordinate;
  std::error_code ec;
  fs::create_directories(g.out, ec);
  if (ec) throw IoError("cannot create directory " + g.out);
  for (const auto& spec : specs) {
    const auto a = generate(spec);
    write_matrix_market((fs::path(g.out) / (spec.id + ".mtx")).string(), a, format, &spec);
  }
  std::cerr << "wrote " << specs.size() << " files to " << g.out << '\n';
  return 0;
}

struct RunArgs {
  std::vector<std::string> paths;
  std::string suite_category;
  std::uint64_t seed_base = 0;
  std::vector<std::string> variants{"gi"};
  std::vector<std::string> inits{"greedy-light"};
  std::vector<std::string> searches{"fi-det"};
  std::string det_phase = "fi-det";
  bool parallel_kernels = false;
  unsigned jobs = 1;
  std::string out;
  std::string json;
  std::string z_opt;
  std::string config;
  RunOptions opt;
};

int cmd_run(RunArgs& a) {
  if (a.paths.empty() && a.suite_category.empty())
    throw InvalidArgumentError("run: give matrix files, directories or --suite");
  if (a.det_phase != "fi-det" && a.det_phase != "fi-plus-det")
    throw InvalidArgumentError("run: --det-phase must be fi-det or fi-plus-det");
  a.opt.det_phase_plus = a.det_phase == "fi-plus-det";
  const auto exec = a.parallel_kernels ? kernels::Exec::parallel : kernels::Exec::serial;
  a.opt.search.exec = exec;
  a.opt.init.exec = exec;
  validate(a.opt.search);
  validate(a.opt.init);
  if (!a.z_opt.empty()) a.opt.z_opt = read_z_opt_csv(fs::path(a.z_opt));

  std::vector<MethodSpec> methods;
  for (const auto& v : a.variants)
    for (const auto& i : a.inits)
      for (const auto& s : a.searches) methods.push_back({parse_variant(v), parse_init_method(i), parse_search_method(s)});

  Output out(a.out);
  std::unique_ptr<Output> js;
  if (!a.json.empty()) js = std::make_unique<Output>(a.json);

  std::vector<ExperimentRecord> records;
  if (!a.paths.empty()) {
    std::vector<fs::path> files;
    for (const auto& p : a.paths) {
      auto f = collect_matrix_files(p);
      files.insert(files.end(), f.begin(), f.end());
    }
    records = run_files(files, methods, a.opt, a.jobs);
  }
  if (!a.suite_category.empty()) {
    SuiteOptions so;
    so.seed_base = a.seed_base;
    std::vector<Instance> instances;
    for (const auto& spec : suite(a.suite_category, so)) instances.push_back({describe(generate(spec), spec, ""), generate(spec)});
    auto more = run_batch(instances, methods, a.opt, a.jobs);
    records.insert(records.end(), more.begin(), more.end());
  }

  write_records_csv(out.stream(), records);
  out.close();
  if (js) {
    write_records_json(js->stream(), records);
    js->close();
  }
  std::size_t failed = 0;
  for (const auto& r : records) failed += !r.ok();
  if (failed) std::cerr << failed << " of " << records.size() << " runs recorded an error\n";
  return 0;
}

struct VerifyArgs {
  std::string a;
  std::string h;
  std::string variant = "gi";
  double tol = 1e-8;
  bool json = false;
  std::string out;
};

int cmd_verify(const VerifyArgs& v) {
  const Variant variant = parse_variant(v.variant);
  const auto a = read_matrix_market(v.a).matrix;
  const auto h = read_matrix_market(v.h).matrix;
  const auto rep = check_penrose(a, h, v.tol);
  const Index rank_a = numeric_rank(a);
  const bool reflexive = rep.rank == rank_a;
  bool ok = rep.pass[0] && rep.pass[1];
  if (variant == Variant::ah_symmetric) ok = ok && rep.pass[2];
  if (variant == Variant::symmetric) ok = ok && rep.symmetric;

  Output out(v.out);
  auto& os = out.stream();
  if (v.json) {
    nlohmann::json j;
    j["variant"] = v.variant;
    j["tol"] = v.tol;
    for (int p = 0; p < 4; ++p) {
      j["p" + std::to_string(p + 1) + "_res"] = rep.residual[p];
      j["p" + std::to_string(p + 1) + "_pass"] = rep.pass[p];
    }
    j["rank_h"] = rep.rank;
    j["rank_a"] = rank_a;
    j["reflexive"] = reflexive;
    j["symmetric"] = rep.symmetric;
    j["one_norm"] = rep.one_norm;
    j["nnz"] = rep.nnz;
    j["ok"] = ok;
    os << j.dump(2) << '\n';
  } else {
    os << "variant,tol,p1_res,p2_res,p3_res,p4_res,p1_pass,p2_pass,p3_pass,p4_pass,rank_h,rank_a,reflexive,"
          "symmetric,one_norm,nnz,ok\r\n";
    char buf[64];
    auto num = [&](double x) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      return std::string(buf);
    };
    os << csv_field(v.variant) << ',' << num(v.tol);
    for (double r : rep.residual) os << ',' << num(r);
    for (bool p : rep.pass) os << ',' << (p ? 1 : 0);
    os << ',' << rep.rank << ',' << rank_a << ',' << (reflexive ? 1 : 0) << ',' << (rep.symmetric ? 1 : 0) << ','
       << num(rep.one_norm) << ',' << rep.nnz << ',' << (ok ? 1 : 0) << "\r\n";
  }
  out.close();
  return 0;
}

struct LpArgs {
  std::string a;
  std::string problem = "p1";
  std::string out;
  bool force = false;
  Index max_entries = 40000;
};

int cmd_lp_export(const LpArgs& l) {
  const auto a = read_matrix_market(l.a).matrix;
  LpExportOptions opt;
  opt.force = l.force;
  opt.max_entries = l.max_entries;
  const auto problem = parse_lp_problem(l.problem);
  LpModel model;
  if (l.out.empty() || l.out == "-") {
    model = export_lp(a, problem, std::cout, opt);
    std::cout.flush();
  } else {
    model = export_lp(a, problem, fs::path(l.out), opt);
  }
  std::cerr << to_string(problem) << ": " << model.variables << " variables, " << model.equalities()
            << " equalities, " << model.abs_inequalities << " inequalities\n";
  return 0;
}

int cmd_lp_objective(const std::string& path) {
  const double z = read_objective(fs::path(path));
  std::printf("%.17g\n", z);
  return 0;
}

struct ReportArgs {
  std::vector<std::string> csv;
  std::string z_opt;
  std::string out;
};

int cmd_report(const ReportArgs& r) {
  std::vector<ExperimentRecord> all;
  for (const auto& p : r.csv) {
    auto recs = read_records_csv(fs::path(p));
    all.insert(all.end(), recs.begin(), recs.end());
  }
  ZOptTable z;
  if (!r.z_opt.empty()) z = read_z_opt_csv(fs::path(r.z_opt));
  const auto rows = aggregate(std::move(all), z);
  Output out(r.out);
  write_report_csv(out.stream(), rows);
  out.close();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse block generalized inverses: instance generation, local search, verification, LP export"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Write a test suite as Matrix Market files");
  g->add_option("category", gen.category, "small, medium, large, small-sym, medium-sym or custom")->required();
  g->add_option("--out,-o", gen.out, "Output directory")->capture_default_str();
  g->add_option("--seed-base", gen.seed_base, "Base seed of the suite")->capture_default_str();
  g->add_option("--format", gen.format, "array or coordinate")
      ->check(CLI::IsMember({"array", "coordinate"}))
      ->capture_default_str();
  g->add_option("--sizes", gen.custom.sizes, "custom: m = n values (n values when --rows is set)")->delimiter(',');
  g->add_option("--rows", gen.custom.rows, "custom: explicit m values")->delimiter(',');
  g->add_option("--ranks", gen.custom.ranks, "custom: ranks")->delimiter(',');
  g->add_option("--rank-fractions", gen.custom.rank_fractions, "custom: ranks as fractions of n")->delimiter(',');
  g->add_option("--densities", gen.custom.densities, "custom: densities")->delimiter(',');
  g->add_option("--count", gen.custom.count, "custom: instances per configuration");
  g->add_flag("--symmetric", gen.custom.symmetric, "custom: symmetric matrices");

  RunArgs run;
  auto* r = app.add_subcommand("run", "Run initializations and searches; one CSV row per instance and method");
  r->add_option("paths", run.paths, "Matrix Market files or directories of *.mtx");
  r->add_option("--suite", run.suite_category, "Generate this suite in memory instead of reading files");
  r->add_option("--seed-base", run.seed_base, "Base seed for --suite")->capture_default_str();
  r->add_option("--variant", run.variants, "gi, ah, sym (comma separated)")->delimiter(',')->capture_default_str();
  r->add_option("--init", run.inits, "greedy, greedy-light")->delimiter(',')->capture_default_str();
  r->add_option("--search", run.searches, "fi-det, fi-plus-det, bi-det, fi-norm, det-then-norm, none")
      ->delimiter(',')
      ->capture_default_str();
  r->add_option("--det-phase", run.det_phase, "First phase of det-then-norm: fi-det or fi-plus-det")
      ->capture_default_str();
  r->add_option("--delta", run.opt.search.delta, "Swap acceptance threshold")->capture_default_str();
  r->add_option("--epsilon", run.opt.search.epsilon, "Local-maximizer slack")->capture_default_str();
  r->add_option("--max-sweeps", run.opt.search.max_sweeps, "Sweep limit per search")->capture_default_str();
  r->add_option("--tau0", run.opt.init.tau0, "Greedy-light initial volume threshold")->capture_default_str();
  r->add_option("--decrease", run.opt.init.decrease, "Greedy-light threshold decrease factor")->capture_default_str();
  r->add_option("--max-retries", run.opt.init.max_retries, "Greedy-light retries")->capture_default_str();
  r->add_option("--tol", run.opt.verify_tol, "Penrose residual tolerance")->capture_default_str();
  r->add_option("--jobs,-j", run.jobs, "Instances processed in parallel")->check(CLI::PositiveNumber);
  r->add_flag("--parallel-kernels", run.parallel_kernels, "OpenMP inside each search");
  r->add_option("--out,-o", run.out, "CSV destination (default: standard output)");
  r->add_option("--json", run.json, "Also write the records as JSON");
  r->add_option("--z-opt", run.z_opt, "CSV of instance_id,variant,z_opt for bound ratios");
  r->add_option("--config", run.config, "key=value file of defaults for the options above");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Penrose-property report for A and a candidate H");
  v->add_option("matrix", ver.a, "A (Matrix Market)")->required();
  v->add_option("inverse", ver.h, "H (Matrix Market)")->required();
  v->add_option("--variant", ver.variant, "gi, ah or sym: which properties decide `ok`")->capture_default_str();
  v->add_option("--tol", ver.tol, "Residual tolerance")->capture_default_str();
  v->add_flag("--json", ver.json, "JSON instead of CSV");
  v->add_option("--out,-o", ver.out, "Destination (default: standard output)");

  LpArgs lp;
  auto* l = app.add_subcommand("lp-export", "Write the P1 / P123 / P1sym LP for a matrix");
  l->add_option("matrix", lp.a, "A (Matrix Market)")->required();
  l->add_option("--problem", lp.problem, "p1, p123 or p1sym")->capture_default_str();
  l->add_option("--out,-o", lp.out, "LP file (default: standard output)");
  l->add_flag("--force", lp.force, "Export past the size guard");
  l->add_option("--max-entries", lp.max_entries, "Size guard on m n")->capture_default_str();

  std::string solution;
  auto* o = app.add_subcommand("lp-objective", "Print the objective value found in a solver solution file");
  o->add_option("solution", solution, "Solution file")->required();

  ReportArgs rep;
  auto* p = app.add_subcommand("report", "Aggregate run CSVs per (m, r, d, variant, init, search)");
  p->add_option("csv", rep.csv, "CSV files written by run");
  p->add_option("--z-opt", rep.z_opt, "CSV of instance_id,variant,z_opt");
  p->add_option("--out,-o", rep.out, "Destination (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*r) {
      if (!run.config.empty()) apply_config(*r, run.config);
      return cmd_run(run);
    }
    if (*v) return cmd_verify(ver);
    if (*l) return cmd_lp_export(lp);
    if (*o) return cmd_lp_objective(solution);
    if (*p) return cmd_report(rep);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
