#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ginv/error.hpp"
#include "ginv/experiment.hpp"
#include "ginv/matrix_market.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace ginv;
using namespace ginv::testing;

namespace {

InstanceInfo info_for(const DenseMatrix& a, Index r, const std::string& id = "x") {
  InstanceInfo info;
  info.id = id;
  info.m = a.rows();
  info.n = a.cols();
  info.r = r;
  info.d = 1.0;
  return info;
}

// Everything except the timing columns.
bool same_outcome(const ExperimentRecord& a, const ExperimentRecord& b) {
  return a.instance_id == b.instance_id && a.m == b.m && a.n == b.n && a.r == b.r && a.d == b.d && a.seed == b.seed &&
         a.variant == b.variant && a.init == b.init && a.search == b.search && a.norm_init == b.norm_init &&
         a.norm_final == b.norm_final && a.improvement == b.improvement && a.swaps == b.swaps &&
         a.residual == b.residual && a.rank_ok == b.rank_ok && a.z_opt == b.z_opt && a.bound_ratio == b.bound_ratio &&
         a.error == b.error;
}

std::vector<Instance> small_instances(std::uint64_t seed, bool symmetric) {
  SuiteOptions opt;
  opt.sizes = {6, 9};
  opt.rank_fractions = {0.3, 0.6};
  opt.densities = {0.5, 1.0};
  opt.count = 2;
  opt.symmetric = symmetric;
  opt.seed_base = seed;
  std::vector<Instance> out;
  for (const auto& spec : suite("custom", opt)) out.push_back({describe(generate(spec), spec, ""), generate(spec)});
  return out;
}

std::vector<MethodSpec> all_methods(Variant v) {
  std::vector<MethodSpec> out;
  for (auto init : {InitMethod::greedy, InitMethod::greedy_light})
    for (auto s : {SearchMethod::fi_det, SearchMethod::fi_plus_det, SearchMethod::bi_det, SearchMethod::fi_norm,
                   SearchMethod::det_then_norm, SearchMethod::none})
      out.push_back({v, init, s});
  return out;
}

ExperimentRecord fake(const std::string& id, const std::string& init, double norm, double imp, Index swaps,
                      double ms) {
  ExperimentRecord r;
  r.instance_id = id;
  r.m = r.n = 10;
  r.r = 2;
  r.d = 0.5;
  r.variant = "gi";
  r.init = init;
  r.search = "fi-det";
  r.norm_final = norm;
  r.norm_init = norm / (1.0 - imp);
  r.improvement = imp;
  r.swaps = swaps;
  r.init_ms = ms / 2;
  r.search_ms = ms / 2;
  r.rank_ok = true;
  return r;
}

}  // namespace

TEST_CASE("method names") {
  for (auto m : {InitMethod::greedy, InitMethod::greedy_light}) CHECK(parse_init_method(to_string(m)) == m);
  for (auto m : {SearchMethod::fi_det, SearchMethod::fi_plus_det, SearchMethod::bi_det, SearchMethod::fi_norm,
                 SearchMethod::det_then_norm, SearchMethod::none})
    CHECK(parse_search_method(to_string(m)) == m);
  CHECK(to_string(SearchMethod::det_then_norm) == "det-then-norm");
  CHECK_THROWS_AS(parse_init_method("light"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_search_method("fi"), InvalidArgumentError);
  CHECK(record_columns().size() == 25);
  CHECK(record_columns().front() == "instance_id");
  CHECK(record_columns().back() == "error");
}

TEST_CASE("run on the rank-one 2x2 example") {
  const auto a = DenseMatrix::from_rows({{1, 2}, {2, 4}});
  const auto info = info_for(a, 1);
  RunOptions opt;
  opt.init.tau0 = 0.5;  // greedy-light starts at S = T = {0}
  auto rec = run_method(a, info, {Variant::general, InitMethod::greedy_light, SearchMethod::fi_det}, opt);
  REQUIRE(rec.ok());
  CHECK(rec.swaps == 2);
  CHECK(rec.norm_init == doctest::Approx(1.0));
  CHECK(rec.norm_final == doctest::Approx(0.25));
  CHECK(rec.improvement == doctest::Approx(0.75));
  CHECK(rec.rank_ok);
  CHECK(rec.residual[0] < 1e-12);
  CHECK(rec.residual[1] < 1e-12);

  // tau0 = 1: the strict volume test skips column 0, so one row swap remains.
  rec = run_method(a, info, {Variant::general, InitMethod::greedy_light, SearchMethod::fi_det});
  REQUIRE(rec.ok());
  CHECK(rec.swaps == 1);
  CHECK(rec.norm_init == doctest::Approx(0.5));
  CHECK(rec.norm_final == doctest::Approx(0.25));

  rec = run_method(a, info, {Variant::general, InitMethod::greedy_light, SearchMethod::none}, opt);
  REQUIRE(rec.ok());
  CHECK(rec.swaps == 0);
  CHECK(rec.improvement == 0.0);
  CHECK(rec.norm_init == rec.norm_final);

  for (auto v : {Variant::ah_symmetric, Variant::symmetric}) {
    rec = run_method(a, info, {v, InitMethod::greedy, SearchMethod::det_then_norm});
    REQUIRE(rec.ok());
    CHECK(rec.rank_ok);
    CHECK(rec.improvement >= 0.0);
  }
}

TEST_CASE("per-instance errors are recorded") {
  const auto ns = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  auto rec = run_method(ns, info_for(ns, 1), {Variant::symmetric, InitMethod::greedy, SearchMethod::fi_det});
  CHECK_FALSE(rec.ok());
  CHECK(rec.error.find("symmetric") != std::string::npos);
  CHECK(rec.swaps == 0);

  rec = run_method(ns, info_for(ns, 0), {Variant::general, InitMethod::greedy, SearchMethod::fi_det});
  CHECK_FALSE(rec.ok());
  rec = run_method(ns, info_for(ns, 3), {Variant::general, InitMethod::greedy, SearchMethod::fi_det});
  CHECK_FALSE(rec.ok());

  std::vector<Instance> batch{{info_for(ns, 1, "bad"), ns},
                              {info_for(DenseMatrix::from_rows({{2, 1}, {1, 2}}), 2, "good"),
                               DenseMatrix::from_rows({{2, 1}, {1, 2}})}};
  const auto out = run_batch(batch, {{Variant::symmetric, InitMethod::greedy, SearchMethod::fi_det}});
  REQUIRE(out.size() == 2);
  CHECK_FALSE(out[0].ok());
  CHECK(out[1].ok());
  CHECK(out[1].instance_id == "good");
}

TEST_CASE("run_files reads matrices and records unreadable ones") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ginv_test_experiment";
  fs::remove_all(dir);
  fs::create_directories(dir);
  InstanceSpec spec;
  spec.id = "tiny-a";
  spec.m = spec.n = 5;
  spec.r = 2;
  spec.density = 1.0;
  spec.seed = 9;
  write_matrix_market((dir / "a.mtx").string(), generate(spec), MatrixMarketFormat::array, &spec);
  std::ofstream(dir / "b.mtx") << "not a matrix\n";
  std::ofstream(dir / "notes.txt") << "ignored\n";

  const auto files = collect_matrix_files(dir);
  REQUIRE(files.size() == 2);
  CHECK(files[0].filename() == "a.mtx");
  const auto out = run_files(files, {{Variant::general, InitMethod::greedy, SearchMethod::bi_det}});
  REQUIRE(out.size() == 2);
  CHECK(out[0].ok());
  CHECK(out[0].instance_id == "tiny-a");
  CHECK(out[0].r == 2);
  CHECK(out[0].seed == 9);
  CHECK_FALSE(out[1].ok());
  CHECK(out[1].instance_id == "b");
  CHECK_THROWS_AS(collect_matrix_files(dir / "missing"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("describe without a spec comment") {
  const auto a = DenseMatrix::from_rows({{1, 0, 2}, {2, 0, 4}});
  const auto info = describe(a, std::nullopt, "plain");
  CHECK(info.id == "plain");
  CHECK(info.r == 1);
  CHECK(info.d == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("csv quoting and parsing") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");

  std::istringstream in("a,\"b,c\",\"d\"\"e\"\r\n,\"x\ny\",\r\nlast");
  const auto rows = parse_csv(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"a", "b,c", "d\"e"});
  CHECK(rows[1] == std::vector<std::string>{"", "x\ny", ""});
  CHECK(rows[2] == std::vector<std::string>{"last"});

  std::istringstream bad("\"open");
  CHECK_THROWS_AS(parse_csv(bad), ParseError);
  std::istringstream stray("ab\"c");
  CHECK_THROWS_AS(parse_csv(stray), ParseError);
}

TEST_CASE("records round-trip through csv and json") {
  auto batch = small_instances(7, true);
  batch.resize(3);
  std::vector<MethodSpec> methods = all_methods(Variant::symmetric);
  methods.push_back({Variant::ah_symmetric, InitMethod::greedy, SearchMethod::fi_norm});
  RunOptions opt;
  opt.z_opt[{batch[0].info.id, "sym"}] = 1.5;
  auto recs = run_batch(batch, methods, opt);
  ExperimentRecord err = recs[0];
  err.error = "bad, \"quoted\"\nerror";
  err.swaps = 0;
  err.norm_init = err.norm_final = err.improvement = 0.0;
  err.init_ms = err.search_ms = err.assemble_ms = err.verify_ms = 0.0;
  err.residual = {};
  err.rank_ok = false;
  err.bound_ratio.reset();
  err.z_opt.reset();
  recs.push_back(err);

  CHECK(recs[0].z_opt == 1.5);
  CHECK(*recs[0].bound_ratio == doctest::Approx(recs[0].norm_final / 1.5));

  std::stringstream csv;
  write_records_csv(csv, recs);
  const auto back = read_records_csv(csv);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CAPTURE(i);
    CHECK(same_outcome(back[i], recs[i]));
    CHECK(back[i].search_ms == recs[i].search_ms);
  }

  std::stringstream js;
  write_records_json(js, recs);
  const auto j = nlohmann::json::parse(js.str());
  REQUIRE(j.size() == recs.size());
  CHECK(j[0]["instance_id"] == recs[0].instance_id);
  CHECK(j[0]["norm_final"].get<double>() == recs[0].norm_final);
  CHECK(j[0]["error"].is_null());
  CHECK(j.back()["norm_final"].is_null());
  CHECK(j.back()["error"] == err.error);

  std::istringstream wrong("instance_id,m\r\nx,1\r\n");
  CHECK_THROWS_AS(read_records_csv(wrong), ParseError);
  std::stringstream shortrow;
  write_records_csv(shortrow, {});
  shortrow << "x,1,2\r\n";
  CHECK_THROWS_AS(read_records_csv(shortrow), ParseError);
}

TEST_CASE("z_opt csv") {
  ZOptTable z{{{"a", "gi"}, 2.5}, {{"b,c", "sym"}, 0.125}};
  std::stringstream s;
  write_z_opt_csv(s, z);
  CHECK(read_z_opt_csv(s) == z);
  std::istringstream bad("id,z\r\n");
  CHECK_THROWS_AS(read_z_opt_csv(bad), ParseError);
}

TEST_CASE("batches are deterministic and independent of the worker count") {
  const auto batch = small_instances(11, false);
  const auto methods = all_methods(Variant::general);
  const auto a = run_batch(batch, methods, {}, 1);
  const auto b = run_batch(batch, methods, {}, 3);
  REQUIRE(a.size() == batch.size() * methods.size());
  REQUIRE(b.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_outcome(a[i], b[i]));

  auto strip = [](std::vector<ExperimentRecord> v) {
    for (auto& r : v) r.init_ms = r.search_ms = r.assemble_ms = r.verify_ms = 0.0;
    std::ostringstream out;
    write_records_csv(out, v);
    return out.str();
  };
  CHECK(strip(a) == strip(run_batch(batch, methods, {}, 2)));
}

TEST_CASE("run invariants over random instances") {
  for (auto v : {Variant::general, Variant::ah_symmetric, Variant::symmetric}) {
    const auto batch = small_instances(21, v == Variant::symmetric);
    const auto methods = all_methods(v);
    const auto recs = run_batch(batch, methods);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& r = recs[i];
      CAPTURE(r.instance_id);
      CAPTURE(r.variant);
      CAPTURE(r.search);
      REQUIRE(r.ok());
      CHECK(r.rank_ok);
      CHECK(r.residual[0] < 1e-8);
      CHECK(r.residual[1] < 1e-8);
      if (v == Variant::ah_symmetric) CHECK(r.residual[2] < 1e-8);
      CHECK(r.improvement < 1.0);
      if (r.search != "fi-det" && r.search != "fi-plus-det" && r.search != "bi-det") CHECK(r.improvement >= 0.0);
      if (r.search == "none") CHECK(r.swaps == 0);
    }
    // det-then-norm never ends above its det phase (fi-det from the same start)
    const std::size_t k = methods.size();
    for (std::size_t inst = 0; inst < batch.size(); ++inst)
      for (std::size_t j = 0; j < k; ++j) {
        const auto& r = recs[inst * k + j];
        if (r.search != "det-then-norm") continue;
        const auto& det = recs[inst * k + j - 4];
        REQUIRE(det.search == "fi-det");
        REQUIRE(det.init == r.init);
        CHECK(r.norm_final <= det.norm_final);
        CHECK(r.improvement >= det.improvement);
      }
  }
}

TEST_CASE("aggregate statistics") {
  std::vector<ExperimentRecord> recs;
  std::vector<double> imps;
  for (int i = 0; i < 30; ++i) {
    const double imp = 0.5 + 0.01 * i;
    imps.push_back(imp);
    recs.push_back(fake("i" + std::to_string(i), "greedy", 2.0 + i, imp, static_cast<Index>(i % 4), 10.0 + i));
  }
  auto rows = aggregate(recs);
  REQUIRE(rows.size() == 1);
  const auto& row = rows[0];
  CHECK(row.count == 30);
  CHECK(row.errors == 0);
  double s = 0.0;
  for (double x : imps) s += x;
  const double mu = s / 30.0;
  double ss = 0.0;
  for (double x : imps) ss += (x - mu) * (x - mu);
  CHECK(row.improvement.mean == doctest::Approx(mu));
  CHECK(row.improvement.std == doctest::Approx(std::sqrt(ss / 29.0)));
  CHECK(row.time_ms.mean == doctest::Approx(10.0 + 14.5));
  CHECK(row.swaps.mean == doctest::Approx((8 * 0 + 8 * 1 + 7 * 2 + 7 * 3) / 30.0));
  CHECK_FALSE(row.bound_ratio);
  CHECK_FALSE(row.norm_ratio);

  // pairing with greedy-light and z_opt
  std::vector<ExperimentRecord> paired;
  ZOptTable z;
  for (int i = 0; i < 4; ++i) {
    const std::string id = "p" + std::to_string(i);
    paired.push_back(fake(id, "greedy", 2.0, 0.5, 1, 10.0));
    paired.push_back(fake(id, "greedy-light", 2.0 * (1.0 + 0.1 * i), 0.5, 1, 5.0));
    z[{id, "gi"}] = 1.0;
  }
  auto bad = fake("p9", "greedy-light", 1.0, 0.0, 0, 1.0);
  bad.error = "boom";
  paired.push_back(bad);
  rows = aggregate(paired, z);
  REQUIRE(rows.size() == 2);
  const auto& g = rows[0].init == "greedy" ? rows[0] : rows[1];
  const auto& gl = rows[0].init == "greedy" ? rows[1] : rows[0];
  CHECK(g.count == 4);
  CHECK_FALSE(g.norm_ratio);
  CHECK(gl.count == 4);
  CHECK(gl.errors == 1);
  CHECK(*gl.norm_ratio == doctest::Approx((1.0 + 1.1 + 1.2 + 1.3) / 4));
  CHECK(*gl.time_ratio == doctest::Approx(0.5));
  REQUIRE(gl.bound_ratio);
  CHECK(gl.bound_ratio->mean == doctest::Approx(2.0 * 1.15));
  CHECK(gl.bound_ratio->max == doctest::Approx(2.6));

  std::ostringstream out;
  write_report_csv(out, rows);
  std::istringstream back(out.str());
  const auto parsed = parse_csv(back);
  REQUIRE(parsed.size() == 3);
  CHECK(parsed[0].size() == 21);
  CHECK(parsed[1].size() == 21);

  std::ostringstream empty;
  write_report_csv(empty, aggregate({}));
  std::istringstream eb(empty.str());
  CHECK(parse_csv(eb).size() == 1);

  CHECK_THROWS_AS(aggregate(paired, {{{"p0", "gi"}, 0.0}}), InvalidArgumentError);
}
