#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "riesp/errors.hpp"
#include "riesp/io.hpp"

using namespace riesp;
using ojson = nlohmann::ordered_json;

namespace {

std::vector<std::string> top_keys(const std::string& text) {
  const ojson doc = ojson::parse(text);
  std::vector<std::string> keys;
  for (const auto& item : doc.items()) keys.push_back(item.key());
  return keys;
}

SolveTrace fake_trace() {
  SolveTrace t;
  t.converged = true;
  t.final_res = 4.2e-11;
  t.restarts = 2;
  t.order_estimate = 1.91;
  IterRecord r;
  r.k = 0;
  r.res_norm = 1.5;
  r.eta = 0.3;
  r.eta_hat = 0.25;
  r.cg_iters = 7;
  r.backtrack_steps = 1;
  r.thetas = {0.5};
  t.iterations.push_back(r);
  return t;
}

}  // namespace

TEST_CASE("parse_problem_text accepts the documented schema") {
  const std::string text = R"({
    "eigenvalues": [[1.0, 2.0], [1.0, -2.0], [3.0, 0.0]],
    "singular_values": [3.5, 2.0, 1.0],
    "constraints": {"entries": [[1, 1, 0.5], [2, 3, -0.25]]},
    "nonneg": false,
    "seed": 42
  })";
  const ProblemFile pf = parse_problem_text(text);
  REQUIRE(pf.eigenvalues.size() == 3);
  CHECK(pf.eigenvalues[0] == Complex(1.0, 2.0));
  CHECK(pf.eigenvalues[2] == Complex(3.0, 0.0));
  CHECK(pf.singular_values == std::vector<double>{3.5, 2.0, 1.0});
  REQUIRE(pf.has_constraints);
  REQUIRE(pf.entries.size() == 2);
  CHECK(pf.entries[1].i == 2);
  CHECK(pf.entries[1].j == 3);
  CHECK(pf.entries[1].value == -0.25);
  CHECK_FALSE(pf.nonneg);
  REQUIRE(pf.has_seed);
  CHECK(pf.seed == 42);

  // minimal file: defaults
  const ProblemFile min =
      parse_problem_text(R"({"eigenvalues": [[1,0]], "singular_values": [1]})");
  CHECK_FALSE(min.has_constraints);
  CHECK(min.nonneg);
  CHECK_FALSE(min.has_seed);
}

TEST_CASE("parse_problem_text rejects malformed input") {
  CHECK_THROWS_AS(parse_problem_text("{nope"), ParseError);
  CHECK_THROWS_AS(parse_problem_text("[1, 2]"), ParseError);
  CHECK_THROWS_AS(parse_problem_text(R"({"singular_values": [1]})"), ParseError);
  CHECK_THROWS_AS(parse_problem_text(R"({"eigenvalues": [[1,0]]})"), ParseError);
  // unknown keys, top level and nested
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [[1,0]], "singular_values": [1],
                          "extra": 1})"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [[1,0]], "singular_values": [1],
                          "constraints": {"entries": [], "mask": 1}})"),
                  ParseError);
  // type errors
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [[1]], "singular_values": [1]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [[1, "x"]], "singular_values": [1]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [1], "singular_values": [1]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [[1,0]], "singular_values": ["a"]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [[1,0]], "singular_values": [1],
                          "constraints": {"entries": [[1, 1]]}})"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [[1,0]], "singular_values": [1],
                          "constraints": {"entries": [[1.5, 1, 0]]}})"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [[1,0]], "singular_values": [1],
                          "constraints": [[1, 1, 0]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [[1,0]], "singular_values": [1],
                          "constraints": {}})"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [[1,0]], "singular_values": [1],
                          "nonneg": 1})"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(
                      R"({"eigenvalues": [[1,0]], "singular_values": [1],
                          "seed": 1.5})"),
                  ParseError);
}

TEST_CASE("problem files round-trip through serialization") {
  ProblemFile pf;
  pf.eigenvalues = {{1.0, 2.0}, {1.0, -2.0}, {-0.5, 0.0}};
  pf.singular_values = {3.0, 2.5, 0.125};
  pf.entries = {{1, 2, 0.75}, {3, 3, -1.5}};
  pf.has_constraints = true;
  pf.nonneg = false;
  pf.seed = 12345;
  pf.has_seed = true;

  const std::string text = problem_to_json(pf);
  const ProblemFile back = parse_problem_text(text);
  CHECK(back.eigenvalues == pf.eigenvalues);
  CHECK(back.singular_values == pf.singular_values);
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[0].i == 1);
  CHECK(back.entries[0].j == 2);
  CHECK(back.entries[0].value == 0.75);
  CHECK(back.nonneg == pf.nonneg);
  CHECK(back.has_seed);
  CHECK(back.seed == pf.seed);
  // serialization is a fixed point
  CHECK(problem_to_json(back) == text);

  // without constraints or seed, those keys vanish
  pf.has_constraints = false;
  pf.has_seed = false;
  const std::string bare = problem_to_json(pf);
  CHECK(bare.find("constraints") == std::string::npos);
  CHECK(bare.find("seed") == std::string::npos);
  CHECK(bare.find("nonneg") == std::string::npos);
}

TEST_CASE("parse_complex grammar") {
  CHECK(parse_complex("3") == Complex(3.0, 0.0));
  CHECK(parse_complex(" -1.5 ") == Complex(-1.5, 0.0));
  CHECK(parse_complex("2i") == Complex(0.0, 2.0));
  CHECK(parse_complex("-i") == Complex(0.0, -1.0));
  CHECK(parse_complex("i") == Complex(0.0, 1.0));
  CHECK(parse_complex("+i") == Complex(0.0, 1.0));
  CHECK(parse_complex("1+2i") == Complex(1.0, 2.0));
  CHECK(parse_complex("1-2i") == Complex(1.0, -2.0));
  CHECK(parse_complex("1.5e-3-2e-4i") == Complex(1.5e-3, -2e-4));
  CHECK(parse_complex("-1e2i") == Complex(0.0, -100.0));
  CHECK(parse_complex("2e+3i") == Complex(0.0, 2000.0));
  CHECK(parse_complex("2.5I") == Complex(0.0, 2.5));
  CHECK(parse_complex("3.5+i") == Complex(3.5, 1.0));
  CHECK(parse_complex("3.5-i") == Complex(3.5, -1.0));

  CHECK_THROWS_AS(parse_complex(""), ParseError);
  CHECK_THROWS_AS(parse_complex("abc"), ParseError);
  CHECK_THROWS_AS(parse_complex("1+2"), ParseError);
  CHECK_THROWS_AS(parse_complex("i2"), ParseError);
  CHECK_THROWS_AS(parse_complex("1++2i"), ParseError);
  CHECK_THROWS_AS(parse_complex("e5i"), ParseError);
  CHECK_THROWS_AS(parse_complex("2ii"), ParseError);
}

TEST_CASE("spec_from_entries converts 1-based indices") {
  const std::vector<ConstraintEntry> entries = {{1, 1, 0.5}, {3, 2, -1.0}};
  const DiespSpec spec = spec_from_entries(3, entries, true);
  REQUIRE(spec.index_set.size() == 2);
  CHECK(spec.index_set[0] == std::pair<int, int>{0, 0});
  CHECK(spec.index_set[1] == std::pair<int, int>{2, 1});
  CHECK(spec.values == std::vector<double>{0.5, -1.0});
  CHECK(spec.nonneg);

  CHECK_THROWS_AS(spec_from_entries(3, {{0, 1, 0.0}}, true), ValidationError);
  CHECK_THROWS_AS(spec_from_entries(3, {{1, 4, 0.0}}, true), ValidationError);
  CHECK_THROWS_AS(spec_from_entries(3, {{1, 1, 0.0}, {1, 1, 1.0}}, true),
                  ValidationError);
}

TEST_CASE("round_sig3") {
  CHECK(round_sig3(0.123456) == 0.123);
  CHECK(round_sig3(1234567.0) == 1230000.0);
  CHECK(round_sig3(0.0) == 0.0);
  CHECK(round_sig3(-0.00123456) == -0.00123);
  CHECK(round_sig3(9.999e-5) == 1e-4);
}

TEST_CASE("solve_report_json carries the documented fields in order") {
  const SolveTrace t = fake_trace();
  Mat m(2, 2);
  m << 1, 2, 3, 4;
  const std::string text = solve_report_json(t, m, 3.3e-12, 0.123456);
  const auto keys = top_keys(text);
  const std::vector<std::string> expect = {
      "converged", "iterations", "matrix",   "final_error",
      "residual",  "time_seconds", "restarts", "order_estimate"};
  CHECK(keys == expect);

  const ojson doc = ojson::parse(text);
  CHECK(doc["converged"] == true);
  CHECK(doc["matrix"][1][0] == 3.0);
  CHECK(doc["final_error"] == 3.3e-12);
  CHECK(doc["residual"] == 4.2e-11);
  CHECK(doc["time_seconds"] == 0.123);  // rounded to three significant digits
  CHECK(doc["restarts"] == 2);
  CHECK(doc["order_estimate"] == 1.91);
  REQUIRE(doc["iterations"].size() == 1);
  CHECK(doc["iterations"][0]["k"] == 0);
  CHECK(doc["iterations"][0]["cg_iters"] == 7);
  CHECK(doc["iterations"][0]["thetas"][0] == 0.5);

  // failed solve: failure string appears, no order estimate
  SolveTrace bad;
  bad.converged = false;
  bad.final_res = 0.5;
  bad.failure = FailureReason::cg_stalled;
  const ojson fail = ojson::parse(solve_report_json(bad, Mat::Zero(1, 1), 0, 0));
  CHECK(fail["converged"] == false);
  CHECK(fail["failure"] == "cg_stalled");
  CHECK_FALSE(fail.contains("order_estimate"));

  // determinism apart from the timing argument
  CHECK(solve_report_json(t, m, 3.3e-12, 0.123456) == text);
}

TEST_CASE("diesp_report_json adds stage-one and constraint diagnostics") {
  DiespSolveResult r;
  r.solved = true;
  r.a_new = Mat(2, 2);
  r.a_new << 0.5, 0.25, 0.125, 2.0;
  r.stage1_matrix = Mat::Identity(2, 2);
  r.stage1 = fake_trace();
  r.stage2 = fake_trace();
  r.stage2.restarts = 0;
  const DiespSpec spec =
      DiespSpec::validated(2, {{0, 0}, {1, 1}}, {0.5, 1.75}, true);

  const std::string text = diesp_report_json(r, spec, 1e-11, 0.5);
  const ojson doc = ojson::parse(text);
  CHECK(doc["converged"] == true);
  CHECK(doc["stage1"]["converged"] == true);
  CHECK(doc["stage1"]["restarts"] == 2);
  REQUIRE(doc["constraint_deviations"].size() == 2);
  CHECK(doc["constraint_deviations"][0] == 0.0);
  CHECK(doc["constraint_deviations"][1] == 0.25);
  CHECK(doc["entry_min"] == 0.125);

  // an unsolved stage-one failure leaves the matrix empty: no deviations
  DiespSolveResult none;
  none.stage1.failure = FailureReason::max_outer_exceeded;
  none.stage2.failure = FailureReason::max_outer_exceeded;
  const ojson empty =
      ojson::parse(diesp_report_json(none, spec, 0.0, 0.0));
  CHECK_FALSE(empty.contains("constraint_deviations"));
  CHECK(empty["failure"] == "max_outer_exceeded");
}

TEST_CASE("bench_csv emits the documented header and formatting") {
  BenchRow row;
  row.n = 20;
  row.cg_avg = 208.4;
  row.inm_avg = 8.9;
  row.residual_avg = 9.1e-13;
  row.error_avg = 2.2e-13;
  row.time_avg = 0.0123456;
  row.trials = 10;
  row.failures = 0;
  const std::string csv = bench_csv({row});
  CHECK(csv ==
        "n,CGIt,INMIt,Residual,Error,Time,Trials,Failures\n"
        "20,208.4,8.9,9.1e-13,2.2e-13,0.0123,10,0\n");
  CHECK(bench_csv({}) == "n,CGIt,INMIt,Residual,Error,Time,Trials,Failures\n");

  const ojson arr = ojson::parse(bench_json({row}));
  REQUIRE(arr.is_array());
  CHECK(arr[0]["n"] == 20);
  CHECK(arr[0]["Trials"] == 10);
  CHECK(arr[0]["CGIt"] == 208.4);
}

TEST_CASE("run_bench_size on trivial 1x1 problems") {
  const BenchRow row = run_bench_size(1, 2, 99, SolverConfig{}, 3);
  CHECK(row.n == 1);
  CHECK(row.trials == 2);
  CHECK(row.failures == 0);
  CHECK(row.inm_avg == 0.0);  // the initial guess is already exact
  CHECK(row.cg_avg == 0.0);
  CHECK(row.residual_avg <= 1e-12);

  // deterministic apart from wall-clock timing
  const BenchRow again = run_bench_size(1, 2, 99, SolverConfig{}, 3);
  CHECK(again.residual_avg == row.residual_avg);
  CHECK(again.error_avg == row.error_avg);
}

TEST_CASE("text file round trip and error paths") {
  const std::string path = "/tmp/riesp_io_test.txt";
  write_text_file(path, "hello\nworld\n");
  CHECK(read_text_file(path) == "hello\nworld\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file("/nonexistent/nope.json"), ParseError);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/nope.json", "x"),
                  ParseError);
}
