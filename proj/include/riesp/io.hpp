#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riesp/dense.hpp"
#include "riesp/newton.hpp"
#include "riesp/problems.hpp"

namespace riesp {

// One prescribed entry as it appears in a problem file (1-based indices).
struct ConstraintEntry {
  int i = 0;
  int j = 0;
  double value = 0;
};

struct ProblemFile {
  std::vector<Complex> eigenvalues;
  std::vector<double> singular_values;
  std::vector<ConstraintEntry> entries;
  bool has_constraints = false;
  bool nonneg = true;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

// Strict parser: unknown keys and malformed values raise ParseError.
ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem_file(const std::string& path);
std::string problem_to_json(const ProblemFile& pf);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Accepts "3", "-1.5", "2i", "-i", "1+2i", "1.5e-3-2e-4i".
Complex parse_complex(const std::string& text);

// Converts 1-based file entries to a validated 0-based DiespSpec.
DiespSpec spec_from_entries(int n, const std::vector<ConstraintEntry>& entries,
                            bool nonneg);

double round_sig3(double x);

std::string solve_report_json(const SolveTrace& trace, const Mat& matrix,
                              double final_error, double time_seconds);
std::string diesp_report_json(const DiespSolveResult& result,
                              const DiespSpec& spec, double final_error,
                              double time_seconds);

struct BenchRow {
  int n = 0;
  double cg_avg = 0;
  double inm_avg = 0;
  double residual_avg = 0;
  double error_avg = 0;
  double time_avg = 0;
  int trials = 0;
  int failures = 0;
};

BenchRow run_bench_size(int n, int trials, std::uint64_t master_seed,
                        const SolverConfig& cfg, int restart_budget);
std::string bench_csv(const std::vector<BenchRow>& rows);
std::string bench_json(const std::vector<BenchRow>& rows);

}  // namespace riesp
