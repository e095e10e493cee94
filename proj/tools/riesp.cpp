#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "riesp/errors.hpp"
#include "riesp/io.hpp"
#include "riesp/newton.hpp"
#include "riesp/problems.hpp"
#include "riesp/rng.hpp"
#include "riesp/twobytwo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;          // file/parse problems
constexpr int kExitValidation = 2;  // data fails the validators
constexpr int kExitSolver = 3;      // no convergence / infeasible

struct CommonOpts {
  riesp::SolverConfig cfg;
  int restarts = 5;
  std::uint64_t seed = 0;
  std::string out;
};

void add_solver_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--epsilon", opts.cfg.epsilon, "Residual stopping tolerance");
  cmd->add_option("--eta-max", opts.cfg.eta_max, "Forcing term cap");
  cmd->add_option("--theta-min", opts.cfg.theta_min, "Backtracking damping floor");
  cmd->add_option("--theta-max", opts.cfg.theta_max, "Backtracking damping cap");
  cmd->add_option("--t", opts.cfg.t, "Sufficient-decrease constant");
  cmd->add_option("--max-outer", opts.cfg.max_outer, "Outer iteration cap");
  cmd->add_option("--sigma-max", opts.cfg.sigma_max,
                  "Cap for the residual-proportional normal-equation shift "
                  "(0 disables the perturbed variant)");
  cmd->add_option("--restarts", opts.restarts,
                  "Fresh initial guesses tried after a failed solve");
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    riesp::write_text_file(out_path, text);
}

std::uint64_t effective_seed(const riesp::ProblemFile& pf,
                             const CLI::Option* seed_opt,
                             std::uint64_t flag_seed) {
  if (seed_opt->count() > 0) return flag_seed;
  if (pf.has_seed) return pf.seed;
  return 0;
}

// Diagonal values in row order when every (i,i) is constrained, else empty.
std::vector<double> full_diagonal(int n, const riesp::DiespSpec& spec) {
  std::vector<double> diag(n, 0.0);
  std::vector<bool> seen(n, false);
  for (std::size_t t = 0; t < spec.index_set.size(); ++t) {
    const auto [i, j] = spec.index_set[t];
    if (i == j) {
      diag[i] = spec.values[t];
      seen[i] = true;
    }
  }
  for (bool s : seen)
    if (!s) return {};
  return diag;
}

int run_solve(const std::string& path, const CommonOpts& opts,
              const CLI::Option* seed_opt) {
  const riesp::ProblemFile pf = riesp::load_problem_file(path);
  const riesp::Spectrum lam = riesp::Spectrum::validated(pf.eigenvalues);
  const riesp::SingularSpectrum sig =
      riesp::SingularSpectrum::validated(pf.singular_values);
  const riesp::WeylHornReport wh = riesp::weyl_horn_report(lam, sig);
  if (!wh.ok) {
    std::fprintf(stderr, "validation failed: %s\n", wh.detail.c_str());
    return kExitValidation;
  }

  riesp::IespProblem prob(lam, sig);
  const std::uint64_t seed = effective_seed(pf, seed_opt, opts.seed);
  const auto t0 = std::chrono::steady_clock::now();
  riesp::IespSolveResult result =
      riesp::solve_iesp(prob, seed, opts.cfg, opts.restarts);
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();

  const double err = riesp::final_error_iesp(result.a_new, lam, sig);
  emit(opts.out, riesp::solve_report_json(result.trace, result.a_new, err, secs));
  if (!result.trace.converged) {
    std::fprintf(stderr, "solver failed: %s\n",
                 riesp::to_string(result.trace.failure));
    return kExitSolver;
  }
  return kExitOk;
}

int run_solve_diesp(const std::string& path, const CommonOpts& opts,
                    const CLI::Option* seed_opt) {
  const riesp::ProblemFile pf = riesp::load_problem_file(path);
  if (!pf.has_constraints) {
    std::fprintf(stderr,
                 "validation failed: solve-diesp requires a \"constraints\" "
                 "section\n");
    return kExitValidation;
  }
  const riesp::Spectrum lam = riesp::Spectrum::validated(pf.eigenvalues);
  const riesp::SingularSpectrum sig =
      riesp::SingularSpectrum::validated(pf.singular_values);
  const riesp::WeylHornReport wh = riesp::weyl_horn_report(lam, sig);
  if (!wh.ok) {
    std::fprintf(stderr, "validation failed: %s\n", wh.detail.c_str());
    return kExitValidation;
  }
  const int n = lam.size();
  const riesp::DiespSpec spec =
      riesp::spec_from_entries(n, pf.entries, pf.nonneg);
  const std::vector<double> diag = full_diagonal(n, spec);
  if (!diag.empty() && !riesp::mirsky_check(lam, diag)) {
    std::fprintf(stderr,
                 "validation failed: eigenvalue sum does not match the "
                 "prescribed diagonal sum\n");
    return kExitValidation;
  }
  if (n == 2 && !diag.empty()) {
    const riesp::TwoByTwoData data = riesp::TwoByTwoData::validated(
        lam.values()[0], lam.values()[1], sig.values()[0], sig.values()[1],
        diag[0], diag[1]);
    const riesp::FeasibilityVerdict v =
        riesp::feasible_three_verdict(data, spec.nonneg);
    if (!v.ok) {
      std::fprintf(stderr, "infeasible: %s\n", v.reason.c_str());
      return kExitSolver;
    }
  }

  const std::uint64_t seed = effective_seed(pf, seed_opt, opts.seed);
  const auto t0 = std::chrono::steady_clock::now();
  riesp::DiespSolveResult result =
      riesp::solve_diesp(lam, sig, spec, seed, opts.cfg, opts.restarts);
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();

  const double err =
      result.solved ? riesp::final_error_diesp(result.a_new, lam, sig, spec)
                    : std::numeric_limits<double>::quiet_NaN();
  emit(opts.out, riesp::diesp_report_json(result, spec, err, secs));
  if (!result.solved) {
    const riesp::SolveTrace& failed =
        result.stage1.converged ? result.stage2 : result.stage1;
    std::fprintf(stderr, "solver failed (%s): %s\n",
                 result.stage1.converged ? "stage 2" : "stage 1",
                 riesp::to_string(failed.failure));
    return kExitSolver;
  }
  return kExitOk;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw riesp::ParseError("malformed number: " + s);
  return v;
}

int run_check2x2(const std::vector<std::string>& scalars, bool nonneg,
                 bool construct) {
  const riesp::Complex l1 = riesp::parse_complex(scalars[0]);
  const riesp::Complex l2 = riesp::parse_complex(scalars[1]);
  const double s1 = parse_real(scalars[2]);
  const double s2 = parse_real(scalars[3]);
  const double d1 = parse_real(scalars[4]);
  const double d2 = parse_real(scalars[5]);
  const riesp::TwoByTwoData data =
      riesp::TwoByTwoData::validated(l1, l2, s1, s2, d1, d2);
  const riesp::FeasibilityVerdict v =
      riesp::feasible_three_verdict(data, nonneg);
  if (!v.ok) {
    std::printf("infeasible: %s\n", v.reason.c_str());
    return kExitSolver;
  }
  std::printf("feasible\n");
  if (construct) {
    const riesp::Mat m = riesp::construct_2x2(data, nonneg);
    std::printf("[[%.17g, %.17g], [%.17g, %.17g]]\n", m(0, 0), m(0, 1), m(1, 0),
                m(1, 1));
  }
  return kExitOk;
}

int run_gen(int n, std::uint64_t seed, const std::string& out_path) {
  const auto [lam, sig] = riesp::random_problem(n, seed);
  riesp::ProblemFile pf;
  pf.eigenvalues = lam.values();
  pf.singular_values = sig.values();
  pf.seed = seed;
  pf.has_seed = true;
  emit(out_path, riesp::problem_to_json(pf));
  return kExitOk;
}

int run_bench(const std::vector<int>& sizes, int trials, const CommonOpts& opts,
              const std::string& format) {
  std::vector<riesp::BenchRow> rows;
  for (int n : sizes)
    rows.push_back(
        riesp::run_bench_size(n, trials, opts.seed, opts.cfg, opts.restarts));
  emit(opts.out, format == "json" ? riesp::bench_json(rows)
                                  : riesp::bench_csv(rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse eigenvalue/singular value problem solver"};
  app.require_subcommand(1);

  CommonOpts solve_opts, diesp_opts, bench_opts;
  std::string solve_path, diesp_path;

  CLI::App* solve = app.add_subcommand(
      "solve", "Solve an IESP from a problem file");
  solve->add_option("file", solve_path, "Problem JSON file")->required();
  CLI::Option* solve_seed =
      solve->add_option("--seed", solve_opts.seed, "Initial-guess seed");
  solve->add_option("--out", solve_opts.out, "Report path (default stdout)");
  add_solver_flags(solve, solve_opts);

  CLI::App* sd = app.add_subcommand(
      "solve-diesp", "Solve an IESP with prescribed entries");
  sd->add_option("file", diesp_path, "Problem JSON file")->required();
  CLI::Option* sd_seed =
      sd->add_option("--seed", diesp_opts.seed, "Initial-guess seed");
  sd->add_option("--out", diesp_opts.out, "Report path (default stdout)");
  add_solver_flags(sd, diesp_opts);

  std::vector<std::string> scalars;
  bool nonneg = false, construct = false;
  CLI::App* check = app.add_subcommand(
      "check2x2",
      "Feasibility of 2x2 data: lam1 lam2 sig1 sig2 d1 d2 "
      "(eigenvalues may be complex, e.g. 1+2i)");
  check->add_option("data", scalars, "lam1 lam2 sig1 sig2 d1 d2")
      ->expected(6)
      ->required();
  check->add_flag("--nonneg", nonneg, "Require an entrywise nonnegative matrix");
  check->add_flag("--construct", construct, "Print a realizing matrix");

  int gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand(
      "gen", "Generate a random consistent problem file");
  gen->add_option("--n", gen_n, "Matrix size")->required();
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output path (default stdout)");

  std::vector<int> sizes{20};
  int trials = 10;
  std::string format = "csv";
  CLI::App* bench = app.add_subcommand(
      "bench", "Run seeded random-problem sweeps and tabulate averages");
  bench->add_option("--sizes", sizes, "Problem sizes");
  bench->add_option("--trials", trials, "Trials per size");
  bench->add_option("--seed", bench_opts.seed, "Master seed");
  bench->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--out", bench_opts.out, "Output path (default stdout)");
  add_solver_flags(bench, bench_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (solve->parsed()) return run_solve(solve_path, solve_opts, solve_seed);
    if (sd->parsed()) return run_solve_diesp(diesp_path, diesp_opts, sd_seed);
    if (check->parsed()) return run_check2x2(scalars, nonneg, construct);
    if (gen->parsed()) return run_gen(gen_n, gen_seed, gen_out);
    if (bench->parsed()) return run_bench(sizes, trials, bench_opts, format);
  } catch (const riesp::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const riesp::ValidationError& e) {
    std::fprintf(stderr, "validation failed: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
  return kExitOk;
}
