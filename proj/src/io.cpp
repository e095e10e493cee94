#include "riesp/io.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "riesp/errors.hpp"
#include "riesp/rng.hpp"

namespace riesp {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, const char* where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        ok = true;
        break;
      }
    if (!ok)
      throw ParseError(std::string("unknown key \"") + item.key() + "\" in " +
                       where);
  }
}

double as_finite_number(const json& v, const char* what) {
  if (!v.is_number())
    throw ParseError(std::string(what) + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d))
    throw ParseError(std::string(what) + ": non-finite value");
  return d;
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json trace_json(const SolveTrace& trace) {
  json iters = json::array();
  for (const IterRecord& r : trace.iterations) {
    json it;
    it["k"] = r.k;
    it["res_norm"] = r.res_norm;
    it["eta"] = r.eta;
    it["eta_hat"] = r.eta_hat;
    it["cg_iters"] = r.cg_iters;
    it["backtrack_steps"] = r.backtrack_steps;
    it["thetas"] = r.thetas;
    iters.push_back(std::move(it));
  }
  return iters;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (!in.good() && !in.eof()) throw ParseError("cannot read file: " + path);
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << text;
  if (!out.good()) throw ParseError("cannot write file: " + path);
}

ProblemFile parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("problem file: expected a JSON object");
  reject_unknown_keys(doc, "problem file",
                      {"eigenvalues", "singular_values", "constraints",
                       "nonneg", "seed"});
  if (!doc.contains("eigenvalues") || !doc.contains("singular_values"))
    throw ParseError(
        "problem file: \"eigenvalues\" and \"singular_values\" are required");

  ProblemFile pf;
  const json& ev = doc["eigenvalues"];
  if (!ev.is_array()) throw ParseError("eigenvalues: expected an array");
  for (const json& item : ev) {
    if (!item.is_array() || item.size() != 2)
      throw ParseError("eigenvalues: each entry must be a [re, im] pair");
    pf.eigenvalues.emplace_back(as_finite_number(item[0], "eigenvalues"),
                                as_finite_number(item[1], "eigenvalues"));
  }
  const json& sv = doc["singular_values"];
  if (!sv.is_array()) throw ParseError("singular_values: expected an array");
  for (const json& item : sv)
    pf.singular_values.push_back(as_finite_number(item, "singular_values"));

  if (doc.contains("constraints")) {
    const json& c = doc["constraints"];
    if (!c.is_object()) throw ParseError("constraints: expected an object");
    reject_unknown_keys(c, "constraints", {"entries"});
    if (!c.contains("entries"))
      throw ParseError("constraints: \"entries\" is required");
    const json& entries = c["entries"];
    if (!entries.is_array())
      throw ParseError("constraints.entries: expected an array");
    for (const json& item : entries) {
      if (!item.is_array() || item.size() != 3)
        throw ParseError(
            "constraints.entries: each entry must be an [i, j, value] triple");
      if (!item[0].is_number_integer() || !item[1].is_number_integer())
        throw ParseError("constraints.entries: indices must be integers");
      pf.entries.push_back({item[0].get<int>(), item[1].get<int>(),
                            as_finite_number(item[2], "constraints.entries")});
    }
    pf.has_constraints = true;
  }
  if (doc.contains("nonneg")) {
    if (!doc["nonneg"].is_boolean())
      throw ParseError("nonneg: expected a boolean");
    pf.nonneg = doc["nonneg"].get<bool>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer())
      throw ParseError("seed: expected an integer");
    pf.seed = doc["seed"].get<std::uint64_t>();
    pf.has_seed = true;
  }
  return pf;
}

ProblemFile load_problem_file(const std::string& path) {
  return parse_problem_text(read_text_file(path));
}

std::string problem_to_json(const ProblemFile& pf) {
  json doc;
  json ev = json::array();
  for (const Complex& z : pf.eigenvalues)
    ev.push_back(json::array({z.real(), z.imag()}));
  doc["eigenvalues"] = std::move(ev);
  doc["singular_values"] = pf.singular_values;
  if (pf.has_constraints) {
    json entries = json::array();
    for (const ConstraintEntry& e : pf.entries)
      entries.push_back(json::array({e.i, e.j, e.value}));
    doc["constraints"] = json{{"entries", std::move(entries)}};
    doc["nonneg"] = pf.nonneg;
  }
  if (pf.has_seed) doc["seed"] = pf.seed;
  return doc.dump(2) + "\n";
}

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty number");

  const auto to_double = [](const std::string& t) {
    if (t.empty()) throw ParseError("malformed number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
      throw ParseError("malformed number: " + t);
    return v;
  };

  if (s.back() != 'i' && s.back() != 'I') return {to_double(s), 0.0};

  const std::string body = s.substr(0, s.size() - 1);
  // Split before the sign of the imaginary part, skipping exponent signs.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if (body[k] != '+' && body[k] != '-') continue;
    const char prev = body[k - 1];
    if (prev == 'e' || prev == 'E') continue;
    split = k;
    break;
  }
  const auto imag_part = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return to_double(t);
  };
  if (split == std::string::npos) return {0.0, imag_part(body)};
  return {to_double(body.substr(0, split)), imag_part(body.substr(split))};
}

DiespSpec spec_from_entries(int n, const std::vector<ConstraintEntry>& entries,
                            bool nonneg) {
  std::vector<std::pair<int, int>> idx;
  std::vector<double> vals;
  for (const ConstraintEntry& e : entries) {
    if (e.i < 1 || e.i > n || e.j < 1 || e.j > n)
      throw ValidationError("constraints: index out of range (1-based)");
    idx.emplace_back(e.i - 1, e.j - 1);
    vals.push_back(e.value);
  }
  return DiespSpec::validated(n, std::move(idx), std::move(vals), nonneg);
}

double round_sig3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return std::strtod(buf, nullptr);
}

std::string solve_report_json(const SolveTrace& trace, const Mat& matrix,
                              double final_error, double time_seconds) {
  json doc;
  doc["converged"] = trace.converged;
  doc["iterations"] = trace_json(trace);
  doc["matrix"] = matrix_json(matrix);
  doc["final_error"] = final_error;
  doc["residual"] = trace.final_res;
  doc["time_seconds"] = round_sig3(time_seconds);
  doc["restarts"] = trace.restarts;
  if (trace.order_estimate) doc["order_estimate"] = *trace.order_estimate;
  if (trace.failure != FailureReason::none)
    doc["failure"] = to_string(trace.failure);
  return doc.dump(2) + "\n";
}

std::string diesp_report_json(const DiespSolveResult& result,
                              const DiespSpec& spec, double final_error,
                              double time_seconds) {
  json doc;
  doc["converged"] = result.solved;
  doc["iterations"] = trace_json(result.stage2);
  doc["matrix"] = matrix_json(result.a_new);
  doc["final_error"] = final_error;
  doc["residual"] = result.stage2.final_res;
  doc["time_seconds"] = round_sig3(time_seconds);
  doc["restarts"] = result.stage2.restarts;

  json s1;
  s1["converged"] = result.stage1.converged;
  s1["residual"] = result.stage1.final_res;
  s1["iterations"] = trace_json(result.stage1);
  s1["restarts"] = result.stage1.restarts;
  doc["stage1"] = std::move(s1);

  if (result.a_new.size() > 0) {
    json dev = json::array();
    for (std::size_t t = 0; t < spec.index_set.size(); ++t)
      dev.push_back(result.a_new(spec.index_set[t].first,
                                 spec.index_set[t].second) -
                    spec.values[t]);
    doc["constraint_deviations"] = std::move(dev);
    doc["entry_min"] = result.a_new.minCoeff();
  }
  if (result.stage2.failure != FailureReason::none)
    doc["failure"] = to_string(result.stage2.failure);
  return doc.dump(2) + "\n";
}

BenchRow run_bench_size(int n, int trials, std::uint64_t master_seed,
                        const SolverConfig& cfg, int restart_budget) {
  BenchRow row;
  row.n = n;
  row.trials = trials;
  double cg = 0, inm = 0, res = 0, err = 0, secs = 0;
  int converged = 0;
  for (int trial = 0; trial < trials; ++trial) {
    try {
      const auto [lam, sig] =
          random_problem(n, mix_seed(master_seed, n, 2 * trial));
      IespProblem prob(lam, sig);
      const auto t0 = std::chrono::steady_clock::now();
      IespSolveResult r = solve_iesp(
          prob, mix_seed(master_seed, n, 2 * trial + 1), cfg, restart_budget);
      const auto t1 = std::chrono::steady_clock::now();
      if (!r.trace.converged) {
        ++row.failures;
        continue;
      }
      ++converged;
      cg += r.trace.total_cg_iters();
      inm += static_cast<double>(r.trace.iterations.size());
      res += r.trace.final_res;
      err += final_error_iesp(r.a_new, lam, sig);
      secs += std::chrono::duration<double>(t1 - t0).count();
    } catch (const std::exception&) {
      ++row.failures;
    }
  }
  if (converged > 0) {
    row.cg_avg = cg / converged;
    row.inm_avg = inm / converged;
    row.residual_avg = res / converged;
    row.error_avg = err / converged;
    row.time_avg = secs / converged;
  }
  return row;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "n,CGIt,INMIt,Residual,Error,Time,Trials,Failures\n";
  char buf[256];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.6g,%.6g,%.6g,%.6g,%.3g,%d,%d\n", r.n,
                  r.cg_avg, r.inm_avg, r.residual_avg, r.error_avg,
                  round_sig3(r.time_avg), r.trials, r.failures);
    out += buf;
  }
  return out;
}

std::string bench_json(const std::vector<BenchRow>& rows) {
  json arr = json::array();
  for (const BenchRow& r : rows) {
    json row;
    row["n"] = r.n;
    row["CGIt"] = r.cg_avg;
    row["INMIt"] = r.inm_avg;
    row["Residual"] = r.residual_avg;
    row["Error"] = r.error_avg;
    row["Time"] = round_sig3(r.time_avg);
    row["Trials"] = r.trials;
    row["Failures"] = r.failures;
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

}  // namespace riesp
