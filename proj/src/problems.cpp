#include "riesp/problems.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "riesp/errors.hpp"
#include "riesp/rng.hpp"

namespace riesp {

namespace {

constexpr double kPairTol = 1e-10;
constexpr double kCheckTol = 1e-10;

bool nearly_real(const Complex& z) {
  return std::abs(z.imag()) <= kPairTol * std::max(1.0, std::abs(z));
}

}  // namespace

Spectrum Spectrum::validated(std::vector<Complex> raw) {
  for (const Complex& z : raw)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ValidationError("spectrum: non-finite eigenvalue");

  Spectrum s;
  std::vector<Complex> pos, neg;
  for (const Complex& z : raw) {
    if (nearly_real(z))
      s.reals_.push_back(z.real());
    else if (z.imag() > 0)
      pos.push_back(z);
    else
      neg.push_back(z);
  }
  const auto lex = [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  };
  std::sort(pos.begin(), pos.end(), lex);
  std::sort(neg.begin(), neg.end(), lex);
  if (pos.size() != neg.size())
    throw NotConjugateClosed("spectrum: unmatched complex eigenvalue");

  std::vector<bool> used(neg.size(), false);
  for (const Complex& p : pos) {
    const Complex want = std::conj(p);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < neg.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(neg[i] - want);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    if (!(best <= kPairTol * std::max(1.0, std::abs(p))))
      throw NotConjugateClosed("spectrum: unmatched complex eigenvalue");
    used[best_i] = true;
    // Symmetrize the pair so tiny asymmetries in the input cancel.
    const Complex q = neg[best_i];
    s.pairs_.emplace_back(0.5 * (p.real() + q.real()),
                          0.5 * (p.imag() - q.imag()));
  }

  std::sort(s.pairs_.begin(), s.pairs_.end(),
            [](const Complex& a, const Complex& b) {
              const double ma = std::abs(a), mb = std::abs(b);
              if (ma != mb) return ma > mb;
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });
  std::sort(s.reals_.begin(), s.reals_.end(), [](double a, double b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return a > b;
  });

  for (const Complex& p : s.pairs_) {
    s.values_.push_back(p);
    s.values_.push_back(std::conj(p));
  }
  for (double r : s.reals_) s.values_.emplace_back(r, 0.0);
  return s;
}

double Spectrum::real_sum() const {
  double sum = 0;
  for (const Complex& z : values_) sum += z.real();
  return sum;
}

std::vector<double> Spectrum::moduli_sorted() const {
  std::vector<double> m;
  m.reserve(values_.size());
  for (const Complex& z : values_) m.push_back(std::abs(z));
  std::sort(m.begin(), m.end(), std::greater<double>());
  return m;
}

SingularSpectrum SingularSpectrum::validated(std::vector<double> vals) {
  for (double v : vals) {
    if (!std::isfinite(v))
      throw ValidationError("singular values: non-finite entry");
    if (v < 0) throw ValidationError("singular values: negative entry");
  }
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  SingularSpectrum s;
  s.values_ = std::move(vals);
  return s;
}

WeylHornReport weyl_horn_report(const Spectrum& lam,
                                const SingularSpectrum& sig) {
  if (lam.size() != sig.size())
    throw ValidationError("weyl_horn: size mismatch");
  const int n = lam.size();
  const std::vector<double> m = lam.moduli_sorted();
  const std::vector<double>& s = sig.values();

  double lam_log = 0, sig_log = 0;
  int lam_zero = 0, sig_zero = 0;
  for (int k = 0; k < n; ++k) {
    if (m[k] == 0.0) ++lam_zero; else lam_log += std::log(m[k]);
    if (s[k] == 0.0) ++sig_zero; else sig_log += std::log(s[k]);
    if (k < n - 1) {
      // prefix product inequality: prod |lambda| <= prod sigma
      if (lam_zero > 0) continue;            // left side zero
      const bool fails =
          sig_zero > 0 || lam_log > sig_log + kCheckTol;
      if (fails) {
        std::ostringstream os;
        os << "weyl_horn: prefix " << (k + 1) << " product inequality fails";
        return {false, k + 1, os.str()};
      }
    }
  }
  const bool lhs_zero = lam_zero > 0, rhs_zero = sig_zero > 0;
  if (lhs_zero != rhs_zero)
    return {false, n, "weyl_horn: full products differ (zero on one side only)"};
  if (!lhs_zero && std::abs(lam_log - sig_log) > kCheckTol)
    return {false, n, "weyl_horn: full product equality fails"};
  return {true, -1, ""};
}

bool weyl_horn_check(const Spectrum& lam, const SingularSpectrum& sig) {
  return weyl_horn_report(lam, sig).ok;
}

bool mirsky_check(const Spectrum& lam, const std::vector<double>& diag) {
  if (static_cast<int>(diag.size()) != lam.size())
    throw ValidationError("mirsky: size mismatch");
  double dsum = 0, dabs = 0;
  for (double d : diag) {
    dsum += d;
    dabs += std::abs(d);
  }
  double labs = 0;
  for (const Complex& z : lam.values()) labs += std::abs(z.real());
  const double scale = std::max({1.0, labs, dabs});
  return std::abs(lam.real_sum() - dsum) <= kCheckTol * scale;
}

Mat build_lambda(const Spectrum& lam) {
  const int n = lam.size();
  Mat m = Mat::Zero(n, n);
  int i = 0;
  for (const Complex& p : lam.pairs()) {
    m(i, i) = p.real();
    m(i, i + 1) = p.imag();
    m(i + 1, i) = -p.imag();
    m(i + 1, i + 1) = p.real();
    i += 2;
  }
  for (double r : lam.reals()) {
    m(i, i) = r;
    ++i;
  }
  return m;
}

IespProblem::IespProblem(Spectrum lam, SingularSpectrum sig)
    : lam_(std::move(lam)), sig_(std::move(sig)) {
  if (lam_.size() != sig_.size())
    throw ValidationError("iesp: eigenvalue and singular value counts differ");
  if (lam_.size() == 0) throw ValidationError("iesp: empty spectrum");
  n_ = lam_.size();
  lambda_ = build_lambda(lam_);
  sv_ = Eigen::Map<const Vec>(sig_.values().data(), n_);
  mask_ = upper_fill_mask(lambda_);
}

Mat IespProblem::residual(const Point& x) const {
  return x.u * sv_.asDiagonal() * x.v.transpose() - (lambda_ + x.w);
}

Mat IespProblem::apply_diff(const Point& x, const Tangent& dx) const {
  return dx.du * sv_.asDiagonal() * x.v.transpose() +
         x.u * sv_.asDiagonal() * dx.dv.transpose() - dx.dw;
}

IespTangent IespProblem::apply_adjoint(const Point& x, const Mat& dz) const {
  const Mat us = x.u * sv_.asDiagonal();
  const Mat vs = x.v * sv_.asDiagonal();
  const Mat model = us * x.v.transpose();
  Mat du = 0.5 * (dz * vs - model * (dz.transpose() * x.u));
  Mat dv = 0.5 * (dz.transpose() * us - model.transpose() * (dz * x.v));
  Mat dw = -mask_apply(mask_, dz);
  return {std::move(du), std::move(dv), std::move(dw)};
}

IespPoint IespProblem::retract(const Point& x, const Tangent& dx) const {
  return iesp_retract(x, dx);
}

double IespProblem::inner(const Tangent& a, const Tangent& b) const {
  return triple_inner(a.du, a.dv, a.dw, b.du, b.dv, b.dw);
}

IespPoint IespProblem::initial_guess(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Mat w0 = mask_apply(mask_, gaussian_mat(n_, n_, rng));
  Eigen::BDCSVD<Mat> svd(lambda_ + w0,
                         Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success)
    throw DecompositionFailure("iesp initial guess: SVD did not converge");
  return {svd.matrixU(), svd.matrixV(), std::move(w0)};
}

DiespSpec DiespSpec::validated(int n, std::vector<std::pair<int, int>> idx,
                               std::vector<double> vals, bool nonneg) {
  if (idx.size() != vals.size())
    throw ValidationError("constraints: index and value counts differ");
  std::set<std::pair<int, int>> seen;
  for (const auto& [i, j] : idx) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw ValidationError("constraints: index out of range");
    if (!seen.insert({i, j}).second)
      throw ValidationError("constraints: duplicate index");
  }
  for (double v : vals)
    if (!std::isfinite(v))
      throw ValidationError("constraints: non-finite value");
  DiespSpec s;
  s.index_set = std::move(idx);
  s.values = std::move(vals);
  s.nonneg = nonneg;
  return s;
}

Mat DiespSpec::embed(int n) const {
  Mat m = Mat::Zero(n, n);
  for (std::size_t t = 0; t < index_set.size(); ++t)
    m(index_set[t].first, index_set[t].second) = values[t];
  return m;
}

PatternMask DiespSpec::entry_mask(int n) const {
  return free_except(n, index_set);
}

namespace {

// Adjoint of dq -> [b, dq q^T] with respect to the orthogonal-group tangent
// space at q: skew([b^T, dz]) q, expanded so only transposes of b appear.
Mat bracket_adjoint_q(const Mat& b, const Mat& dz, const Mat& q) {
  return 0.5 * (lie_bracket(b, dz.transpose()) +
                lie_bracket(b.transpose(), dz)) * q;
}

}  // namespace

DiespHProblem::DiespHProblem(Mat a, const DiespSpec& spec) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw ShapeError("diesp: square matrix required");
  n_ = static_cast<int>(a_.rows());
  ahat_ = spec.embed(n_);
  mask_ = spec.entry_mask(n_);
}

Mat DiespHProblem::residual(const Point& x) const {
  return ahat_ + hadamard(x.p, x.p) - x.q * a_ * x.q.transpose();
}

Mat DiespHProblem::apply_diff(const Point& x, const Tangent& dx) const {
  const Mat b = x.q * a_ * x.q.transpose();
  return 2.0 * hadamard(x.p, dx.dp) + lie_bracket(b, dx.dq * x.q.transpose());
}

DiespTangent DiespHProblem::apply_adjoint(const Point& x, const Mat& dz) const {
  const Mat b = x.q * a_ * x.q.transpose();
  Mat dp = mask_apply(mask_, 2.0 * hadamard(x.p, dz));
  Mat dq = bracket_adjoint_q(b, dz, x.q);
  return {std::move(dp), std::move(dq)};
}

DiespPoint DiespHProblem::retract(const Point& x, const Tangent& dx) const {
  return diesp_retract(x, dx);
}

double DiespHProblem::inner(const Tangent& a, const Tangent& b) const {
  return frob_inner(a.dp, b.dp) + frob_inner(a.dq, b.dq);
}

DiespPoint DiespHProblem::initial_guess(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Mat q0 = qf(gaussian_mat(n_, n_, rng)).q;
  const Mat m0 = q0 * a_ * q0.transpose() - ahat_;
  Mat p0 = Mat::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (mask_.free_at(i, j))
        p0(i, j) = std::sqrt(std::max(std::abs(m0(i, j)), 0.1));
  return {std::move(p0), std::move(q0)};
}

DiespGProblem::DiespGProblem(Mat a, const DiespSpec& spec) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw ShapeError("diesp: square matrix required");
  n_ = static_cast<int>(a_.rows());
  ahat_ = spec.embed(n_);
  mask_ = spec.entry_mask(n_);
}

Mat DiespGProblem::residual(const Point& x) const {
  return ahat_ + x.p - x.q * a_ * x.q.transpose();
}

Mat DiespGProblem::apply_diff(const Point& x, const Tangent& dx) const {
  const Mat b = x.q * a_ * x.q.transpose();
  return dx.dp + lie_bracket(b, dx.dq * x.q.transpose());
}

DiespTangent DiespGProblem::apply_adjoint(const Point& x, const Mat& dz) const {
  const Mat b = x.q * a_ * x.q.transpose();
  Mat dp = mask_apply(mask_, dz);
  Mat dq = bracket_adjoint_q(b, dz, x.q);
  return {std::move(dp), std::move(dq)};
}

DiespPoint DiespGProblem::retract(const Point& x, const Tangent& dx) const {
  return diesp_retract(x, dx);
}

double DiespGProblem::inner(const Tangent& a, const Tangent& b) const {
  return frob_inner(a.dp, b.dp) + frob_inner(a.dq, b.dq);
}

DiespPoint DiespGProblem::initial_guess(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Mat q0 = qf(gaussian_mat(n_, n_, rng)).q;
  Mat s0 = mask_apply(mask_, q0 * a_ * q0.transpose() - ahat_);
  return {std::move(s0), std::move(q0)};
}

IespSolveResult solve_iesp(const IespProblem& prob, std::uint64_t seed,
                           const SolverConfig& cfg, int restart_budget) {
  IespSolveResult result;
  for (int attempt = 0;; ++attempt) {
    IespPoint x0 = prob.initial_guess(mix_seed(seed, attempt));
    SolveReport<IespProblem> rep = newton_solve(prob, x0, cfg);
    rep.trace.restarts = attempt;
    result.trace = std::move(rep.trace);
    result.point = std::move(rep.final_point);
    if (result.trace.converged || attempt >= restart_budget) break;
  }
  result.a_new = prob.lambda_mat() + result.point.w;
  return result;
}

DiespSolveResult solve_diesp(const Spectrum& lam, const SingularSpectrum& sig,
                             const DiespSpec& spec, std::uint64_t seed,
                             const SolverConfig& cfg, int restart_budget) {
  DiespSolveResult result;
  IespProblem stage1(lam, sig);
  IespSolveResult s1 =
      solve_iesp(stage1, mix_seed(seed, 1), cfg, restart_budget);
  result.stage1 = s1.trace;
  result.stage1_matrix = s1.a_new;
  if (!s1.trace.converged) return result;

  const Mat& a = s1.a_new;
  const auto run_stage2 = [&](const auto& prob) {
    for (int attempt = 0;; ++attempt) {
      DiespPoint x0 = prob.initial_guess(mix_seed(seed, 2, attempt));
      auto rep = newton_solve(prob, x0, cfg);
      rep.trace.restarts = attempt;
      result.stage2 = std::move(rep.trace);
      if (result.stage2.converged || attempt >= restart_budget) {
        result.a_new =
            rep.final_point.q * a * rep.final_point.q.transpose();
        break;
      }
    }
  };
  if (spec.nonneg)
    run_stage2(DiespHProblem(a, spec));
  else
    run_stage2(DiespGProblem(a, spec));
  result.solved = result.stage2.converged;
  return result;
}

double final_error_iesp(const Mat& a_new, const Spectrum& lam,
                        const SingularSpectrum& sig) {
  std::vector<Complex> got = eig_all(a_new);
  std::vector<Complex> want = lam.values();
  const auto cmp = [](const Complex& a, const Complex& b) {
    const double ka = std::round(a.real() * 1e8);
    const double kb = std::round(b.real() * 1e8);
    if (ka != kb) return ka < kb;
    return a.imag() < b.imag();
  };
  std::sort(got.begin(), got.end(), cmp);
  std::sort(want.begin(), want.end(), cmp);
  double e2 = 0;
  for (std::size_t i = 0; i < got.size(); ++i) e2 += std::norm(got[i] - want[i]);

  const std::vector<double> sv = svd_values(a_new);
  const std::vector<double>& tv = sig.values();
  double s2 = 0;
  for (std::size_t i = 0; i < sv.size(); ++i) {
    const double d = sv[i] - tv[i];
    s2 += d * d;
  }
  return std::sqrt(e2) + std::sqrt(s2);
}

double final_error_diesp(const Mat& a_new, const Spectrum& lam,
                         const SingularSpectrum& sig, const DiespSpec& spec) {
  double c2 = 0;
  for (std::size_t t = 0; t < spec.index_set.size(); ++t) {
    const double d =
        a_new(spec.index_set[t].first, spec.index_set[t].second) -
        spec.values[t];
    c2 += d * d;
  }
  return final_error_iesp(a_new, lam, sig) + std::sqrt(c2);
}

std::pair<Spectrum, SingularSpectrum> random_problem(int n,
                                                     std::uint64_t seed) {
  if (n <= 0) throw ValidationError("random_problem: n must be positive");
  std::mt19937_64 rng(seed);
  const Mat a = gaussian_mat(n, n, rng);
  return {Spectrum::validated(eig_all(a)),
          SingularSpectrum::validated(svd_values(a))};
}

}  // namespace riesp
