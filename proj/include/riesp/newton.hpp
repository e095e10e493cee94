#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "riesp/dense.hpp"
#include "riesp/errors.hpp"

namespace riesp {

/// Parameters of the inexact Newton backtracking iteration.
struct SolverConfig {
  double eta_max = 0.9;        // cap on the forcing term, in [0,1)
  double theta_min = 0.1;      // backtracking damping bounds
  double theta_max = 0.9;
  double t = 1e-4;             // sufficient-decrease constant, in [0,1)
  double epsilon = 1e-10;      // residual norm stopping threshold
  int max_outer = 200;
  int cg_cap = 0;              // CG iteration cap per outer step; 0 means n*n
  double sigma_max = 0.0;      // >0 enables the shifted normal equations
  double inexact_floor = 1e-12;
  int backtrack_cap = 50;
};

enum class FailureReason {
  none,
  cg_stalled,
  line_search_failed,
  invalid_descent,
  retraction_failed,
  numerical_breakdown,
  max_outer_exceeded,
};

const char* to_string(FailureReason r);

struct IterRecord {
  int k = 0;
  double res_norm = 0.0;  // ||F(X_k)|| entering the iteration
  double eta = 0.0;       // eta_k after backtracking
  double eta_hat = 0.0;   // ||F + DF[step]|| / ||F|| for the undamped step
  int cg_iters = 0;
  int backtrack_steps = 0;
  std::vector<double> thetas;
};

struct SolveTrace {
  bool converged = false;
  std::vector<IterRecord> iterations;
  double final_res = std::numeric_limits<double>::infinity();
  std::optional<double> order_estimate;
  int restarts = 0;
  FailureReason failure = FailureReason::none;

  int total_cg_iters() const {
    int s = 0;
    for (const auto& it : iterations) s += it.cg_iters;
    return s;
  }
};

/// A constraint map F from a product manifold into n x n matrices, with its
/// differential, adjoint differential, retraction and metric.
template <class P>
concept NewtonProblem = requires(const P& p, const typename P::Point& x,
                                 const typename P::Tangent& dx, const Mat& z,
                                 double s) {
  { p.residual(x) } -> std::convertible_to<Mat>;
  { p.apply_diff(x, dx) } -> std::convertible_to<Mat>;
  { p.apply_adjoint(x, z) } -> std::convertible_to<typename P::Tangent>;
  { p.retract(x, dx) } -> std::convertible_to<typename P::Point>;
  { p.inner(dx, dx) } -> std::convertible_to<double>;
  { p.dim() } -> std::convertible_to<int>;
  { dx.scaled(s) } -> std::convertible_to<typename P::Tangent>;
};

template <class P>
struct SolveReport {
  SolveTrace trace;
  typename P::Point final_point;
};

/// Damping factor minimizing the parabola through f(0), f'(0), f(1), clamped
/// to [theta_min, theta_max]; theta_max when the model curvature is not
/// positive. Throws InvalidDescent when fp0 >= 0.
double theta_select(double f0, double fp0, double f1, double theta_min,
                    double theta_max);

/// Convergence-order estimate from a residual-norm history: consecutive
/// log-ratio quotients averaged over the final two triples of the trailing
/// strictly decreasing run. Values below 1e-13 are dropped as rounding noise.
/// Returns nullopt when fewer than four usable values remain.
std::optional<double> order_estimate(const std::vector<double>& res_norms);

struct CgOutcome {
  Mat dz;
  int iters = 0;
};

/// Matrix-free CG on the (optionally shifted) normal equations
///   (DF o DF* + sigma id)[dz] = rhs,
/// stopped at absolute residual norm tol. The recurrence residual is verified
/// against the true operator residual before acceptance. Throws CgStalled at
/// the iteration cap and NumericalBreakdown on loss of positive definiteness.
template <NewtonProblem P>
CgOutcome cg_normal_solve(const P& prob, const typename P::Point& x,
                          const Mat& rhs, double tol, double sigma, int cap) {
  if (!(tol > 0)) throw ValidationError("cg_normal_solve: tol must be positive");
  if (cap <= 0) throw ValidationError("cg_normal_solve: cap must be positive");
  const auto apply_normal = [&](const Mat& z) {
    Mat gz = prob.apply_diff(x, prob.apply_adjoint(x, z));
    if (sigma > 0) gz += sigma * z;
    return gz;
  };

  Mat z = Mat::Zero(rhs.rows(), rhs.cols());
  Mat r = rhs;
  double rho = frob_inner(r, r);
  if (std::sqrt(rho) <= tol) return {std::move(z), 0};
  Mat p = r;
  int iters = 0;
  while (true) {
    if (iters >= cap) throw CgStalled("cg_normal_solve: iteration cap reached");
    const Mat q = apply_normal(p);
    const double pq = frob_inner(p, q);
    if (!std::isfinite(pq) || pq <= 0)
      throw NumericalBreakdown("cg_normal_solve: operator lost positive definiteness");
    const double alpha = rho / pq;
    z += alpha * p;
    r -= alpha * q;
    ++iters;
    const double rho_next = frob_inner(r, r);
    if (!std::isfinite(rho_next))
      throw NumericalBreakdown("cg_normal_solve: non-finite iterate");
    if (std::sqrt(rho_next) <= tol) {
      // Guard against recurrence drift: certify with the true residual.
      Mat true_r = rhs - apply_normal(z);
      if (true_r.norm() <= tol) return {std::move(z), iters};
      r = std::move(true_r);
      rho = frob_inner(r, r);
      p = r;
      continue;
    }
    const double beta = rho_next / rho;
    rho = rho_next;
    p = r + beta * p;
  }
}

template <class P>
struct BacktrackOutcome {
  typename P::Tangent step;
  typename P::Point next;
  Mat next_residual;
  double next_norm = 0.0;
  double eta = 0.0;
  int steps = 0;
  std::vector<double> thetas;
};

/// Damp the inexact Newton step until the trial point satisfies the
/// sufficient-decrease test ||F(R_x(step))|| < (1 - t(1 - eta)) ||F(x)||.
/// Each rejection multiplies the step by a parabolic-model theta and updates
/// eta <- 1 - theta (1 - eta). The undamped step is tried first.
template <NewtonProblem P>
BacktrackOutcome<P> backtrack(const P& prob, const typename P::Point& x,
                              const Mat& fx, double fnorm,
                              const typename P::Tangent& step_hat,
                              const Mat& diff_hat, double eta_hat,
                              const SolverConfig& cfg) {
  const double f0 = fnorm * fnorm;
  const double fp0_full = 2.0 * frob_inner(diff_hat, fx);
  BacktrackOutcome<P> out;
  out.eta = eta_hat;
  double big_theta = 1.0;
  for (int step = 0;; ++step) {
    typename P::Tangent trial = step_hat.scaled(big_theta);
    typename P::Point xn = prob.retract(x, trial);
    Mat fn = prob.residual(xn);
    const double fn_norm = fn.norm();
    if (!std::isfinite(fn_norm))
      throw NumericalBreakdown("backtrack: non-finite residual");
    if (fn_norm < (1.0 - cfg.t * (1.0 - out.eta)) * fnorm) {
      out.step = std::move(trial);
      out.next = std::move(xn);
      out.next_residual = std::move(fn);
      out.next_norm = fn_norm;
      out.steps = step;
      return out;
    }
    if (step >= cfg.backtrack_cap)
      throw LineSearchFailed("backtrack: no sufficient decrease within cap");
    // f'(0) for the current (already damped) step scales linearly.
    const double theta = theta_select(f0, big_theta * fp0_full,
                                      fn_norm * fn_norm, cfg.theta_min,
                                      cfg.theta_max);
    out.thetas.push_back(theta);
    out.eta = 1.0 - theta * (1.0 - out.eta);
    big_theta *= theta;
  }
}

/// Riemannian inexact Newton backtracking iteration.
///
/// Per outer step: solve the normal equations for dz by CG to tolerance
/// max(eta_k ||F||, inexact_floor), lift the minimum-norm step
/// dx = DF*[dz], measure the realized forcing term eta_hat, backtrack to
/// sufficient decrease, retract, and update
/// eta_{k+1} = min(eta_k, eta_max, ||F(X_{k+1})||). Stops when
/// ||F|| < epsilon. Failures are reported, not thrown; the caller decides
/// whether to restart from a fresh initial point.
template <NewtonProblem P>
SolveReport<P> newton_solve(const P& prob, const typename P::Point& x0,
                            const SolverConfig& cfg) {
  SolveReport<P> report;
  typename P::Point x = x0;
  Mat fx = prob.residual(x);
  double fnorm = fx.norm();
  const int cap = cfg.cg_cap > 0 ? cfg.cg_cap : prob.dim() * prob.dim();
  double eta = std::min(cfg.eta_max, fnorm);
  std::vector<double> history{fnorm};

  try {
    if (!std::isfinite(fnorm))
      throw NumericalBreakdown("newton_solve: non-finite initial residual");
    for (int k = 0; fnorm >= cfg.epsilon; ++k) {
      if (k >= cfg.max_outer) {
        report.trace.failure = FailureReason::max_outer_exceeded;
        break;
      }
      const double sigma =
          cfg.sigma_max > 0 ? std::min(cfg.sigma_max, fnorm) : 0.0;
      const double tol = std::max(eta * fnorm, cfg.inexact_floor);
      CgOutcome cg = cg_normal_solve(prob, x, Mat(-fx), tol, sigma, cap);
      typename P::Tangent step_hat = prob.apply_adjoint(x, cg.dz);
      Mat diff_hat = prob.apply_diff(x, step_hat);
      const double eta_hat = (fx + diff_hat).norm() / fnorm;
      if (sigma > 0 && eta_hat > cfg.eta_max)
        throw CgStalled("newton_solve: shifted step violates the residual bound");
      auto bt = backtrack(prob, x, fx, fnorm, step_hat, diff_hat, eta_hat, cfg);

      IterRecord rec;
      rec.k = k;
      rec.res_norm = fnorm;
      rec.eta = bt.eta;
      rec.eta_hat = eta_hat;
      rec.cg_iters = cg.iters;
      rec.backtrack_steps = bt.steps;
      rec.thetas = bt.thetas;
      report.trace.iterations.push_back(std::move(rec));

      x = std::move(bt.next);
      fx = std::move(bt.next_residual);
      fnorm = bt.next_norm;
      history.push_back(fnorm);
      eta = std::min({bt.eta, cfg.eta_max, fnorm});
    }
    if (fnorm < cfg.epsilon) report.trace.converged = true;
  } catch (const CgStalled&) {
    report.trace.failure = FailureReason::cg_stalled;
  } catch (const InvalidDescent&) {
    report.trace.failure = FailureReason::invalid_descent;
  } catch (const LineSearchFailed&) {
    report.trace.failure = FailureReason::line_search_failed;
  } catch (const DegenerateRetraction&) {
    report.trace.failure = FailureReason::retraction_failed;
  } catch (const NumericalBreakdown&) {
    report.trace.failure = FailureReason::numerical_breakdown;
  }

  report.trace.final_res = fnorm;
  report.final_point = std::move(x);
  if (report.trace.converged)
    report.trace.order_estimate = order_estimate(history);
  return report;
}

}  // namespace riesp
