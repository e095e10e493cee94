#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "riesp/dense.hpp"
#include "riesp/manifold.hpp"
#include "riesp/newton.hpp"

namespace riesp {

/// A conjugate-closed eigenvalue multiset in canonical order: conjugate pairs
/// (positive imaginary part first) precede the real values.
class Spectrum {
 public:
  /// Validates conjugate closure (pairing tolerance 1e-10 relative) and
  /// canonicalizes the ordering. Throws NotConjugateClosed on failure.
  static Spectrum validated(std::vector<Complex> raw);

  int size() const { return static_cast<int>(values_.size()); }
  int pair_count() const { return static_cast<int>(pairs_.size()); }
  /// Canonically ordered values; pairs expand to (a+bi, a-bi) with b > 0.
  const std::vector<Complex>& values() const { return values_; }
  /// One representative per conjugate pair, positive imaginary part.
  const std::vector<Complex>& pairs() const { return pairs_; }
  const std::vector<double>& reals() const { return reals_; }
  double real_sum() const;
  /// Moduli sorted nonincreasing.
  std::vector<double> moduli_sorted() const;

 private:
  Spectrum() = default;
  std::vector<Complex> pairs_;
  std::vector<double> reals_;
  std::vector<Complex> values_;
};

/// Nonincreasing, nonnegative singular values.
class SingularSpectrum {
 public:
  /// Sorts nonincreasing; rejects negative or non-finite entries.
  static SingularSpectrum validated(std::vector<double> vals);

  int size() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }

 private:
  SingularSpectrum() = default;
  std::vector<double> values_;
};

struct WeylHornReport {
  bool ok = false;
  // 1-based prefix k that failed; size()+... n means the full-product
  // equality failed; -1 when ok.
  int failed_prefix = -1;
  std::string detail;
};

/// Product-majorization test between eigenvalue moduli and singular values:
/// every proper prefix product of sorted moduli is bounded by the matching
/// singular value prefix product, and the full products agree. Evaluated in
/// the log domain (tolerance 1e-10); zeros use the convention log 0 = -inf,
/// so full-product equality requires zeros on both sides or neither.
WeylHornReport weyl_horn_report(const Spectrum& lam, const SingularSpectrum& sig);
bool weyl_horn_check(const Spectrum& lam, const SingularSpectrum& sig);

/// Trace identity: sum of eigenvalues equals sum of prescribed diagonal
/// entries, to 1e-10 relative.
bool mirsky_check(const Spectrum& lam, const std::vector<double>& diag);

/// Real block-diagonal matrix realizing the spectrum: one 2x2 block
/// [[a, b], [-b, a]] per conjugate pair a+-bi, then the real values.
Mat build_lambda(const Spectrum& lam);

/// Inverse eigenvalue and singular value problem: find U, V orthogonal and a
/// fill-in W supported on the free pattern with U S V^T = Lambda + W.
class IespProblem {
 public:
  using Point = IespPoint;
  using Tangent = IespTangent;

  IespProblem(Spectrum lam, SingularSpectrum sig);

  Mat residual(const Point& x) const;
  Mat apply_diff(const Point& x, const Tangent& dx) const;
  Tangent apply_adjoint(const Point& x, const Mat& dz) const;
  Point retract(const Point& x, const Tangent& dx) const;
  double inner(const Tangent& a, const Tangent& b) const;
  int dim() const { return n_; }

  /// Masked Gaussian fill-in, orthogonal factors from the SVD of Lambda + W0.
  Point initial_guess(std::uint64_t seed) const;

  const Spectrum& spectrum() const { return lam_; }
  const SingularSpectrum& singular() const { return sig_; }
  const Mat& lambda_mat() const { return lambda_; }
  Mat sigma_mat() const { return Mat(sv_.asDiagonal()); }
  const PatternMask& mask() const { return mask_; }

 private:
  Spectrum lam_;
  SingularSpectrum sig_;
  int n_ = 0;
  Mat lambda_;
  Vec sv_;
  PatternMask mask_;
};

/// Prescribed-entry constraints for the dual problem: values at a distinct
/// (0-based) index set, plus the choice of entrywise model.
struct DiespSpec {
  std::vector<std::pair<int, int>> index_set;
  std::vector<double> values;
  bool nonneg = true;  // true: squared-entry model; false: free slack model

  static DiespSpec validated(int n, std::vector<std::pair<int, int>> idx,
                             std::vector<double> vals, bool nonneg);
  /// Constraint values embedded at their positions, zero elsewhere.
  Mat embed(int n) const;
  /// Mask freeing the complement of the index set.
  PatternMask entry_mask(int n) const;
};

/// Squared-entry model: H(P, Q) = Ahat + P .* P - Q A Q^T.
class DiespHProblem {
 public:
  using Point = DiespPoint;
  using Tangent = DiespTangent;

  DiespHProblem(Mat a, const DiespSpec& spec);

  Mat residual(const Point& x) const;
  Mat apply_diff(const Point& x, const Tangent& dx) const;
  Tangent apply_adjoint(const Point& x, const Mat& dz) const;
  Point retract(const Point& x, const Tangent& dx) const;
  double inner(const Tangent& a, const Tangent& b) const;
  int dim() const { return n_; }

  Point initial_guess(std::uint64_t seed) const;
  const Mat& base_matrix() const { return a_; }
  const PatternMask& mask() const { return mask_; }

 private:
  Mat a_;
  Mat ahat_;
  PatternMask mask_;
  int n_ = 0;
};

/// Free-slack model: G(S, Q) = Ahat + S - Q A Q^T with S on the free pattern.
class DiespGProblem {
 public:
  using Point = DiespPoint;
  using Tangent = DiespTangent;

  DiespGProblem(Mat a, const DiespSpec& spec);

  Mat residual(const Point& x) const;
  Mat apply_diff(const Point& x, const Tangent& dx) const;
  Tangent apply_adjoint(const Point& x, const Mat& dz) const;
  Point retract(const Point& x, const Tangent& dx) const;
  double inner(const Tangent& a, const Tangent& b) const;
  int dim() const { return n_; }

  Point initial_guess(std::uint64_t seed) const;
  const Mat& base_matrix() const { return a_; }
  const PatternMask& mask() const { return mask_; }

 private:
  Mat a_;
  Mat ahat_;
  PatternMask mask_;
  int n_ = 0;
};

struct IespSolveResult {
  SolveTrace trace;
  IespPoint point;
  Mat a_new;  // Lambda + W at the final point
};

/// Newton solve with restarts: each attempt draws a fresh initial guess from
/// a seed derived from (seed, attempt). trace.restarts counts retries used.
IespSolveResult solve_iesp(const IespProblem& prob, std::uint64_t seed,
                           const SolverConfig& cfg, int restart_budget);

struct DiespSolveResult {
  bool solved = false;
  Mat a_new;          // Q A Q^T at the stage-two solution
  Mat stage1_matrix;  // the stage-one matrix A
  SolveTrace stage1;
  SolveTrace stage2;
};

/// Two-stage solve: first the IESP for a matrix A with the prescribed
/// spectra, then an orthogonal similarity driving the prescribed entries
/// (and, for the squared-entry model, entrywise nonnegativity).
DiespSolveResult solve_diesp(const Spectrum& lam, const SingularSpectrum& sig,
                             const DiespSpec& spec, std::uint64_t seed,
                             const SolverConfig& cfg, int restart_budget);

/// || eig(a) - lam ||_2 + || svd(a) - sig ||_2 with eigenvalues matched by
/// sorting both multisets on (real part rounded to 1e-8, imaginary part).
double final_error_iesp(const Mat& a_new, const Spectrum& lam,
                        const SingularSpectrum& sig);

/// final_error_iesp plus the l2 deviation of the constrained entries.
double final_error_diesp(const Mat& a_new, const Spectrum& lam,
                         const SingularSpectrum& sig, const DiespSpec& spec);

/// Eigenvalues and singular values of a seeded Gaussian matrix; always a
/// solvable instance.
std::pair<Spectrum, SingularSpectrum> random_problem(int n, std::uint64_t seed);

}  // namespace riesp
