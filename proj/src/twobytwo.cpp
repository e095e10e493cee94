#include "riesp/twobytwo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riesp/errors.hpp"

namespace riesp {

namespace {

constexpr double kTol = 1e-10;

double slack(double a, double b) { return kTol * std::max({1.0, a, b}); }

bool close(double a, double b) {
  return std::abs(a - b) <= slack(std::abs(a), std::abs(b));
}

bool leq(double a, double b) { return a <= b + slack(std::abs(a), std::abs(b)); }

// Existence of a real [[d1,b],[c,d2]] with off-diagonal product bc = g and
// singular values s1 >= s2: equivalent to b^2 + c^2 = S with S as below, so
// the data is realizable iff 2|g| <= S (then b^2, c^2 are the roots of
// t^2 - S t + g^2 = 0).
bool off_diagonal_realizable(double s1, double s2, double d1, double d2,
                             double g) {
  const double S = s1 * s1 + s2 * s2 - d1 * d1 - d2 * d2;
  return leq(2.0 * std::abs(g), S);
}

}  // namespace

TwoByTwoData TwoByTwoData::validated(Complex l1, Complex l2, double s1,
                                     double s2, double e1, double e2) {
  for (const Complex& z : {l1, l2})
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ValidationError("2x2: non-finite eigenvalue");
  for (double v : {s1, s2, e1, e2})
    if (!std::isfinite(v)) throw ValidationError("2x2: non-finite value");
  if (s1 < 0 || s2 < 0)
    throw ValidationError("2x2: negative singular value");

  // Fold tiny imaginary parts onto the real axis.
  const auto fold = [](Complex z) {
    if (std::abs(z.imag()) <= kTol * std::max(1.0, std::abs(z)))
      return Complex(z.real(), 0.0);
    return z;
  };
  l1 = fold(l1);
  l2 = fold(l2);
  const bool c1 = l1.imag() != 0.0, c2 = l2.imag() != 0.0;
  if (c1 != c2)
    throw NotConjugateClosed("2x2: eigenvalues must be conjugate-closed");
  if (c1) {
    if (std::abs(l2 - std::conj(l1)) >
        kTol * std::max(1.0, std::abs(l1)))
      throw NotConjugateClosed("2x2: eigenvalues must be conjugate-closed");
    const double re = 0.5 * (l1.real() + l2.real());
    const double im = 0.5 * std::abs(l1.imag() - l2.imag());
    l1 = Complex(re, im);
    l2 = Complex(re, -im);
  } else if (std::abs(l1) < std::abs(l2)) {
    std::swap(l1, l2);
  }

  TwoByTwoData d;
  d.lam1 = l1;
  d.lam2 = l2;
  d.sig1 = std::max(s1, s2);
  d.sig2 = std::min(s1, s2);
  d.d1 = std::max(e1, e2);
  d.d2 = std::min(e1, e2);
  return d;
}

bool feasible_sv_diag(double s1, double s2, double d1, double d2,
                      bool nonneg) {
  if (!(s1 >= s2) || s2 < 0)
    throw ValidationError("feasible_sv_diag: need s1 >= s2 >= 0");
  // bc is determined up to the sign of the determinant:
  // det = d1 d2 - bc = +/- s1 s2, hence g = bc in {d1 d2 -+ s1 s2}.
  for (const double g : {d1 * d2 - s1 * s2, d1 * d2 + s1 * s2}) {
    if (nonneg) {
      const double tol = slack(std::abs(g), 0.0);
      if (g < -tol) continue;
      if (std::min(d1, d2) < -tol) continue;
    }
    if (off_diagonal_realizable(s1, s2, d1, d2, g)) return true;
  }
  return false;
}

FeasibilityVerdict feasible_three_verdict(const TwoByTwoData& data,
                                          bool nonneg) {
  const Complex l1 = data.lam1, l2 = data.lam2;
  const double s1 = data.sig1, s2 = data.sig2;
  const double d1 = data.d1, d2 = data.d2;

  std::ostringstream os;
  if (!close(l1.real() + l2.real(), d1 + d2)) {
    os << "trace mismatch: eigenvalue sum " << (l1.real() + l2.real())
       << " vs diagonal sum " << (d1 + d2);
    return {false, os.str()};
  }
  if (!leq(std::abs(l1), s1)) {
    os << "dominance violated: |lambda_1| = " << std::abs(l1) << " > sigma_1 = "
       << s1;
    return {false, os.str()};
  }
  if (!close(std::abs(l1) * std::abs(l2), s1 * s2)) {
    os << "product mismatch: |lambda_1 lambda_2| = "
       << std::abs(l1) * std::abs(l2) << " vs sigma_1 sigma_2 = " << s1 * s2;
    return {false, os.str()};
  }
  // With eigenvalues prescribed, det = lambda_1 lambda_2 is pinned, so the
  // off-diagonal product is g = d1 d2 - Re(lambda_1 lambda_2).
  const double g = d1 * d2 - (l1 * l2).real();
  if (nonneg) {
    const double tol = slack(std::abs(g), 0.0);
    if (d2 < -tol) {
      os << "nonnegativity violated: diagonal entry " << d2 << " < 0";
      return {false, os.str()};
    }
    if (g < -tol) {
      os << "nonnegativity violated: off-diagonal product " << g << " < 0";
      return {false, os.str()};
    }
  }
  if (!off_diagonal_realizable(s1, s2, d1, d2, g)) {
    os << "off-diagonal entries not realizable: need b^2 + c^2 = "
       << (s1 * s1 + s2 * s2 - d1 * d1 - d2 * d2) << " with bc = " << g;
    return {false, os.str()};
  }
  return {true, ""};
}

bool feasible_three(const TwoByTwoData& data, bool nonneg) {
  return feasible_three_verdict(data, nonneg).ok;
}

Mat construct_2x2(const TwoByTwoData& data, bool nonneg) {
  const FeasibilityVerdict verdict = feasible_three_verdict(data, nonneg);
  if (!verdict.ok) {
    if (nonneg && verdict.reason.find("nonnegativity") != std::string::npos)
      throw NonnegInfeasible(verdict.reason);
    throw FeasibilityError(verdict.reason);
  }

  const double s1 = data.sig1, s2 = data.sig2;
  const double d1 = data.d1, d2 = data.d2;
  const double g = d1 * d2 - (data.lam1 * data.lam2).real();
  const double S =
      std::max(0.0, s1 * s1 + s2 * s2 - d1 * d1 - d2 * d2);
  // b^2 and c^2 are roots of t^2 - S t + g^2; take the large root for b^2 to
  // keep c = g / b stable.
  const double disc = std::max(0.0, S * S - 4.0 * g * g);
  const double root_hi = 0.5 * (S + std::sqrt(disc));
  const double b = std::sqrt(root_hi);
  double c = b > 1e-300 ? g / b : 0.0;
  if (nonneg && c < 0) {
    if (c < -slack(std::abs(c), 0.0))
      throw NonnegInfeasible("construct_2x2: negative off-diagonal entry");
    c = 0.0;
  }

  Mat m(2, 2);
  m << d1, b, c, d2;

  // Round-trip check: the closed form should reproduce the data.
  const std::vector<Complex> ev = eig_all(m);
  const std::vector<double> sv = svd_values(m);
  const double emod0 = std::abs(ev[0]), emod1 = std::abs(ev[1]);
  const Complex big = emod0 >= emod1 ? ev[0] : ev[1];
  const Complex small = emod0 >= emod1 ? ev[1] : ev[0];
  const bool eig_ok =
      (std::abs(big - data.lam1) <= slack(std::abs(big), std::abs(data.lam1)) &&
       std::abs(small - data.lam2) <=
           slack(std::abs(small), std::abs(data.lam2))) ||
      (std::abs(big - std::conj(data.lam1)) <=
           slack(std::abs(big), std::abs(data.lam1)) &&
       std::abs(small - std::conj(data.lam2)) <=
           slack(std::abs(small), std::abs(data.lam2)));
  if (!eig_ok || !close(sv[0], s1) || !close(sv[1], s2))
    throw FeasibilityError(
        "construct_2x2: closed form failed round-trip verification");
  return m;
}

}  // namespace riesp
