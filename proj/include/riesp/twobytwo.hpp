#pragma once

#include <complex>
#include <string>

#include "riesp/dense.hpp"

namespace riesp {

// Prescribed data for a 2x2 realization problem, canonicalized so that
// |lam1| >= |lam2|, sig1 >= sig2 >= 0 and d1 >= d2.
struct TwoByTwoData {
  Complex lam1, lam2;
  double sig1 = 0, sig2 = 0;
  double d1 = 0, d2 = 0;

  static TwoByTwoData validated(Complex l1, Complex l2, double s1, double s2,
                                double e1, double e2);
};

// Can some real 2x2 matrix have singular values {s1, s2} and main diagonal
// (d1, d2)?  `nonneg` additionally demands all four entries be >= 0.
// Requires s1 >= s2 >= 0; throws ValidationError otherwise.
bool feasible_sv_diag(double s1, double s2, double d1, double d2,
                      bool nonneg = false);

struct FeasibilityVerdict {
  bool ok = false;
  std::string reason;  // empty when ok
};

// Full three-way test: eigenvalues + singular values + diagonal.
FeasibilityVerdict feasible_three_verdict(const TwoByTwoData& data,
                                          bool nonneg = false);
bool feasible_three(const TwoByTwoData& data, bool nonneg = false);

// Builds a 2x2 matrix realizing the data; throws FeasibilityError (or
// NonnegInfeasible) when no such matrix exists.
Mat construct_2x2(const TwoByTwoData& data, bool nonneg = false);

}  // namespace riesp
