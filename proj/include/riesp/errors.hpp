#pragma once

#include <stdexcept>
#include <string>

namespace riesp {

/// Dimension disagreement between operands.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Generic bad input (lengths, ranges, non-finite values, malformed data).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Eigenvalue list is not closed under conjugation.
struct NotConjugateClosed : ValidationError {
  using ValidationError::ValidationError;
};

/// qf received a (numerically) rank-deficient matrix.
struct DegenerateRetraction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Underlying eigen/SVD routine did not converge.
struct DecompositionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// CG hit its iteration cap before reaching the requested tolerance.
struct CgStalled : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite value or loss of positive definiteness inside an iteration.
struct NumericalBreakdown : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Line search asked to damp along a non-descent direction.
struct InvalidDescent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Backtracking exhausted its step cap without sufficient decrease.
struct LineSearchFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file: bad JSON, wrong types, unknown keys.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 2x2 feasibility data cannot be realized by any matrix.
struct FeasibilityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Nonnegativity requested but the construction forces a negative entry.
struct NonnegInfeasible : FeasibilityError {
  using FeasibilityError::FeasibilityError;
};

}  // namespace riesp
