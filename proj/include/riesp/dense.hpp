#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace riesp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Complex = std::complex<double>;

/// True when every entry of a is finite (no NaN/Inf).
bool all_finite(const Mat& a);

/// Frobenius inner product trace(a * b^T).
double frob_inner(const Mat& a, const Mat& b);

/// Sum of componentwise Frobenius inner products of two matrix triples.
double triple_inner(const Mat& a1, const Mat& a2, const Mat& a3,
                    const Mat& b1, const Mat& b2, const Mat& b3);

/// Entrywise (Hadamard) product.
Mat hadamard(const Mat& a, const Mat& b);

/// Commutator a*b - b*a of square matrices.
Mat lie_bracket(const Mat& a, const Mat& b);

struct QfResult {
  Mat q;
  Mat r;
};

/// Unique QR factorization of a full-rank square matrix with the diagonal of
/// R strictly positive. Throws DegenerateRetraction when the input is
/// numerically rank deficient.
QfResult qf(const Mat& a);

/// All eigenvalues of a real square matrix, with multiplicity.
/// Conjugate pairs come out exactly conjugate.
std::vector<Complex> eig_all(const Mat& a);

/// Singular values of a real square matrix, nonincreasing.
std::vector<double> svd_values(const Mat& a);

}  // namespace riesp
