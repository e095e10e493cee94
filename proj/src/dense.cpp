#include "riesp/dense.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <string>

#include "riesp/errors.hpp"

namespace riesp {

namespace {

void require_same_shape(const Mat& a, const Mat& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(op) + ": shape mismatch");
}

void require_square(const Mat& a, const char* op) {
  if (a.rows() != a.cols())
    throw ShapeError(std::string(op) + ": square matrix required");
}

}  // namespace

bool all_finite(const Mat& a) { return a.allFinite(); }

double frob_inner(const Mat& a, const Mat& b) {
  require_same_shape(a, b, "frob_inner");
  return a.cwiseProduct(b).sum();
}

double triple_inner(const Mat& a1, const Mat& a2, const Mat& a3,
                    const Mat& b1, const Mat& b2, const Mat& b3) {
  return frob_inner(a1, b1) + frob_inner(a2, b2) + frob_inner(a3, b3);
}

Mat hadamard(const Mat& a, const Mat& b) {
  require_same_shape(a, b, "hadamard");
  return a.cwiseProduct(b);
}

Mat lie_bracket(const Mat& a, const Mat& b) {
  require_square(a, "lie_bracket");
  require_same_shape(a, b, "lie_bracket");
  return a * b - b * a;
}

QfResult qf(const Mat& a) {
  require_square(a, "qf");
  const Eigen::Index n = a.rows();
  Eigen::HouseholderQR<Mat> fact(a);
  Mat q = fact.householderQ();
  Mat r = fact.matrixQR().triangularView<Eigen::Upper>();
  const double scale = a.norm();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(r(i, i)) <= 1e-14 * scale)
      throw DegenerateRetraction("qf: rank-deficient input");
  }
  // Flip signs so the diagonal of R is strictly positive; this pins the
  // otherwise sign-ambiguous Householder factorization to a unique one.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r(i, i) < 0) {
      q.col(i) = -q.col(i);
      r.row(i) = -r.row(i);
    }
  }
  return {std::move(q), std::move(r)};
}

std::vector<Complex> eig_all(const Mat& a) {
  require_square(a, "eig_all");
  Eigen::EigenSolver<Mat> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw DecompositionFailure("eig_all: eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

std::vector<double> svd_values(const Mat& a) {
  require_square(a, "svd_values");
  Eigen::BDCSVD<Mat> svd(a);
  if (svd.info() != Eigen::Success)
    throw DecompositionFailure("svd_values: SVD did not converge");
  const Vec& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

}  // namespace riesp
