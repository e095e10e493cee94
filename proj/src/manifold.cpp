#include "riesp/manifold.hpp"

#include <string>

#include "riesp/errors.hpp"
#include "riesp/rng.hpp"

namespace riesp {

PatternMask upper_fill_mask(const Mat& lambda) {
  if (lambda.rows() != lambda.cols())
    throw ShapeError("upper_fill_mask: square matrix required");
  const int n = static_cast<int>(lambda.rows());
  Mat ind = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (lambda(i, j) == 0.0) ind(i, j) = 1.0;
  return {n, std::move(ind)};
}

PatternMask free_except(int n, const std::vector<std::pair<int, int>>& fixed) {
  if (n <= 0) throw ValidationError("free_except: n must be positive");
  Mat ind = Mat::Ones(n, n);
  for (const auto& [i, j] : fixed) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw ValidationError("free_except: index out of range");
    ind(i, j) = 0.0;
  }
  return {n, std::move(ind)};
}

Mat mask_apply(const PatternMask& mask, const Mat& z) {
  if (z.rows() != mask.n || z.cols() != mask.n)
    throw ShapeError("mask_apply: shape mismatch");
  return z.cwiseProduct(mask.indicator);
}

Mat skew_part(const Mat& m) { return 0.5 * (m - m.transpose()); }

Mat project_tangent_orth(const Mat& u, const Mat& z) {
  if (u.rows() != z.rows() || u.cols() != z.cols())
    throw ShapeError("project_tangent_orth: shape mismatch");
  return u * skew_part(u.transpose() * z);
}

double orthogonality_residual(const Mat& q) {
  return (q.transpose() * q - Mat::Identity(q.cols(), q.cols())).norm();
}

IespPoint iesp_retract(const IespPoint& x, const IespTangent& dx) {
  return {qf(x.u + dx.du).q, qf(x.v + dx.dv).q, x.w + dx.dw};
}

DiespPoint diesp_retract(const DiespPoint& x, const DiespTangent& dx) {
  return {x.p + dx.dp, qf(x.q + dx.dq).q};
}

IespPoint random_iesp_point(const PatternMask& mask, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = mask.n;
  Mat u = qf(gaussian_mat(n, n, rng)).q;
  Mat v = qf(gaussian_mat(n, n, rng)).q;
  Mat w = mask_apply(mask, gaussian_mat(n, n, rng));
  return {std::move(u), std::move(v), std::move(w)};
}

DiespPoint random_diesp_point(const PatternMask& mask, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = mask.n;
  Mat p = mask_apply(mask, gaussian_mat(n, n, rng));
  Mat q = qf(gaussian_mat(n, n, rng)).q;
  return {std::move(p), std::move(q)};
}

}  // namespace riesp
