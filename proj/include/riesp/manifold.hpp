#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "riesp/dense.hpp"

namespace riesp {

/// Entry pattern over an n x n grid; indicator(i,j) == 1 marks a free entry.
struct PatternMask {
  int n = 0;
  Mat indicator;

  bool free_at(int i, int j) const { return indicator(i, j) != 0.0; }
  int free_count() const { return static_cast<int>(indicator.sum()); }
};

/// Fill-in pattern for the strictly upper triangle, excluding positions where
/// the block-diagonal eigenvalue matrix already holds a nonzero entry.
PatternMask upper_fill_mask(const Mat& lambda);

/// Mask freeing every entry except the listed (0-based) fixed positions.
PatternMask free_except(int n, const std::vector<std::pair<int, int>>& fixed);

/// Zero the non-free entries of z.
Mat mask_apply(const PatternMask& mask, const Mat& z);

struct IespPoint {
  Mat u;
  Mat v;
  Mat w;
};

struct IespTangent {
  Mat du;
  Mat dv;
  Mat dw;
  IespTangent scaled(double s) const { return {s * du, s * dv, s * dw}; }
};

struct DiespPoint {
  Mat p;  // entrywise factor (squared-entry matrix P, or the free slack S)
  Mat q;  // orthogonal factor
};

struct DiespTangent {
  Mat dp;
  Mat dq;
  DiespTangent scaled(double s) const { return {s * dp, s * dq}; }
};

/// (m - m^T) / 2.
Mat skew_part(const Mat& m);

/// Projection of an ambient matrix onto the tangent space of the orthogonal
/// group at u: u * skew(u^T z).
Mat project_tangent_orth(const Mat& u, const Mat& z);

/// Frobenius norm of q^T q - I.
double orthogonality_residual(const Mat& q);

/// qf retraction in both orthogonal factors, additive in the pattern factor.
IespPoint iesp_retract(const IespPoint& x, const IespTangent& dx);

/// Additive retraction in the entry factor, qf retraction in the orthogonal one.
DiespPoint diesp_retract(const DiespPoint& x, const DiespTangent& dx);

/// Random point with factors drawn via qf of a Gaussian matrix and a masked
/// Gaussian pattern component. Deterministic per seed.
IespPoint random_iesp_point(const PatternMask& mask, std::uint64_t seed);
DiespPoint random_diesp_point(const PatternMask& mask, std::uint64_t seed);

}  // namespace riesp
