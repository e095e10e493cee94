#include "riesp/newton.hpp"

namespace riesp {

const char* to_string(FailureReason r) {
  switch (r) {
    case FailureReason::none: return "none";
    case FailureReason::cg_stalled: return "cg_stalled";
    case FailureReason::line_search_failed: return "line_search_failed";
    case FailureReason::invalid_descent: return "invalid_descent";
    case FailureReason::retraction_failed: return "retraction_failed";
    case FailureReason::numerical_breakdown: return "numerical_breakdown";
    case FailureReason::max_outer_exceeded: return "max_outer_exceeded";
  }
  return "unknown";
}

double theta_select(double f0, double fp0, double f1, double theta_min,
                    double theta_max) {
  if (!(fp0 < 0))
    throw InvalidDescent("theta_select: nonnegative directional derivative");
  const double curvature = f1 - f0 - fp0;  // half the model's second derivative
  if (!(curvature > 0)) return theta_max;
  const double raw = -fp0 / (2.0 * curvature);
  return std::clamp(raw, theta_min, theta_max);
}

std::optional<double> order_estimate(const std::vector<double>& res_norms) {
  constexpr double kFloor = 1e-13;
  std::vector<double> v;
  v.reserve(res_norms.size());
  for (double r : res_norms)
    if (r >= kFloor) v.push_back(r);
  if (v.size() < 4) return std::nullopt;
  // trailing strictly decreasing run
  std::size_t s = v.size() - 1;
  while (s > 0 && v[s - 1] > v[s]) --s;
  if (v.size() - s < 4) return std::nullopt;
  const auto q = [&](std::size_t i) {
    return std::log(v[i + 2] / v[i + 1]) / std::log(v[i + 1] / v[i]);
  };
  const std::size_t m = v.size();
  return 0.5 * (q(m - 3) + q(m - 4));
}

}  // namespace riesp
