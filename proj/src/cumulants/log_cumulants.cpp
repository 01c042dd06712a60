#include <algorithm>
#include <cmath>

#include "leaderlab/cumulants.hpp"

namespace leaderlab {

PerScaleLogCumulants log_cumulants_per_scale(const LeaderPyramid& leaders, ScaleRange range, BoundaryPolicy policy) {
  if (range.j2 < range.j1) throw InvalidArgument("log-cumulants: empty scale range");
  PerScaleLogCumulants out;
  for (int j = range.j1; j <= range.j2; ++j) {
    const std::span<const double> l = leader_values(leaders, j, policy);
    if (l.empty()) throw DataError("log-cumulants: no leaders at scale " + std::to_string(j));
    double sum = 0.0;
    for (std::size_t k = 0; k < l.size(); ++k) {
      if (!(l[k] > 0.0)) {
        throw DataError("log-cumulants: zero leader at (j=" + std::to_string(j) + ", k=" + std::to_string(k) + ")");
      }
      sum += std::log(l[k]);
    }
    const double n = static_cast<double>(l.size());
    const double mu = sum / n;
    double ss = 0.0;
    for (double v : l) {
      const double d = std::log(v) - mu;
      ss += d * d;
    }
    out.mean[j] = mu;
    out.variance[j] = ss / n;
    out.count[j] = l.size();
    if (l.size() == 1) out.warnings.push_back("scale " + std::to_string(j) + " has a single leader; variance is 0");
  }
  return out;
}

CumulantFit fit_cm(const std::map<int, double>& per_scale, ScaleRange range, int order) {
  if (order != 1 && order != 2) throw InvalidArgument("fit_cm: order must be 1 or 2");
  if (range.j2 - range.j1 < 1) throw InvalidArgument("fit_cm: insufficient scales, need at least 2");

  // Normal equations (H^T H)^{-1} H^T y with rows H = [1, ln 2^{-j}].
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, t0 = 0.0, t1 = 0.0;
  CumulantFit out;
  out.order = order;
  for (int j = range.j1; j <= range.j2; ++j) {
    const auto it = per_scale.find(j);
    if (it == per_scale.end()) throw InvalidArgument("fit_cm: insufficient scales, missing j=" + std::to_string(j));
    const double x = -static_cast<double>(j) * std::log(2.0);
    const double y = it->second;
    s0 += 1.0;
    s1 += x;
    s2 += x * x;
    t0 += y;
    t1 += x * y;
    out.per_scale[j] = y;
  }
  const double det = s0 * s2 - s1 * s1;
  out.c0 = (s2 * t0 - s1 * t1) / det;
  out.cm = (s0 * t1 - s1 * t0) / det;

  double mean_y = t0 / s0, ss_res = 0.0, ss_tot = 0.0;
  for (const auto& [j, y] : out.per_scale) {
    const double x = -static_cast<double>(j) * std::log(2.0);
    const double r = y - out.c0 - out.cm * x;
    ss_res += r * r;
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  out.fit.slope = out.cm;
  out.fit.intercept = out.c0;
  out.fit.n_points = out.per_scale.size();
  out.fit.r_squared = ss_tot == 0.0 ? (ss_res == 0.0 ? 1.0 : 0.0) : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  return out;
}

}  // namespace leaderlab
