#include "leaderlab/core.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

namespace leaderlab {

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("standard_normal_quantile: p must lie in (0,1)");
  }
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

}  // namespace leaderlab
