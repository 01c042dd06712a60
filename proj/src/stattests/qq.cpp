#include <algorithm>
#include <cmath>

#include "leaderlab/stattests.hpp"

namespace leaderlab {

std::vector<std::pair<double, double>> qq_data(std::span<const double> samples, bool standardize) {
  if (samples.size() < 2) throw InvalidArgument("qq data: need at least 2 samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  if (standardize) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd == 0.0) throw DataError("qq data: constant sample cannot be standardized");
    for (double& v : x) v = (v - mean) / sd;
  }
  std::vector<std::pair<double, double>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = {standard_normal_quantile((static_cast<double>(i) + 0.5) / n), x[i]};
  }
  return out;
}

}  // namespace leaderlab
