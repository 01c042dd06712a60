#include <algorithm>
#include <cmath>

#include "leaderlab/cumulants.hpp"

namespace leaderlab {

double empirical_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("quantile: empty input");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile: p must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

EstimateWithCI bootstrap_percentile(std::span<const double> samples, const Statistic& statistic, std::size_t B,
                                    double level, const RngSpec& rng) {
  if (samples.empty()) throw InvalidArgument("bootstrap: samples must be non-empty");
  if (B < 1) throw InvalidArgument("bootstrap: B must be >= 1");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("bootstrap: level must lie in (0,1)");

  const std::size_t n = samples.size();
  std::vector<double> reps(B);
  parallel_for(B, [&](std::size_t b) {
    Rng eng = rng.derive(b).engine();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> resample(n);
    for (double& v : resample) v = samples[pick(eng)];
    reps[b] = statistic(resample);
  });

  EstimateWithCI ci;
  ci.estimate = statistic(samples);
  ci.level = level;
  ci.method = CiMethod::bootstrap_percentile;
  ci.n_replicates = B;
  const double alpha = 1.0 - level;
  ci.lower = empirical_quantile(reps, alpha / 2.0);
  ci.upper = empirical_quantile(reps, 1.0 - alpha / 2.0);
  double mean = 0.0;
  for (double v : reps) mean += v;
  mean /= static_cast<double>(B);
  double ss = 0.0;
  for (double v : reps) ss += (v - mean) * (v - mean);
  ci.stderr_ = B > 1 ? std::sqrt(ss / static_cast<double>(B - 1)) : 0.0;
  return ci;
}

}  // namespace leaderlab
