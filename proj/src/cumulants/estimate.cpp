#include <cmath>

#include "leaderlab/cumulants.hpp"

namespace leaderlab {

std::string to_string(CiMethod m) { return m == CiMethod::clt ? "clt" : "bootstrap_percentile"; }

std::pair<double, double> realization_c1_c2(const LeaderPyramid& leaders, ScaleRange range, BoundaryPolicy policy) {
  const PerScaleLogCumulants lc = log_cumulants_per_scale(leaders, range, policy);
  return {fit_cm(lc.mean, range, 1).cm, fit_cm(lc.variance, range, 2).cm};
}

EstimateWithCI clt_interval(std::span<const double> samples, double estimate, double alpha) {
  if (samples.size() < 2) throw InvalidArgument("clt interval: need at least 2 samples");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("clt interval: alpha must lie in (0,1)");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  EstimateWithCI ci;
  ci.estimate = estimate;
  ci.stderr_ = std::sqrt(ss / (n - 1.0));
  const double half = standard_normal_quantile(1.0 - alpha / 2.0) * ci.stderr_ / std::sqrt(n);
  ci.lower = estimate - half;
  ci.upper = estimate + half;
  ci.level = 1.0 - alpha;
  ci.method = CiMethod::clt;
  ci.n_replicates = samples.size();
  return ci;
}

C1C2Estimate estimate_c1_c2(std::span<const LeaderPyramid> realizations, ScaleRange range,
                            const EstimationOptions& options) {
  const std::size_t N = realizations.size();
  if (N < 2) throw InvalidArgument("estimate: need at least 2 realizations, got " + std::to_string(N));

  C1C2Estimate out;
  out.c1_samples.resize(N);
  out.c2_samples.resize(N);
  parallel_for(N, [&](std::size_t i) {
    const auto [c1, c2] = realization_c1_c2(realizations[i], range, options.boundary);
    out.c1_samples[i] = c1;
    out.c2_samples[i] = c2;
  });
  if (N < 30) out.warnings.push_back("N < 30: the CLT interval is not justified at this sample size");

  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    s1 += out.c1_samples[i];
    s2 += out.c2_samples[i];
  }
  const double c1 = s1 / static_cast<double>(N);
  out.c2_mean_divisor_n = s2 / static_cast<double>(N);
  out.c2_mean_divisor_n_minus_1 = s2 / static_cast<double>(N - 1);
  const double c2 = options.c2_divisor == C2Divisor::n_minus_1 ? out.c2_mean_divisor_n_minus_1 : out.c2_mean_divisor_n;

  out.c1 = clt_interval(out.c1_samples, c1, options.alpha);
  out.c2 = clt_interval(out.c2_samples, c2, options.alpha);
  return out;
}

double berry_esseen_bound(std::span<const double> c1_samples, double c2_hat) {
  if (c1_samples.empty()) throw InvalidArgument("berry-esseen: samples must be non-empty");
  if (!(c2_hat > 0.0)) throw InvalidArgument("berry-esseen: nonpositive variance proxy");
  const double n = static_cast<double>(c1_samples.size());
  double mean = 0.0;
  for (double v : c1_samples) mean += v;
  mean /= n;
  double m3 = 0.0;
  for (double v : c1_samples) m3 += std::pow(std::abs(v - mean), 3);
  return 0.46 / (std::pow(c2_hat, 1.5) * std::pow(n, 1.5)) * m3;
}

}  // namespace leaderlab
