#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>

#include "leaderlab/stattests.hpp"

namespace leaderlab {

double interval_discrepancy(std::span<const double> x, std::span<const double> x_star) {
  if (x.empty() || x.size() != x_star.size()) {
    throw InvalidArgument("interval_discrepancy: samples must be non-empty and of equal size");
  }
  const std::size_t n = x.size();
  std::vector<std::pair<double, int>> pooled;
  pooled.reserve(2 * n);
  for (double v : x) pooled.emplace_back(v, 1);
  for (double v : x_star) pooled.emplace_back(v, -1);
  std::sort(pooled.begin(), pooled.end());

  // Tied values enter every interval together.
  std::vector<double> value;
  std::vector<long> label_sum, pos_prefix{0}, neg_prefix{0};
  for (const auto& [v, l] : pooled) {
    if (value.empty() || v != value.back()) {
      value.push_back(v);
      label_sum.push_back(0);
      pos_prefix.push_back(pos_prefix.back());
      neg_prefix.push_back(neg_prefix.back());
    }
    label_sum.back() += l;
    (l > 0 ? pos_prefix : neg_prefix).back() += 1;
  }
  const long G = static_cast<long>(value.size());
  const long pos_total = pos_prefix.back(), neg_total = neg_prefix.back();

  long best = 0;
  for (long g = 0; g < G; ++g) {
    long cur = label_sum[g];
    best = std::max(best, std::abs(cur));
    long l = g - 1, r = g + 1;
    while (l >= 0 || r < G) {
      // Groups still outside the interval: [0, l] and [r, G).
      const long pos_rem = pos_prefix[l + 1] + (pos_total - pos_prefix[r]);
      const long neg_rem = neg_prefix[l + 1] + (neg_total - neg_prefix[r]);
      if (std::max(cur + pos_rem, neg_rem - cur) <= best) break;
      const double dl = l >= 0 ? value[g] - value[l] : std::numeric_limits<double>::infinity();
      const double dr = r < G ? value[r] - value[g] : std::numeric_limits<double>::infinity();
      if (dl < dr) {
        cur += label_sum[l--];
      } else if (dr < dl) {
        cur += label_sum[r++];
      } else {
        cur += label_sum[l--] + label_sum[r++];
      }
      best = std::max(best, std::abs(cur));
    }
  }
  return static_cast<double>(best) / static_cast<double>(n);
}

std::size_t permutation_threshold_index(std::size_t B, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("permutation test: alpha must lie in (0, 1)");
  const double target = static_cast<double>(B + 1) * (1.0 - alpha);
  return static_cast<std::size_t>(std::ceil(target - 1e-9));
}

TestReport logconcavity_test(std::span<const double> samples, const RngSpec& rng, const LogConcavityOptions& options) {
  const std::size_t n = samples.size();
  if (n < 2) throw InvalidArgument("logconcavity_test: need at least 2 samples");
  if (options.B < 1) throw InvalidArgument("logconcavity_test: B must be >= 1");
  const std::size_t k = permutation_threshold_index(options.B, options.alpha);

  TestReport report;
  report.name = "logconcave";
  report.alpha = options.alpha;
  report.n = n;
  report.n_input = n;
  report.B = options.B;
  report.seed = rng;

  const LogConcaveMLE mle = fit_logconcave_mle(samples);
  const std::vector<double> starred = sample_from_mle(mle, n, rng.derive(1));
  const double T = interval_discrepancy(samples, starred);
  report.statistic = T;

  if (k > options.B) {
    // The order statistic does not exist: the test can never reject at this B and alpha.
    report.threshold = std::numeric_limits<double>::infinity();
    report.rejected = false;
    report.replicates_run = 0;
    return report;
  }

  std::vector<double> pooled(samples.begin(), samples.end());
  pooled.insert(pooled.end(), starred.begin(), starred.end());

  auto replicate = [&](std::size_t b) {
    std::vector<double> p = pooled;
    Rng eng = rng.derive(1000 + b).engine();
    for (std::size_t i = p.size() - 1; i > 0; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i);
      std::swap(p[i], p[pick(eng)]);
    }
    return interval_discrepancy(std::span<const double>(p.data(), n), std::span<const double>(p.data() + n, n));
  };

  // Reject iff at least k replicates fall strictly below T.
  std::vector<double> stars;
  stars.reserve(options.B);
  std::size_t below = 0, at_or_above = 0;
  const std::size_t batch = std::max<std::size_t>(1, worker_count());
  bool decided = false;
  for (std::size_t start = 0; start < options.B && !decided; start += batch) {
    const std::size_t count = std::min(batch, options.B - start);
    std::vector<double> values(count);
    parallel_for(count, [&](std::size_t i) { values[i] = replicate(start + i); });
    for (double v : values) {
      stars.push_back(v);
      (v < T ? below : at_or_above) += 1;
    }
    if (options.early_stop && (below >= k || at_or_above >= options.B - k + 1)) decided = true;
  }
  report.replicates_run = stars.size();
  report.rejected = below >= k;
  if (stars.size() == options.B) {
    std::sort(stars.begin(), stars.end());
    report.threshold = stars[k - 1];
    report.rejected = T > *report.threshold;
  }
  return report;
}

}  // namespace leaderlab
