#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "leaderlab/stattests.hpp"

namespace leaderlab {

namespace {

double poly(const double* c, int nord, double x) {
  double r = c[nord - 1];
  for (int i = nord - 2; i >= 0; --i) r = r * x + c[i];
  return r;
}

// Royston's approximation to the Shapiro-Wilk coefficients (upper half, positive).
std::vector<double> sw_coefficients(std::size_t n) {
  static const double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static const double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  const std::size_t nn2 = n / 2;
  std::vector<double> a(nn2);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
    return a;
  }
  const double an25 = static_cast<double>(n) + 0.25;
  std::vector<double> m(nn2);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < nn2; ++i) {
    m[i] = standard_normal_quantile((static_cast<double>(i + 1) - 0.375) / an25);
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
  const double a1 = poly(c1, 6, rsn) - m[0] / ssumm2;

  std::size_t i1;
  double fac;
  if (n > 5) {
    i1 = 2;
    const double a2 = -m[1] / ssumm2 + poly(c2, 6, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
  } else {
    i1 = 1;
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
  }
  a[0] = a1;
  for (std::size_t i = i1; i < nn2; ++i) a[i] = -m[i] / fac;
  return a;
}

double sw_pvalue(double w, std::size_t n) {
  static const double g[2] = {-2.273, 0.459};
  static const double c3[4] = {0.5440, -0.39978, 0.025054, -6.714e-4};
  static const double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static const double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static const double c6[3] = {-0.4803, -0.082676, 0.0030302};

  if (n == 3) {
    const double pw = 6.0 / std::numbers::pi * (std::asin(std::sqrt(w)) - std::numbers::pi / 3.0);
    return std::clamp(pw, 0.0, 1.0);
  }
  double w1 = std::log1p(-w);
  const double nd = static_cast<double>(n);
  double m, s;
  if (n <= 11) {
    const double gamma = poly(g, 2, nd);
    if (w1 >= gamma) return 1e-99;
    w1 = -std::log(gamma - w1);
    m = poly(c3, 4, nd);
    s = std::exp(poly(c4, 4, nd));
  } else {
    const double xx = std::log(nd);
    m = poly(c5, 4, xx);
    s = std::exp(poly(c6, 3, xx));
  }
  return 1.0 - standard_normal_cdf((w1 - m) / s);
}

}  // namespace

TestReport shapiro_wilk(std::span<const double> samples, double alpha, const RngSpec& rng) {
  if (samples.size() < 3) throw InvalidArgument("shapiro-wilk: need at least 3 samples");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("shapiro-wilk: alpha must lie in (0,1)");

  TestReport rep;
  rep.name = "shapiro_wilk";
  rep.alpha = alpha;
  rep.seed = rng;
  rep.n_input = samples.size();

  std::vector<double> x;
  if (samples.size() > kShapiroWilkMaxN) {
    Rng eng = rng.engine();
    std::vector<std::size_t> idx(samples.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Partial Fisher-Yates: the first kShapiroWilkMaxN slots become a uniform subset.
    for (std::size_t i = 0; i < kShapiroWilkMaxN; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
      std::swap(idx[i], idx[pick(eng)]);
    }
    x.reserve(kShapiroWilkMaxN);
    for (std::size_t i = 0; i < kShapiroWilkMaxN; ++i) x.push_back(samples[idx[i]]);
    rep.subsampled = true;
  } else {
    x.assign(samples.begin(), samples.end());
  }
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  rep.n = n;
  if (x.front() == x.back()) throw DataError("shapiro-wilk: constant sample");

  const std::vector<double> a = sw_coefficients(n);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double ssq = 0.0;
  for (double v : x) ssq += (v - mean) * (v - mean);
  double num = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) num += a[i] * (x[n - 1 - i] - x[i]);
  double w = num * num / ssq;
  if (n == 3) w = std::max(w, 0.75);
  w = std::min(w, 1.0);

  rep.statistic = w;
  rep.p_value = sw_pvalue(w, n);
  rep.rejected = *rep.p_value < alpha;
  return rep;
}

}  // namespace leaderlab
