#include <cmath>

#include "leaderlab/synth.hpp"

namespace leaderlab {

namespace {

constexpr std::uint64_t kStreamIncrements = 1;
constexpr std::uint64_t kStreamField = 2;

void check_hurst(double H) {
  if (!(H > 0.0 && H < 1.0)) throw InvalidArgument("synth: H must lie in (0,1), got " + std::to_string(H));
}

Signal integrate(const std::vector<double>& increments, double H, std::string label) {
  const double n = static_cast<double>(increments.size());
  const double scale = std::pow(n, -H);
  Signal s;
  s.samples.resize(increments.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < increments.size(); ++i) {
    acc += increments[i];
    s.samples[i] = scale * acc;
  }
  s.t0 = 1.0 / n;
  s.dt = 1.0 / n;
  s.label = std::move(label);
  return s;
}

}  // namespace

double fgn_autocovariance(double H, std::size_t k) {
  const double kk = static_cast<double>(k);
  const double h2 = 2.0 * H;
  if (k == 0) return 1.0;
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(kk - 1.0, h2));
}

std::vector<double> gen_fgn(double H, std::size_t n, const RngSpec& rng) {
  check_hurst(H);
  if (n < 2) throw InvalidArgument("synth: n must be >= 2");
  Rng eng = rng.derive(kStreamIncrements).engine();
  return circulant_gaussian([H](std::size_t k) { return fgn_autocovariance(H, k); }, n, eng);
}

Signal gen_fbm(double H, std::size_t n, const RngSpec& rng) {
  return integrate(gen_fgn(H, n, rng), H, "fbm");
}

double mrw_log_covariance(double beta, double L, std::size_t lag) {
  const double d = static_cast<double>(lag) + 1.0;
  if (d > L) return 0.0;
  return beta * beta * std::log(L / d);
}

Signal gen_mrw(double H, double beta, double L, std::size_t n, const RngSpec& rng) {
  check_hurst(H);
  if (n < 2) throw InvalidArgument("synth: n must be >= 2");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("synth: mrw beta must be >= 0");
  if (!(L >= static_cast<double>(n)) || !std::isfinite(L)) {
    throw InvalidArgument("synth: mrw requires L >= n (L=" + std::to_string(L) + ", n=" + std::to_string(n) + ")");
  }
  std::vector<double> g = gen_fgn(H, n, rng);
  if (beta > 0.0) {
    Rng eng = rng.derive(kStreamField).engine();
    const std::vector<double> w =
        circulant_gaussian([beta, L](std::size_t k) { return mrw_log_covariance(beta, L, k); }, n, eng);
    for (std::size_t i = 0; i < n; ++i) g[i] *= std::exp(w[i]);
  }
  return integrate(g, H, "mrw");
}

}  // namespace leaderlab
