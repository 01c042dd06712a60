#include <algorithm>
#include <cmath>
#include <numbers>

#include "leaderlab/synth.hpp"

namespace leaderlab {

double cmc_sigma2(double mu) { return 2.0 * mu / std::numbers::ln2; }

std::vector<double> sample_cmc_multipliers(double mu, std::size_t n, const RngSpec& rng) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("synth: cmc mu must be >= 0");
  Rng eng = rng.engine();
  std::normal_distribution<double> u(mu, std::sqrt(cmc_sigma2(mu)));
  std::vector<double> w(n);
  for (double& x : w) x = mu == 0.0 ? 1.0 : std::exp2(-u(eng));
  return w;
}

Signal gen_cmc_motion(double mu, int J, const RngSpec& rng) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("synth: cmc mu must be >= 0");
  if (J < 1 || J > 30) throw InvalidArgument("synth: cmc depth J must be in [1, 30]");
  Rng eng = rng.engine();
  std::normal_distribution<double> u(mu, std::sqrt(cmc_sigma2(mu)));

  std::vector<double> q{1.0};
  std::vector<double> next;
  for (int j = 1; j <= J; ++j) {
    next.resize(2 * q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double w0 = mu == 0.0 ? 1.0 : std::exp2(-u(eng));
      const double w1 = mu == 0.0 ? 1.0 : std::exp2(-u(eng));
      next[2 * k] = q[k] * w0;
      next[2 * k + 1] = q[k] * w1;
    }
    q.swap(next);
  }

  const double h = std::exp2(-J);
  Signal s;
  s.samples.resize(q.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    acc += q[k] * h;
    s.samples[k] = acc;
  }
  s.t0 = h;
  s.dt = h;
  s.label = "cmc";
  return s;
}

namespace {

void check_cpc(const CpcParams& p) {
  if (!(p.T > 0.0) || !std::isfinite(p.T)) throw InvalidArgument("synth: cpc T must be > 0");
  if (!(p.r_min > 0.0 && p.r_min <= 1.0)) throw InvalidArgument("synth: cpc r_min must lie in (0,1]");
  if (!(p.c_m > 0.0)) throw InvalidArgument("synth: cpc intensity c_m must be > 0");
  if (p.kind == CpcKind::ln && !(p.sigma2 >= 0.0)) throw InvalidArgument("synth: cpc sigma2 must be >= 0");
  if (p.kind == CpcKind::lp && !(p.w > 0.0)) throw InvalidArgument("synth: cpc w must be > 0");
  if (p.n < 2) throw InvalidArgument("synth: cpc grid size n must be >= 2");
}

}  // namespace

std::vector<PoissonPoint> sample_cpc_points(const CpcParams& p, Rng& rng) {
  check_cpc(p);
  const double inv_rmin = 1.0 / p.r_min;
  const double mass = p.c_m * (p.T + 1.0) * (inv_rmin - 1.0);
  std::size_t count = 0;
  if (mass > 0.0) count = static_cast<std::size_t>(std::poisson_distribution<long long>(mass)(rng));

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> y(p.mu, std::sqrt(p.sigma2));
  const double log_w = std::log(p.w);
  std::vector<PoissonPoint> pts(count);
  for (auto& pt : pts) {
    pt.t = -0.5 + (p.T + 1.0) * unif(rng);
    // Inverse CDF of the density proportional to 1/r^2 on [r_min, 1].
    pt.r = 1.0 / (inv_rmin - unif(rng) * (inv_rmin - 1.0));
    pt.log_w = p.kind == CpcKind::ln ? y(rng) : log_w;
  }
  return pts;
}

CpcRealization gen_cpc_motion(const CpcParams& p, const RngSpec& rng) {
  check_cpc(p);
  Rng eng = rng.engine();
  const std::vector<PoissonPoint> pts = sample_cpc_points(p, eng);

  const std::size_t n = p.n;
  const double h = p.T / static_cast<double>(n);
  std::vector<double> diff(n + 1, 0.0);
  for (const auto& pt : pts) {
    const double lo = std::ceil((pt.t - 0.5 * pt.r) / h - 0.5);
    const double hi = std::floor((pt.t + 0.5 * pt.r) / h - 0.5);
    if (hi < 0.0 || lo > static_cast<double>(n - 1) || lo > hi) continue;
    const auto a = static_cast<std::size_t>(std::max(lo, 0.0));
    const auto b = static_cast<std::size_t>(std::min(hi, static_cast<double>(n - 1)));
    diff[a] += pt.log_w;
    diff[b + 1] -= pt.log_w;
  }
  std::vector<double> log_q(n);
  double acc = 0.0, peak = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    acc += diff[k];
    log_q[k] = acc;
    peak = std::max(peak, acc);
  }
  double mean = 0.0;
  for (double& v : log_q) {
    v = std::exp(v - peak);
    mean += v;
  }
  mean /= static_cast<double>(n);

  CpcRealization out;
  out.n_points = pts.size();
  out.empty_process = pts.empty();
  out.motion.samples.resize(n);
  double cum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cum += h * log_q[k] / mean;
    out.motion.samples[k] = cum;
  }
  out.motion.t0 = h;
  out.motion.dt = h;
  out.motion.label = p.kind == CpcKind::ln ? "cpc-ln" : "cpc-lp";
  return out;
}

}  // namespace leaderlab
