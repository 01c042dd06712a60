#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "leaderlab/rwstail.hpp"

namespace leaderlab {

namespace {

constexpr int kMaxDepth = 2000;

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

double scaled_argument(const RwsModel& m, double A, int j) { return A * std::exp2(m.alpha * j); }

double log_cdf(double x, double beta) {
  const double t = gg_tail(x, beta);
  return t < 0.5 ? std::log1p(-t) : std::log(gg_cdf(x, beta));
}

// Upper bound on -2^j log F(x) from the tail t = 1 - F(x).
double log_mass_bound(int j, double t) { return t >= 1.0 ? std::numeric_limits<double>::infinity() : std::ldexp(t / (1.0 - t), j); }

}  // namespace

ExactLeaderCdf leader_cdf_exact_detail(const RwsModel& model, double A, double tol) {
  if (!(A >= 0.0) || std::isnan(A)) throw InvalidArgument("leader_cdf_exact: A must be >= 0");
  if (!(tol > 0.0)) throw InvalidArgument("leader_cdf_exact: tol must be > 0");
  if (A == 0.0) return {0.0, -std::numeric_limits<double>::infinity(), 0, 0.0};
  CompensatedSum log_p;
  double t = gg_tail(scaled_argument(model, A, 0), model.beta);
  for (int j = 0; j < kMaxDepth; ++j) {
    const double x = scaled_argument(model, A, j);
    log_p.add(std::ldexp(log_cdf(x, model.beta), j));
    const double t_next = gg_tail(scaled_argument(model, A, j + 1), model.beta);
    const double cur = log_mass_bound(j, t);
    const double next = log_mass_bound(j + 1, t_next);
    // Past this point the omitted terms shrink at least geometrically with ratio 1/2.
    if (next == 0.0 || (next <= 0.5 * cur && 2.0 * next < tol)) {
      return {std::exp(log_p.value()), log_p.value(), j, 2.0 * next};
    }
    t = t_next;
  }
  throw ConvergenceError("leader_cdf_exact: per-scale tail mass does not decay within " + std::to_string(kMaxDepth) +
                         " scales (alpha too small for A = " + std::to_string(A) + ")");
}

double leader_cdf_exact(const RwsModel& model, double A, double tol) { return leader_cdf_exact_detail(model, A, tol).value; }

double leader_cdf_truncated(const RwsModel& model, double A, int J) {
  if (!(A >= 0.0)) throw InvalidArgument("leader_cdf_truncated: A must be >= 0");
  if (J < 0) throw InvalidArgument("leader_cdf_truncated: J must be >= 0");
  if (A == 0.0) return 0.0;
  CompensatedSum log_p;
  for (int j = 0; j <= J; ++j) log_p.add(std::ldexp(log_cdf(scaled_argument(model, A, j), model.beta), j));
  return std::exp(log_p.value());
}

std::vector<double> leader_monte_carlo_samples(const RwsModel& model, int J, std::size_t n_paths, const RngSpec& rng) {
  if (J < 0 || J > kMonteCarloMaxJ) {
    throw InvalidArgument("leader_cdf_monte_carlo: J must lie in [0, " + std::to_string(kMonteCarloMaxJ) + "]");
  }
  constexpr std::size_t kChunk = 4096;
  constexpr int kDirectLevels = 6;  // 2^j <= 64: draw every coefficient
  std::vector<double> out(n_paths);
  const std::size_t chunks = (n_paths + kChunk - 1) / kChunk;
  const double shape = 1.0 / model.beta;
  parallel_for(chunks, [&](std::size_t c) {
    Rng eng = rng.derive(c).engine();
    std::gamma_distribution<double> gamma(shape, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t end = std::min(n_paths, (c + 1) * kChunk);
    for (std::size_t p = c * kChunk; p < end; ++p) {
      double leader = 0.0;
      for (int j = 0; j <= J; ++j) {
        double level_max = 0.0;
        if (j <= kDirectLevels) {
          for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) level_max = std::max(level_max, gamma(eng));
          level_max = std::pow(level_max, 1.0 / model.beta);
        } else {
          // Max of 2^j i.i.d. |X| by inversion of F^{2^j}.
          double u = unif(eng);
          while (u == 0.0) u = unif(eng);
          const double q = -std::expm1(std::log(u) / std::ldexp(1.0, j));
          level_max = q >= 1.0 ? 0.0 : std::pow(boost::math::gamma_q_inv(shape, q), 1.0 / model.beta);
        }
        leader = std::max(leader, std::exp2(-model.alpha * j) * level_max);
      }
      out[p] = leader;
    }
  });
  return out;
}

MonteCarloCdf leader_cdf_monte_carlo(const RwsModel& model, double A, int J, std::size_t n_paths, const RngSpec& rng) {
  if (n_paths == 0) throw InvalidArgument("leader_cdf_monte_carlo: n_paths must be > 0");
  const std::vector<double> samples = leader_monte_carlo_samples(model, J, n_paths, rng);
  const auto hits = std::count_if(samples.begin(), samples.end(), [&](double l) { return l <= A; });
  MonteCarloCdf out;
  out.n_paths = n_paths;
  out.J = J;
  out.p = static_cast<double>(hits) / static_cast<double>(n_paths);
  out.stderr_ = std::sqrt(out.p * (1.0 - out.p) / static_cast<double>(n_paths));
  return out;
}

}  // namespace leaderlab
