#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leaderlab/core.hpp"
#include "leaderlab/synth.hpp"

namespace leaderlab {

// Random wavelet series c_{j,k} = 2^{-alpha j} X_{j,k}, X_{j,k} i.i.d. generalized Gaussian.
struct RwsModel {
  double alpha = 1.0;
  double beta = 2.0;
  GenGaussianParams gg;

  static RwsModel make(double alpha, double beta);
};

// P(|X| <= x) = gamma(1/beta, x^beta) / Gamma(1/beta).
double gg_cdf(double x, double beta);
// P(|X| > x), accurate far in the tail.
double gg_tail(double x, double beta);

struct MillsBounds {
  double lower = 0.0;
  double upper = 0.0;
  double exact = 0.0;  // P(X > x) = kappa int_x^inf exp(-t^beta) dt, by quadrature
};

// One-sided Mills-ratio bounds for the generalized Gaussian. For beta < 1 the upper
// bound is +inf once (1-beta)/(beta x^beta) >= 1.
MillsBounds mills_bounds(double x, double beta);

// Threshold beyond which the tail is within 1% of its Mills approximation.
// beta > 1: A^beta = 99 (beta-1)/beta; beta < 1: A^beta = 101 (1-beta)/beta;
// beta = 1: smallest A with 2^{alpha j} A >= A + 2^alpha j for every j >= 1.
double A_beta(double alpha, double beta);

struct ExactLeaderCdf {
  double value = 0.0;
  double log_value = 0.0;          // log P; 1 - P = -expm1(log P) without cancellation
  int depth = 0;                   // last scale j included in the product
  double truncation_bound = 0.0;  // bound on the omitted log-mass
};

// prod_{j >= 0} gg_cdf(2^{alpha j} A)^{2^j}, in log space, truncated once the omitted
// log-mass is below tol.
ExactLeaderCdf leader_cdf_exact_detail(const RwsModel& model, double A, double tol = 1e-12);
double leader_cdf_exact(const RwsModel& model, double A, double tol = 1e-12);

// Same product over j = 0..J only.
double leader_cdf_truncated(const RwsModel& model, double A, int J);

struct MonteCarloCdf {
  double p = 0.0;
  double stderr_ = 0.0;
  std::size_t n_paths = 0;
  int J = 0;
};

inline constexpr int kMonteCarloMaxJ = 24;

// n_paths draws of l = max_{j <= J, k < 2^j} 2^{-alpha j} |X_{j,k}|.
std::vector<double> leader_monte_carlo_samples(const RwsModel& model, int J, std::size_t n_paths, const RngSpec& rng);
MonteCarloCdf leader_cdf_monte_carlo(const RwsModel& model, double A, int J, std::size_t n_paths, const RngSpec& rng);

// log(1.13 pi) / log 4.
double small_A_alpha_threshold();

// prod_{j >= l} (1 - 1/(4 j^2)) and prod_{j >= l} (1 + 1/(4 j (j+1))), l >= 1: direct
// product to a cutoff plus a polygamma series for the remaining factors.
double c_product(int l);
double C_product(int l);

struct SmallAConstants {
  int l = 0;                 // 2^{-alpha(l+1)} < A <= 2^{-alpha l}
  int l_beta = 0;
  int l_beta_product = 0;    // smallest l_beta from the product inequality alone
  int l_beta_mills = 0;      // smallest l with 2^{alpha l} >= A_beta
  double c_lbeta = 0.0;
  double C_lbeta = 0.0;
  double kappa = 0.0;
  double lambda_lo = 1.0;
  double lambda_hi = 1.5707963267948966;
  // Lambda from prod_{i >= l_beta} (1 - 2 kappa e^{-x_i^beta}/(beta x_i^{beta-1}))^{2^i} = c Lambda.
  double lambda_point = 0.0;
};

// Search for l_beta at a given l (direct search over i up to 200).
SmallAConstants small_A_constants(const RwsModel& model, int l);

struct SmallABounds {
  double lower = 0.0;  // envelope at Lambda = 1 (lambda_1 = 1)
  double upper = 0.0;  // envelope at Lambda = pi/2 (lambda_2 = 1)
  double rate = 0.0;   // -log(2 c kappa Lambda / 2^{2 alpha}) at the midpoint of (1, pi/2)
  SmallAConstants constants;
};

// Envelope (2^alpha/A) exp(A^{-1/alpha} log(2 c kappa Lambda / 2^{2 alpha})). Requires
// alpha > small_A_alpha_threshold() and A <= 2^{-alpha}; throws RegimeError otherwise.
SmallABounds small_A_bounds(const RwsModel& model, double A);

// 2^{alpha beta}(1/log 2 - alpha beta + log2(alpha beta log 2)) - 1; the theorem asks for > 0.
double large_A_condition(const RwsModel& model);

// beta != 1: (1.01 kappa e^{-A^beta}/(beta A^{beta-1})) / (1 - 2^{1-alpha(beta-1)} e^{-2^{alpha beta} A^beta});
// beta = 1: e^{-A} / (1 - 2 e^{-2^alpha A}). Throws RegimeError for A <= A_beta.
double large_A_bound(const RwsModel& model, double A);

struct TailCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TailBoundReport {
  double alpha = 0.0;
  double beta = 0.0;
  double tol = 1e-12;
  std::vector<double> A_grid;
  std::vector<double> exact_cdf;
  std::vector<double> exact_tail;  // 1 - exact_cdf without cancellation
  std::vector<double> exact_log_cdf;  // log P, finite where exact_cdf underflows
  // NaN outside the regime of each bound.
  std::vector<double> lower_small;
  std::vector<double> upper_small;
  std::vector<double> upper_large;
  std::vector<double> upper_large_two_sided;  // upper_large doubled to cover |X|
  std::vector<double> mc_cdf;                 // empty unless Monte Carlo was requested
  std::vector<double> mc_stderr;
  int mc_J = 0;
  std::size_t mc_paths = 0;

  std::optional<SmallAConstants> constants;
  double A_beta = 0.0;
  double large_A_condition = 0.0;

  double slope = 0.0;  // log(-log P) on log A over the small-A points
  std::vector<double> empirical_rate;  // per small-A point
  double rate_interval_printed_lo = 0.0;
  double rate_interval_printed_hi = 0.0;
  double rate_interval_lo = 0.0;  // sign-corrected interval
  double rate_interval_hi = 0.0;
  // 2 alpha log 2 - log(2 kappa) - sum_{i >= 0} 2^i log F(2^{alpha i}): the rate of the
  // exact product when every scale above l contributes to the exponent.
  double rate_limit = 0.0;

  std::vector<TailCheck> checks;
  bool all_passed() const;
};

struct TailVerifyOptions {
  double tol = 1e-12;
  std::size_t mc_paths = 0;
  int mc_J = 0;  // 0: the exact product's depth at the smallest A, capped at kMonteCarloMaxJ
  RngSpec rng;
};

TailBoundReport verify_tail_rates(const RwsModel& model, std::span<const double> A_grid,
                                  const TailVerifyOptions& options = {});

void write_tail_report_json(const std::filesystem::path& path, const TailBoundReport& report);
// Columns A,exact_cdf,lower_env,upper_env,upper_large,upper_large_two_sided[,mc_cdf,mc_stderr].
void write_tail_report_csv(const std::filesystem::path& path, const TailBoundReport& report);

}  // namespace leaderlab
