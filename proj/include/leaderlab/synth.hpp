#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "leaderlab/core.hpp"
#include "leaderlab/wavelet.hpp"

namespace leaderlab {

// Exact stationary Gaussian vector of length n with autocovariance cov(lag), by
// circulant embedding. The embedding starts at the smallest power of two >= 2(n-1)
// and is doubled up to three times when it is not nonnegative definite.
std::vector<double> circulant_gaussian(const std::function<double(std::size_t)>& cov, std::size_t n, Rng& rng);

// Autocovariance of unit-variance fractional Gaussian noise.
double fgn_autocovariance(double H, std::size_t k);

std::vector<double> gen_fgn(double H, std::size_t n, const RngSpec& rng);

// Cumulative sum of fGn scaled by n^{-H}, so the path lives on [0, 1] with Var X(1) = 1.
Signal gen_fbm(double H, std::size_t n, const RngSpec& rng);

// cov(W(t1), W(t2)) = beta^2 log(L / (|t1 - t2| + 1)), 0 once |t1 - t2| + 1 > L.
double mrw_log_covariance(double beta, double L, std::size_t lag);

// X(t) = sum_{s <= t} G_H(s) exp(W(s)), scaled like gen_fbm. beta = 0 reproduces gen_fbm.
Signal gen_mrw(double H, double beta, double L, std::size_t n, const RngSpec& rng);

// Default cascade parameter.
inline constexpr double kCmcMu = 0.37;

// Multiplier law W = 2^{-U}, U ~ N(mu, 2 mu / ln 2); mu = 0 is the degenerate W = 1 cascade.
double cmc_sigma2(double mu);
std::vector<double> sample_cmc_multipliers(double mu, std::size_t n, const RngSpec& rng);

// Cumulative integral A(t_k) at t_k = (k+1) 2^{-J} of the cascade density on 2^J cells.
Signal gen_cmc_motion(double mu, int J, const RngSpec& rng);

enum class CpcKind { ln, lp };

struct CpcParams {
  CpcKind kind = CpcKind::ln;
  double T = 100.0;
  double r_min = 0.02;
  double sigma2 = 0.2;
  double mu = -0.1;     // -sigma2 / 2
  double w = 1.5;
  double c_m = 1.0;     // intensity dm = (c_m / r^2) dt dr
  std::size_t n = 32768;  // grid points on [0, T)
};

struct PoissonPoint {
  double t = 0.0;
  double r = 0.0;
  double log_w = 0.0;
};

// Points of the Poisson process on [-1/2, T+1/2] x [r_min, 1].
std::vector<PoissonPoint> sample_cpc_points(const CpcParams& params, Rng& rng);

struct CpcRealization {
  Signal motion;
  std::size_t n_points = 0;
  bool empty_process = false;  // no points drawn: motion is linear
};

CpcRealization gen_cpc_motion(const CpcParams& params, const RngSpec& rng);

// Symmetric generalized Gaussian f(x) = kappa exp(-|x|^beta), kappa = beta / (2 Gamma(1/beta)).
struct GenGaussianParams {
  double beta = 2.0;
  double kappa = 0.0;
};

GenGaussianParams gen_gaussian_params(double beta);
double gen_gaussian_density(double x, double beta);
std::vector<double> sample_gen_gaussian(double beta, std::size_t n, const RngSpec& rng);

struct RwsRealization {
  Signal signal;
  CoefficientPyramid planted;  // c_{j,k} = 2^{-alpha j} X_{j,k}, j = 0..J
};

// Random wavelet series with coefficients at j = 0..J, synthesized by inverse DWT on
// 2^{J+1} samples over [0, 1).
RwsRealization gen_rws(double alpha, double beta, const WaveletBasis& basis, int J, const RngSpec& rng);

enum class ProcessKind { fbm, mrw, cmc, cpc_ln, cpc_lp, rws };

std::string to_string(ProcessKind k);
ProcessKind parse_process_kind(const std::string& s);

// Parameter record for one generator call; unused fields are ignored by the chosen kind.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::fbm;
  std::size_t n = 0;
  double H = 0.7;
  double beta = 0.05;     // mrw intermittency
  double L = 0.0;         // mrw integral scale; 0 selects L = n
  double mu = kCmcMu;
  double T = 100.0;
  double r_min = 0.02;
  double sigma2 = 0.2;
  double cpc_mu = -0.1;
  double w = 1.5;
  double alpha = 1.0;
  double gg_beta = 2.0;
  int J = 0;              // cmc / rws depth; 0 derives it from n
  std::string wavelet = "db3";
  RngSpec rng;

  // Throws InvalidArgument naming the violated invariant.
  void validate() const;
};

// Dispatches to the generator for spec.kind.
Signal generate(const ProcessSpec& spec);

}  // namespace leaderlab
