#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "leaderlab/synth.hpp"

namespace leaderlab {

GenGaussianParams gen_gaussian_params(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("generalized Gaussian: beta must be > 0");
  return {beta, beta / (2.0 * boost::math::tgamma(1.0 / beta))};
}

double gen_gaussian_density(double x, double beta) {
  return gen_gaussian_params(beta).kappa * std::exp(-std::pow(std::abs(x), beta));
}

std::vector<double> sample_gen_gaussian(double beta, std::size_t n, const RngSpec& rng) {
  gen_gaussian_params(beta);
  Rng eng = rng.engine();
  std::gamma_distribution<double> gamma(1.0 / beta, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> out(n);
  for (double& x : out) {
    const double mag = std::pow(gamma(eng), 1.0 / beta);
    x = sign(eng) ? mag : -mag;
  }
  return out;
}

}  // namespace leaderlab
