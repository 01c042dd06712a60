#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "leaderlab/rwstail.hpp"

namespace leaderlab {

RwsModel RwsModel::make(double alpha, double beta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("rws model: alpha must be > 0");
  RwsModel m;
  m.alpha = alpha;
  m.beta = beta;
  m.gg = gen_gaussian_params(beta);
  return m;
}

double gg_cdf(double x, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("gg_cdf: beta must be > 0");
  if (!(x >= 0.0)) throw InvalidArgument("gg_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(1.0 / beta, std::pow(x, beta));
}

double gg_tail(double x, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("gg_tail: beta must be > 0");
  if (!(x >= 0.0)) throw InvalidArgument("gg_tail: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(1.0 / beta, std::pow(x, beta));
}

MillsBounds mills_bounds(double x, double beta) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("mills_bounds: x must be > 0");
  const GenGaussianParams gg = gen_gaussian_params(beta);
  const double xb = std::pow(x, beta);

  // kappa e^{-x^beta} int_0^inf exp(x^beta - (x+s)^beta) ds.
  boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  const double scaled = integrator.integrate(
      [&](double s) { return std::exp(xb - std::pow(x + s, beta)); }, 0.0, std::numeric_limits<double>::infinity(),
      1e-14, &error);
  if (!std::isfinite(scaled) || error > 1e-12 * std::max(1.0, scaled)) {
    throw ConvergenceError("mills_bounds: quadrature did not reach the requested accuracy");
  }
  MillsBounds out;
  const double base = std::exp(-xb);
  out.exact = gg.kappa * base * scaled;

  const double two_gamma = 2.0 * boost::math::tgamma(1.0 / beta);
  if (beta == 1.0) {
    out.lower = out.upper = 0.5 * base;
  } else if (beta > 1.0) {
    const double m = (beta - 1.0) / (beta * xb);
    out.upper = base / (two_gamma * std::pow(x, beta - 1.0));
    out.lower = out.upper / (1.0 + m);
  } else {
    const double m = (1.0 - beta) / (beta * xb);
    out.lower = std::pow(x, 1.0 - beta) * base / two_gamma;
    out.upper = m < 1.0 ? out.lower / (1.0 - m) : std::numeric_limits<double>::infinity();
  }
  return out;
}

double A_beta(double alpha, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("A_beta: beta must be > 0");
  if (beta > 1.0) return std::pow(99.0 * (beta - 1.0) / beta, 1.0 / beta);
  if (beta < 1.0) return std::pow(1.01 * (1.0 - beta) / (0.01 * beta), 1.0 / beta);
  if (!(alpha > 0.0)) throw InvalidArgument("A_beta: alpha must be > 0");
  double a = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double denom = std::expm1(alpha * j * std::log(2.0));
    a = std::max(a, std::exp2(alpha) * j / denom);
  }
  return a;
}

}  // namespace leaderlab
