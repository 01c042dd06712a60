#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "leaderlab/rwstail.hpp"

namespace leaderlab {

namespace {

constexpr int kDirectFactors = 1000;
constexpr int kSeriesTerms = 4;
constexpr int kLbetaSearchLimit = 200;

// sum_{j > M} (j + shift)^{-2k} = psi^{(2k-1)}(M + 1 + shift) / (2k-1)!.
double power_tail(int M, double shift, int k) {
  return boost::math::polygamma(2 * k - 1, M + 1.0 + shift) / boost::math::factorial<double>(2 * k - 1);
}

// log(2 kappa e^{-x^beta} / (beta x^{beta-1})) at x = 2^{alpha i}.
double log_tail_term(const RwsModel& m, int i) {
  const double log_x = m.alpha * i * std::numbers::ln2;
  return std::log(2.0 * m.gg.kappa / m.beta) - std::exp(m.beta * log_x) - (m.beta - 1.0) * log_x;
}

// 2^e log(1 - t_i); -inf when t_i >= 1.
double powered_log_factor(const RwsModel& m, int i, int e) {
  const double t = std::exp(log_tail_term(m, i));
  if (t >= 1.0) return -std::numeric_limits<double>::infinity();
  return std::ldexp(std::log1p(-t), e);
}

}  // namespace

double small_A_alpha_threshold() { return std::log(1.13 * std::numbers::pi) / std::log(4.0); }

double c_product(int l) {
  if (l < 1) throw InvalidArgument("c_product: l must be >= 1");
  const int M = l + kDirectFactors;
  double log_p = 0.0;
  for (int j = l; j <= M; ++j) log_p += std::log1p(-1.0 / (4.0 * j * static_cast<double>(j)));
  // log(1 - u^2) = -sum_k u^{2k}/k with u = 1/(2j).
  for (int k = 1; k <= kSeriesTerms; ++k) log_p -= std::pow(0.25, k) * power_tail(M, 0.0, k) / k;
  return std::exp(log_p);
}

double C_product(int l) {
  if (l < 1) throw InvalidArgument("C_product: l must be >= 1");
  const int M = l + kDirectFactors;
  double log_p = 0.0;
  for (int j = l; j <= M; ++j) log_p += std::log1p(1.0 / (4.0 * j * (j + 1.0)));
  // 1 + 1/(4j(j+1)) = 1/(1 - v^2) with v = 1/(2j+1).
  for (int k = 1; k <= kSeriesTerms; ++k) log_p += std::pow(0.25, k) * power_tail(M, 0.5, k) / k;
  return std::exp(log_p);
}

SmallAConstants small_A_constants(const RwsModel& model, int l) {
  if (l < 1) throw InvalidArgument("small_A_constants: l must be >= 1");
  SmallAConstants c;
  c.l = l;
  c.kappa = model.gg.kappa;

  // Largest i violating (1 - 1/(4i^2)) <= (1 - t_i)^{2^{i+l+1}}.
  int last_fail = 0;
  for (int i = 1; i <= kLbetaSearchLimit; ++i) {
    const double lhs = std::log1p(-1.0 / (4.0 * i * static_cast<double>(i)));
    if (!(lhs <= powered_log_factor(model, i, i + l + 1))) last_fail = i;
  }
  if (last_fail == kLbetaSearchLimit) {
    std::ostringstream msg;
    msg << "l_beta search failed up to i = " << kLbetaSearchLimit << "; residuals lhs - rhs at i = 1..5:";
    for (int i = 1; i <= 5; ++i) {
      msg << ' ' << std::log1p(-1.0 / (4.0 * i * i)) - powered_log_factor(model, i, i + l + 1);
    }
    throw RegimeError(msg.str());
  }
  c.l_beta_product = last_fail + 1;

  c.l_beta_mills = 1;
  if (model.beta != 1.0) {
    const double a = A_beta(model.alpha, model.beta);
    while (std::exp2(model.alpha * c.l_beta_mills) < a) ++c.l_beta_mills;
  }
  c.l_beta = std::max(c.l_beta_product, c.l_beta_mills);
  c.c_lbeta = c_product(c.l_beta);
  c.C_lbeta = C_product(c.l_beta);

  double log_prod = 0.0;
  for (int i = c.l_beta; i <= kLbetaSearchLimit; ++i) log_prod += powered_log_factor(model, i, i);
  c.lambda_point = std::exp(log_prod) / c.c_lbeta;
  return c;
}

SmallABounds small_A_bounds(const RwsModel& model, double A) {
  const double threshold = small_A_alpha_threshold();
  if (!(model.alpha > threshold)) {
    std::ostringstream msg;
    msg << "small-A condition violated: alpha = " << model.alpha << " must exceed log(1.13 pi)/log 4 = " << threshold;
    throw RegimeError(msg.str());
  }
  const double a_max = std::exp2(-model.alpha);
  if (!(A > 0.0) || A > a_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "small-A bound requires 0 < A <= 2^{-alpha} = " << a_max << " (A = " << A << ")";
    throw RegimeError(msg.str());
  }
  int l = std::max(1, static_cast<int>(std::floor(-std::log2(A) / model.alpha)));
  while (std::exp2(-model.alpha * l) < A && l > 1) --l;
  while (std::exp2(-model.alpha * (l + 1)) >= A) ++l;

  SmallABounds out;
  out.constants = small_A_constants(model, l);
  const auto& c = out.constants;
  auto envelope = [&](double lambda) {
    const double log_base = std::log(2.0 * c.c_lbeta * c.kappa * lambda) - 2.0 * model.alpha * std::numbers::ln2;
    return std::exp2(model.alpha) / A * std::exp(std::pow(A, -1.0 / model.alpha) * log_base);
  };
  out.lower = envelope(c.lambda_lo);
  out.upper = envelope(c.lambda_hi);
  const double mid = 0.5 * (c.lambda_lo + c.lambda_hi);
  out.rate = -(std::log(2.0 * c.c_lbeta * c.kappa * mid) - 2.0 * model.alpha * std::numbers::ln2);
  return out;
}

double large_A_condition(const RwsModel& model) {
  const double ab = model.alpha * model.beta;
  return std::exp2(ab) * (1.0 / std::numbers::ln2 - ab + std::log2(ab * std::numbers::ln2)) - 1.0;
}

double large_A_bound(const RwsModel& model, double A) {
  const double a_beta = A_beta(model.alpha, model.beta);
  if (!(A > a_beta)) {
    std::ostringstream msg;
    msg << "large-A bound requires A > A_beta = " << a_beta << " (A = " << A << ")";
    throw RegimeError(msg.str());
  }
  const double b = model.beta;
  if (b == 1.0) return std::exp(-A) / (1.0 - 2.0 * std::exp(-std::exp2(model.alpha) * A));
  const double lead = 1.01 * model.gg.kappa * std::exp(-std::pow(A, b)) / (b * std::pow(A, b - 1.0));
  const double ratio = std::exp2(1.0 - model.alpha * (b - 1.0)) * std::exp(-std::exp2(model.alpha * b) * std::pow(A, b));
  return lead / (1.0 - ratio);
}

}  // namespace leaderlab
