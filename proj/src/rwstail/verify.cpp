#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "detail/json_io.hpp"
#include "leaderlab/rwstail.hpp"

namespace leaderlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

bool TailBoundReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const TailCheck& c) { return c.passed; });
}

TailBoundReport verify_tail_rates(const RwsModel& model, std::span<const double> A_grid, const TailVerifyOptions& options) {
  if (A_grid.empty()) throw InvalidArgument("verify: empty A grid");
  for (std::size_t i = 0; i < A_grid.size(); ++i) {
    if (!(A_grid[i] > 0.0) || !std::isfinite(A_grid[i])) throw InvalidArgument("verify: A values must be finite and > 0");
    if (i > 0 && !(A_grid[i] > A_grid[i - 1])) throw InvalidArgument("verify: A grid must be strictly increasing");
  }
  const double threshold = small_A_alpha_threshold();
  if (!(model.alpha > threshold)) {
    throw RegimeError("small-A condition violated: alpha = " + fmt(model.alpha) + " must exceed log(1.13 pi)/log 4 = " +
                      fmt(threshold));
  }

  TailBoundReport r;
  r.alpha = model.alpha;
  r.beta = model.beta;
  r.tol = options.tol;
  r.A_grid.assign(A_grid.begin(), A_grid.end());
  const std::size_t n = A_grid.size();
  r.exact_cdf.resize(n);
  r.exact_tail.resize(n);
  r.exact_log_cdf.resize(n);
  r.lower_small.assign(n, kNaN);
  r.upper_small.assign(n, kNaN);
  r.upper_large.assign(n, kNaN);
  r.upper_large_two_sided.assign(n, kNaN);
  std::vector<int> depth(n);

  parallel_for(n, [&](std::size_t i) {
    const ExactLeaderCdf e = leader_cdf_exact_detail(model, A_grid[i], options.tol);
    r.exact_cdf[i] = e.value;
    r.exact_tail[i] = -std::expm1(e.log_value);
    r.exact_log_cdf[i] = e.log_value;
    depth[i] = e.depth;
  });

  r.A_beta = A_beta(model.alpha, model.beta);
  r.large_A_condition = large_A_condition(model);
  const double small_max = std::exp2(-model.alpha);

  std::vector<double> log_a, log_neg_log_p;
  for (std::size_t i = 0; i < n; ++i) {
    const double A = A_grid[i];
    if (A <= small_max) {
      const SmallABounds b = small_A_bounds(model, A);
      if (!r.constants) r.constants = b.constants;
      r.lower_small[i] = b.lower;
      r.upper_small[i] = b.upper;
      const double log_p = r.exact_log_cdf[i];
      if (log_p < 0.0 && std::isfinite(log_p)) {
        log_a.push_back(std::log(A));
        log_neg_log_p.push_back(std::log(-log_p));
        r.empirical_rate.push_back(-(log_p + std::log(A) - model.alpha * std::numbers::ln2) /
                                   std::pow(A, -1.0 / model.alpha));
      }
    }
    if (A > r.A_beta) {
      r.upper_large[i] = large_A_bound(model, A);
      r.upper_large_two_sided[i] = model.beta == 1.0 ? r.upper_large[i] : 2.0 * r.upper_large[i];
    }
  }
  if (!r.constants) r.constants = small_A_constants(model, 1);

  const double two_alpha_log2 = 2.0 * model.alpha * std::numbers::ln2;
  const double log_2ck = std::log(2.0 * r.constants->c_lbeta * r.constants->kappa);
  const double half_pi = std::numbers::pi / 2.0;
  // As printed: [-log(2^{2a}/(2 c k pi/2)), -log(2^{2a}/(2 c k))].
  r.rate_interval_printed_lo = -(two_alpha_log2 - log_2ck - std::log(half_pi));
  r.rate_interval_printed_hi = -(two_alpha_log2 - log_2ck);
  // The decay coefficient c in exp(-c A^{-1/alpha}) is 2a log 2 - log(2 c k Lambda) > 0.
  r.rate_interval_lo = two_alpha_log2 - log_2ck - std::log(half_pi);
  r.rate_interval_hi = two_alpha_log2 - log_2ck;
  double sum = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = std::exp2(model.alpha * i);
    const double t = gg_tail(x, model.beta);
    if (t == 0.0) break;
    sum += std::ldexp(std::log1p(-t), i);
  }
  r.rate_limit = two_alpha_log2 - std::log(2.0 * model.gg.kappa) - sum;

  if (log_a.size() >= 2) {
    r.slope = linfit(log_a, log_neg_log_p).slope;
    const double expected = -1.0 / model.alpha;
    r.checks.push_back({"small_A_exponent_slope", std::abs(r.slope - expected) <= 0.1,
                        "slope " + fmt(r.slope) + ", expected " + fmt(expected) + " +/- 0.1"});
    const auto [lo, hi] = std::minmax_element(r.empirical_rate.begin(), r.empirical_rate.end());
    const bool inside = *lo >= r.rate_interval_lo && *hi <= r.rate_interval_hi;
    r.checks.push_back({"small_A_rate_interval", inside,
                        "empirical rate in [" + fmt(*lo) + ", " + fmt(*hi) + "], interval [" + fmt(r.rate_interval_lo) +
                            ", " + fmt(r.rate_interval_hi) + "], limit of the exact product " + fmt(r.rate_limit)});
  }

  bool any_large = false, dominated = true;
  std::string worst;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(r.upper_large[i])) continue;
    any_large = true;
    const double ratio = r.upper_large[i] / r.exact_tail[i];
    if (!(ratio >= 1.0)) dominated = false;
    worst += (worst.empty() ? "" : ", ") + ("A=" + fmt(A_grid[i]) + ": bound/tail " + fmt(ratio));
  }
  if (any_large) {
    r.checks.push_back({"large_A_condition", r.large_A_condition > 0.0,
                        "2^{ab}(1/log 2 - ab + log2(ab log 2)) - 1 = " + fmt(r.large_A_condition)});
    r.checks.push_back({"large_A_domination", dominated, worst});
  }

  if (options.mc_paths > 0) {
    int J = options.mc_J;
    if (J == 0) J = std::min(kMonteCarloMaxJ, *std::max_element(depth.begin(), depth.end()));
    r.mc_J = J;
    r.mc_paths = options.mc_paths;
    const std::vector<double> samples = leader_monte_carlo_samples(model, J, options.mc_paths, options.rng);
    bool agree = true;
    for (std::size_t i = 0; i < n; ++i) {
      const auto hits = std::count_if(samples.begin(), samples.end(), [&](double l) { return l <= A_grid[i]; });
      const double p = static_cast<double>(hits) / static_cast<double>(samples.size());
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(samples.size()));
      r.mc_cdf.push_back(p);
      r.mc_stderr.push_back(se);
      const double ref = leader_cdf_truncated(model, A_grid[i], J);
      const double slack = std::max(4.0 * se, 1.0 / static_cast<double>(samples.size()));
      if (std::abs(p - ref) > slack) agree = false;
    }
    r.checks.push_back({"monte_carlo_agreement", agree, "|MC - product truncated at J=" + std::to_string(J) + "| <= 4 stderr"});
  }
  return r;
}

void write_tail_report_json(const std::filesystem::path& path, const TailBoundReport& r) {
  auto vec = [](const std::vector<double>& v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (double x : v) a.push_back(detail::real_json(x));
    return a;
  };
  nlohmann::ordered_json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["tol"] = r.tol;
  j["A_grid"] = vec(r.A_grid);
  j["exact_cdf"] = vec(r.exact_cdf);
  j["exact_tail"] = vec(r.exact_tail);
  j["exact_log_cdf"] = vec(r.exact_log_cdf);
  j["lower_small"] = vec(r.lower_small);
  j["upper_small"] = vec(r.upper_small);
  j["upper_large"] = vec(r.upper_large);
  j["upper_large_two_sided"] = vec(r.upper_large_two_sided);
  if (r.mc_paths > 0) {
    j["monte_carlo"] = {{"paths", r.mc_paths}, {"J", r.mc_J}, {"cdf", vec(r.mc_cdf)}, {"stderr", vec(r.mc_stderr)}};
  }
  const SmallAConstants& c = *r.constants;
  j["constants"] = {{"c_lbeta", c.c_lbeta},
                    {"C_lbeta", c.C_lbeta},
                    {"kappa_beta", c.kappa},
                    {"lambda_beta_interval", {c.lambda_lo, c.lambda_hi}},
                    {"lambda_beta_point", c.lambda_point},
                    {"l", c.l},
                    {"l_beta", c.l_beta},
                    {"l_beta_product", c.l_beta_product},
                    {"l_beta_mills", c.l_beta_mills},
                    {"A_beta", r.A_beta}};
  j["large_A_condition"] = r.large_A_condition;
  j["note"] = "lambda_1 and lambda_2 are existential; envelopes use lambda = 1 and only the decay rate is checked";
  j["small_A"] = {{"slope", r.slope},
                  {"expected_slope", -1.0 / r.alpha},
                  {"empirical_rate", vec(r.empirical_rate)},
                  {"rate_interval", {r.rate_interval_lo, r.rate_interval_hi}},
                  {"rate_interval_as_printed", {r.rate_interval_printed_lo, r.rate_interval_printed_hi}},
                  {"rate_limit", r.rate_limit}};
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const TailCheck& c2 : r.checks) checks.push_back({{"name", c2.name}, {"passed", c2.passed}, {"detail", c2.detail}});
  j["checks"] = std::move(checks);
  j["all_passed"] = r.all_passed();
  detail::write_json(path, j);
}

void write_tail_report_csv(const std::filesystem::path& path, const TailBoundReport& r) {
  auto out = detail::open_output(path);
  const bool mc = !r.mc_cdf.empty();
  out << "A,exact_cdf,lower_env,upper_env,upper_large,upper_large_two_sided" << (mc ? ",mc_cdf,mc_stderr" : "") << '\n';
  auto cell = [&](double v) -> std::ostream& {
    if (!std::isnan(v)) out << v;
    return out;
  };
  for (std::size_t i = 0; i < r.A_grid.size(); ++i) {
    out << r.A_grid[i] << ',' << r.exact_cdf[i] << ',';
    cell(r.lower_small[i]) << ',';
    cell(r.upper_small[i]) << ',';
    cell(r.upper_large[i]) << ',';
    cell(r.upper_large_two_sided[i]);
    if (mc) out << ',' << r.mc_cdf[i] << ',' << r.mc_stderr[i];
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace leaderlab
