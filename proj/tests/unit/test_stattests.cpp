#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "leaderlab/stattests.hpp"
#include "oracles.hpp"

using namespace leaderlab;
using oracle::brute_T;
using Catch::Approx;

namespace {

std::vector<double> draw(std::size_t n, const RngSpec& rng, auto dist) {
  Rng eng = rng.engine();
  std::vector<double> v(n);
  for (double& x : v) x = dist(eng);
  return v;
}

std::vector<double> gaussian(std::size_t n, const RngSpec& rng) {
  return draw(n, rng, std::normal_distribution<double>());
}

double simpson(const std::function<double(double)>& f, double a, double b, int m = 4000) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

double ks_distance(std::vector<double> x, const std::function<double(double)>& F) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = F(x[i]);
    d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return d;
}

}  // namespace

TEST_CASE("Shapiro-Wilk agrees with an external reference") {
  // W and p from scipy.stats.shapiro (Royston's algorithm, single-precision coefficients).
  struct Case {
    std::vector<double> x;
    double W, p;
  };
  std::vector<Case> cases{{{0.1, 0.5, 0.9, 1.3, 2.0, 2.2, 3.1, 4.7, 5.0, 8.3}, 0.8973134433036909, 0.20465615960661016},
                          {{}, 0.9032484957747275, 0.02160578338549689},
                          {{}, 0.9650560136211825, 0.08335029935193096},
                          {{1, 2, 4}, 0.9642857142857142, 0.6368868450289689}};
  for (int i = 1; i <= 25; ++i) cases[1].x.push_back(i * i);
  for (int i = 1; i <= 60; ++i) cases[2].x.push_back(std::round((std::sin(i * 1.7) * 3 + i * 0.05) * 1e6) / 1e6);
  for (const auto& c : cases) {
    const auto r = shapiro_wilk(c.x);
    CHECK(r.statistic == Approx(c.W).margin(2e-4));
    REQUIRE(r.p_value);
    CHECK(*r.p_value == Approx(c.p).margin(2e-3));
    CHECK(r.rejected == (*r.p_value < 0.05));
  }
}

TEST_CASE("Shapiro-Wilk on expected normal scores") {
  std::vector<double> x;
  for (int i = 1; i <= 50; ++i) x.push_back(standard_normal_quantile((i - 0.375) / 50.25));
  const auto r = shapiro_wilk(x);
  CHECK(r.statistic >= 0.99);
  CHECK_FALSE(r.rejected);
}

TEST_CASE("Shapiro-Wilk W in (0, 1] and affine invariant") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto x = draw(40 + 17 * s, {1, s}, std::exponential_distribution<double>());
    std::vector<double> y;
    for (double v : x) y.push_back(-3.5 * v + 100.0);
    const auto a = shapiro_wilk(x), b = shapiro_wilk(y);
    CHECK(a.statistic > 0.0);
    CHECK(a.statistic <= 1.0);
    CHECK(b.statistic == Approx(a.statistic).epsilon(1e-12));
  }
  CHECK_THROWS_AS(shapiro_wilk(std::vector<double>{1, 2}), InvalidArgument);
  CHECK_THROWS_AS(shapiro_wilk(std::vector<double>{2, 2, 2, 2}), DataError);
}

TEST_CASE("Shapiro-Wilk power against the exponential") {
  std::size_t strong = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto r = shapiro_wilk(draw(500, {2, s}, std::exponential_distribution<double>()));
    strong += r.rejected && *r.p_value < 0.01;
  }
  CHECK(strong >= 95);
}

TEST_CASE("Shapiro-Wilk level on Gaussian samples") {
  std::vector<int> rejected(1000, 0);
  parallel_for(1000, [&](std::size_t s) { rejected[s] = shapiro_wilk(gaussian(1000, {3, s})).rejected; });
  const double rate = std::accumulate(rejected.begin(), rejected.end(), 0) / 1000.0;
  CHECK(rate == Approx(0.05).margin(0.02));
}

TEST_CASE("Shapiro-Wilk subsamples above 5000") {
  const auto x = gaussian(12000, {4, 0});
  const auto a = shapiro_wilk(x, 0.05, {5, 0});
  CHECK(a.subsampled);
  CHECK(a.n == kShapiroWilkMaxN);
  CHECK(a.n_input == 12000);
  CHECK(shapiro_wilk(x, 0.05, {5, 0}).statistic == a.statistic);
  CHECK_FALSE(shapiro_wilk(gaussian(100, {4, 1})).subsampled);
}

TEST_CASE("QQ data") {
  const auto q = qq_data(std::vector<double>{3, 1, 2});
  REQUIRE(q.size() == 3);
  CHECK(q[0].first == Approx(standard_normal_quantile(1.0 / 6)).epsilon(1e-14));
  CHECK(q[1].first == Approx(0.0).margin(1e-15));
  CHECK(q[2].first == Approx(standard_normal_quantile(5.0 / 6)).epsilon(1e-14));
  CHECK(q[0].second == 1.0);
  CHECK(q[2].second == 3.0);

  std::vector<double> scores;
  for (int i = 1; i <= 200; ++i) scores.push_back(standard_normal_quantile((i - 0.5) / 200));
  for (const auto& [t, e] : qq_data(scores)) CHECK(std::abs(t - e) <= 1e-9);

  const auto x = draw(300, {6, 0}, std::lognormal_distribution<double>());
  const auto s = qq_data(x, true);
  double m = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    m += s[i].second / 300;
    if (i) {
      CHECK(s[i].first > s[i - 1].first);
      CHECK(s[i].second >= s[i - 1].second);
    }
  }
  CHECK(std::abs(m) < 1e-12);
  CHECK_THROWS_AS(qq_data(std::vector<double>{1, 1}, true), DataError);
}

TEST_CASE("interval discrepancy examples") {
  CHECK(interval_discrepancy(std::vector<double>{0, 1}, std::vector<double>{2, 3}) == 1.0);
  const auto x = gaussian(30, {7, 0});
  CHECK(interval_discrepancy(x, x) == 0.0);
  CHECK_THROWS_AS(interval_discrepancy(std::vector<double>{1}, std::vector<double>{1, 2}), InvalidArgument);
}

TEST_CASE("interval discrepancy equals brute force for n <= 50") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const std::size_t n = 1 + s % 50;
    std::vector<double> x, y;
    if (s % 3 == 0) {
      // Integer data with many ties.
      x = draw(n, {8, s}, [](Rng& e) { return static_cast<double>(std::uniform_int_distribution<int>(0, 6)(e)); });
      y = draw(n, {9, s}, [](Rng& e) { return static_cast<double>(std::uniform_int_distribution<int>(0, 6)(e)); });
    } else {
      x = gaussian(n, {8, s});
      y = draw(n, {9, s}, std::cauchy_distribution<double>());
    }
    REQUIRE(interval_discrepancy(x, y) == brute_T(x, y));
  }
}

TEST_CASE("interval discrepancy is affine invariant") {
  const auto x = gaussian(40, {10, 0});
  const auto y = draw(40, {10, 1}, std::exponential_distribution<double>());
  for (double a : {2.0, -0.5, 8.0}) {
    std::vector<double> ax, ay;
    for (double v : x) ax.push_back(a * v + 3.0);
    for (double v : y) ay.push_back(a * v + 3.0);
    CHECK(interval_discrepancy(ax, ay) == interval_discrepancy(x, y));
  }
}

TEST_CASE("log-concave MLE: two points give the uniform density") {
  const auto m = fit_logconcave_mle(std::vector<double>{0.0, 1.0});
  REQUIRE(m.knots.size() == 2);
  CHECK(m.log_density_at_knots[0] == Approx(0.0).margin(1e-4));
  CHECK(m.log_density_at_knots[1] == Approx(0.0).margin(1e-4));
  // Independent check: maximize (a + b)/2 - int_0^1 e^{a + (b - a) x} dx over a grid.
  auto objective = [](double a, double b) {
    const double d = b - a;
    const double integral = std::abs(d) < 1e-12 ? std::exp(a) : (std::exp(b) - std::exp(a)) / d;
    return 0.5 * (a + b) - integral;
  };
  double best = -1e300, ba = 0, bb = 0;
  for (int i = -100; i <= 100; ++i) {
    for (int k = -100; k <= 100; ++k) {
      const double v = objective(i * 0.01, k * 0.01);
      if (v > best) {
        best = v;
        ba = i * 0.01;
        bb = k * 0.01;
      }
    }
  }
  CHECK(ba == Approx(0.0).margin(1e-9));
  CHECK(bb == Approx(0.0).margin(1e-9));
  CHECK(m.objective == Approx(best).margin(1e-8));
}

TEST_CASE("log-concave MLE structural invariants") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    std::vector<double> x;
    if (s % 2) {
      x = gaussian(50 + 40 * s, {11, s});
    } else {
      x = draw(50 + 40 * s, {11, s}, std::gamma_distribution<double>(2.0, 1.0));
    }
    std::vector<double> objectives;
    LogConcaveOptions opt;
    opt.on_iteration = [&](double v) { objectives.push_back(v); };
    const auto m = fit_logconcave_mle(x, opt);
    for (std::size_t i = 1; i < objectives.size(); ++i) REQUIRE(objectives[i] >= objectives[i - 1] - 1e-12);
    CHECK(m.integral() == Approx(1.0).margin(1e-6));
    CHECK(m.lower() == Approx(*std::min_element(x.begin(), x.end())).margin(1e-9));
    CHECK(m.upper() == Approx(*std::max_element(x.begin(), x.end())).margin(1e-9));
    for (std::size_t i = 1; i + 1 < m.knots.size(); ++i) {
      const double left = (m.log_density_at_knots[i] - m.log_density_at_knots[i - 1]) / (m.knots[i] - m.knots[i - 1]);
      const double right = (m.log_density_at_knots[i + 1] - m.log_density_at_knots[i]) / (m.knots[i + 1] - m.knots[i]);
      REQUIRE(right - left <= 1e-9);
    }
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    // Knots sit at order statistics (up to the rounding of the standardization round trip).
    auto near_data = [&](double k) {
      const auto it = std::lower_bound(sorted.begin(), sorted.end(), k - 1e-9);
      return it != sorted.end() && std::abs(*it - k) <= 1e-9;
    };
    for (double k : m.knots) REQUIRE(near_data(k));

    // The MLE keeps the sample mean and satisfies int F_hat <= int F_n with equality at knots.
    double mean = 0.0;
    for (double v : x) mean += v / static_cast<double>(x.size());
    CHECK(m.mean() == Approx(mean).margin(1e-6));
    auto Fn = [&](double t) {
      return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin()) / sorted.size();
    };
    double acc_hat = 0.0, acc_emp = 0.0;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      const double a = sorted[i - 1], b = sorted[i];
      if (b == a) continue;
      acc_hat += simpson([&](double t) { return m.cdf(t); }, a, b, 200);
      acc_emp += Fn(a) * (b - a);
      REQUIRE(acc_hat <= acc_emp + 1e-6);
      const auto kn = std::lower_bound(m.knots.begin(), m.knots.end(), b - 1e-9);
      if (kn != m.knots.end() && std::abs(*kn - b) <= 1e-9) REQUIRE(acc_hat == Approx(acc_emp).margin(1e-6));
    }
  }
}

TEST_CASE("log-concave MLE is affine equivariant") {
  const auto x = draw(300, {12, 0}, std::gamma_distribution<double>(3.0, 1.0));
  const auto m = fit_logconcave_mle(x);
  for (auto [a, b] : {std::pair{2.5, -4.0}, std::pair{0.01, 1000.0}, std::pair{-1.5, 0.0}}) {
    std::vector<double> y;
    for (double v : x) y.push_back(a * v + b);
    const auto n = fit_logconcave_mle(y);
    for (std::size_t i = 0; i < m.knots.size(); ++i) {
      const double at = a * m.knots[i] + b;
      CHECK(n.log_density(at) == Approx(m.log_density_at_knots[i] - std::log(std::abs(a))).margin(1e-6));
    }
  }
}

TEST_CASE("log-concave MLE errors") {
  CHECK_THROWS_AS(fit_logconcave_mle(std::vector<double>{1.0}), InvalidArgument);
  CHECK_THROWS_AS(fit_logconcave_mle(std::vector<double>{1.0, 1.0, 1.0}), DataError);
  CHECK_THROWS_AS(fit_logconcave_mle(std::vector<double>{1.0, std::nan("")}), InvalidArgument);
}

TEST_CASE("log-concave MLE on a large Gaussian sample") {
  const std::size_t n = 5000;
  const auto x = gaussian(n, {13, 0});
  const auto m = fit_logconcave_mle(x);
  const double z = standard_normal_quantile(0.95);
  double worst = 0.0;
  for (double t = -z; t <= z; t += 0.01) {
    const double truth = -0.5 * t * t - 0.5 * std::log(2 * std::numbers::pi);
    worst = std::max(worst, std::abs(m.log_density(t) - truth));
  }
  INFO("max deviation on the central 90% range: " << worst);
  CHECK(worst <= 0.1);
}

TEST_CASE("log-concave MLE on a Laplace sample") {
  const auto x = draw(5000, {14, 0}, [](Rng& e) {
    const double u = std::exponential_distribution<double>()(e);
    return std::bernoulli_distribution(0.5)(e) ? u : -u;
  });
  const auto m = fit_logconcave_mle(x);
  CHECK((m.log_density(2.5) - m.log_density(0.5)) / 2.0 == Approx(-1.0).margin(0.15));
  CHECK((m.log_density(-0.5) - m.log_density(-2.5)) / 2.0 == Approx(1.0).margin(0.15));
}

TEST_CASE("sampling from fitted models") {
  LogConcaveMLE uniform;
  uniform.knots = {0.0, 1.0};
  uniform.log_density_at_knots = {0.0, 0.0};
  const auto u = sample_from_mle(uniform, 10000, {15, 0});
  CHECK(ks_distance(u, [](double t) { return std::clamp(t, 0.0, 1.0); }) <= 0.02);

  // Single segment on [0, 2] with slope -s: F(x) = (1 - e^{-s x}) / (1 - e^{-2 s}).
  const double s = 1.3;
  LogConcaveMLE expo;
  expo.knots = {0.0, 2.0};
  const double c = std::log(s / (1 - std::exp(-2 * s)));
  expo.log_density_at_knots = {c, c - 2 * s};
  auto F = [s](double t) { return (1 - std::exp(-s * t)) / (1 - std::exp(-2 * s)); };
  CHECK(expo.integral() == Approx(1.0).epsilon(1e-12));
  for (double t : {0.1, 0.7, 1.9}) CHECK(expo.cdf(t) == Approx(F(t)).epsilon(1e-12));
  const auto e = sample_from_mle(expo, 10000, {15, 1});
  CHECK(ks_distance(e, F) <= 0.02);

  const auto x = draw(400, {16, 0}, std::gamma_distribution<double>(2.0, 1.0));
  const auto m = fit_logconcave_mle(x);
  // Closed-form first moment per segment: int_a^b t e^{p + q (t - a)} dt.
  double mean = 0.0;
  for (std::size_t i = 1; i < m.knots.size(); ++i) {
    const double a = m.knots[i - 1], b = m.knots[i], h = b - a;
    const double pa = m.log_density_at_knots[i - 1], pb = m.log_density_at_knots[i];
    const double q = (pb - pa) / h;
    if (std::abs(q * h) < 1e-8) {
      mean += std::exp(pa) * (b * b - a * a) / 2;
    } else {
      mean += (std::exp(pb) * (b - 1 / q) - std::exp(pa) * (a - 1 / q)) / q;
    }
  }
  CHECK(m.mean() == Approx(mean).epsilon(1e-9));
  const auto draws = sample_from_mle(m, 20000, {16, 1});
  double dm = 0.0, dv = 0.0;
  for (double v : draws) dm += v / 20000;
  for (double v : draws) dv += (v - dm) * (v - dm) / 19999;
  CHECK(std::abs(dm - mean) <= 3 * std::sqrt(dv / 20000));
  for (double v : draws) REQUIRE((v >= m.lower() && v <= m.upper()));
}

TEST_CASE("permutation test threshold and decision") {
  CHECK(permutation_threshold_index(99, 0.05) == 95);
  CHECK(permutation_threshold_index(19, 0.05) == 19);
  CHECK(permutation_threshold_index(10, 0.05) == 11);

  const auto x = gaussian(60, {17, 0});
  LogConcavityOptions few;
  few.B = 10;
  const auto never = logconcavity_test(x, {18, 0}, few);
  CHECK_FALSE(never.rejected);
  CHECK(std::isinf(*never.threshold));

  for (std::uint64_t s = 0; s < 6; ++s) {
    std::vector<double> y = s % 2 ? gaussian(80, {19, s}) : draw(80, {19, s}, std::lognormal_distribution<double>(0.0, 1.5));
    LogConcavityOptions full;
    full.B = 39;
    full.early_stop = false;
    LogConcavityOptions fast = full;
    fast.early_stop = true;
    const auto a = logconcavity_test(y, {20, s}, full);
    const auto b = logconcavity_test(y, {20, s}, fast);
    CHECK(a.statistic == b.statistic);
    CHECK(a.rejected == b.rejected);
    CHECK(*a.replicates_run == 39);
    CHECK(*b.replicates_run <= 39);
    REQUIRE(a.threshold);
    CHECK(a.rejected == (a.statistic > *a.threshold));
    CHECK(a.p_value.has_value() == false);
  }
  const auto again = logconcavity_test(x, {21, 0});
  CHECK(logconcavity_test(x, {21, 0}).statistic == again.statistic);
  CHECK(again.B == 99);
  CHECK_FALSE(report_json(again).empty());
}
