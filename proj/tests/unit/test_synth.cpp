#include <catch_amalgamated.hpp>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "leaderlab/synth.hpp"

using namespace leaderlab;
using Catch::Approx;

namespace {

std::vector<double> increments(const Signal& s, std::size_t lag) {
  std::vector<double> d;
  for (std::size_t i = 0; i + lag < s.size(); ++i) d.push_back(s.samples[i + lag] - s.samples[i]);
  return d;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double gamma_autocov(double H, double k) {
  return 0.5 * (std::pow(k + 1, 2 * H) - 2 * std::pow(k, 2 * H) + std::pow(std::abs(k - 1), 2 * H));
}

}  // namespace

TEST_CASE("fgn autocovariance formula") {
  CHECK(fgn_autocovariance(0.7, 0) == Approx(1.0));
  for (std::size_t k = 1; k < 20; ++k) CHECK(fgn_autocovariance(0.7, k) == Approx(gamma_autocov(0.7, k)).epsilon(1e-12));
  for (std::size_t k = 1; k < 5; ++k) CHECK(std::abs(fgn_autocovariance(0.5, k)) < 1e-15);
}

TEST_CASE("fBm with H = 0.5 has uncorrelated increments") {
  const std::size_t n = 1 << 14;
  const Signal s = gen_fbm(0.5, n, RngSpec{1, 0});
  const auto d = increments(s, 1);
  const double m = mean_of(d);
  double c0 = 0.0, c1 = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    c0 += (d[i] - m) * (d[i] - m);
    if (i + 1 < d.size()) c1 += (d[i] - m) * (d[i + 1] - m);
  }
  CHECK(std::abs(c1 / c0) <= 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("fBm increment variance scales as k^{2H}") {
  const Signal s = gen_fbm(0.7, 1 << 14, RngSpec{2, 0});
  std::vector<double> x, y;
  for (std::size_t k : {1, 2, 4, 8, 16, 32, 64}) {
    x.push_back(std::log(static_cast<double>(k)));
    y.push_back(std::log(variance_of(increments(s, k))));
  }
  CHECK(linfit(x, y).slope == Approx(1.4).margin(0.1));
}

TEST_CASE("fGn empirical autocovariance over 200 realizations") {
  const double H = 0.7;
  const std::size_t n = 1 << 12, R = 200;
  std::vector<std::vector<double>> per(11);
  for (std::size_t r = 0; r < R; ++r) {
    const auto g = gen_fgn(H, n, RngSpec{3, r});
    for (std::size_t k = 0; k <= 10; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i + k < n; ++i) s += g[i] * g[i + k];
      per[k].push_back(s / static_cast<double>(n - k));
    }
  }
  for (std::size_t k = 0; k <= 10; ++k) {
    const double se = std::sqrt(variance_of(per[k]) / R);
    CHECK(std::abs(mean_of(per[k]) - (k == 0 ? 1.0 : gamma_autocov(H, static_cast<double>(k)))) <= 5 * se);
  }
}

TEST_CASE("circulant embedding of white noise") {
  Rng eng(5);
  const auto v = circulant_gaussian([](std::size_t k) { return k == 0 ? 2.0 : 0.0; }, 50000, eng);
  CHECK(variance_of(v) == Approx(2.0).margin(0.05));
  CHECK(std::abs(mean_of(v)) < 0.03);
}

TEST_CASE("MRW reduces to fBm at beta = 0 and W has variance beta^2 log L") {
  const RngSpec rng{9, 4};
  const Signal a = gen_mrw(0.6, 0.0, 4096, 4096, rng);
  const Signal b = gen_fbm(0.6, 4096, rng);
  CHECK(a.samples == b.samples);
  CHECK(mrw_log_covariance(0.05, 1e5, 0) == Approx(0.05 * 0.05 * std::log(1e5)).epsilon(1e-10));
  CHECK(mrw_log_covariance(0.1, 100, 99) == 0.0);
  CHECK(mrw_log_covariance(0.1, 100, 150) == 0.0);
  CHECK(mrw_log_covariance(0.1, 100, 9) == Approx(0.01 * std::log(10.0)));
  CHECK_THROWS_AS(gen_mrw(0.6, 0.05, 100, 200, rng), InvalidArgument);
}

TEST_CASE("CMC multipliers have unit mean and the degenerate cascade is a ramp") {
  const auto w = sample_cmc_multipliers(kCmcMu, 1000000, RngSpec{4, 0});
  CHECK(mean_of(w) == Approx(1.0).margin(0.005));
  CHECK(cmc_sigma2(0.37) == Approx(2 * 0.37 / std::log(2.0)));
  const auto ones = sample_cmc_multipliers(0.0, 100, RngSpec{4, 1});
  for (double v : ones) CHECK(v == 1.0);
  const Signal ramp = gen_cmc_motion(0.0, 8, RngSpec{4, 2});
  REQUIRE(ramp.size() == 256);
  for (std::size_t k = 0; k < 256; ++k) CHECK(ramp.samples[k] == Approx((k + 1) / 256.0).epsilon(1e-12));
}

TEST_CASE("CMC mass: E[A(1)] = 1 over 500 realizations") {
  double s = 0.0;
  for (std::uint64_t r = 0; r < 500; ++r) s += gen_cmc_motion(kCmcMu, 10, RngSpec{6, r}).samples.back();
  CHECK(s / 500 == Approx(1.0).margin(0.05));
}

TEST_CASE("CPC without points is linear") {
  CpcParams p;
  p.r_min = 1.0;  // zero-measure strip
  p.n = 1000;
  const auto r = gen_cpc_motion(p, RngSpec{1, 0});
  CHECK(r.empty_process);
  CHECK(r.n_points == 0);
  const double step = r.motion.samples[0];
  for (std::size_t k = 0; k < p.n; ++k) REQUIRE(r.motion.samples[k] == Approx((k + 1) * step).epsilon(1e-12));
}

TEST_CASE("CPC cone point count matches the intensity integral") {
  CpcParams p;
  const double t = 50.0;
  const std::size_t R = 200;
  std::vector<double> counts;
  for (std::size_t r = 0; r < R; ++r) {
    Rng eng = RngSpec{7, r}.engine();
    double c = 0;
    for (const auto& pt : sample_cpc_points(p, eng)) {
      REQUIRE(pt.r >= p.r_min);
      REQUIRE(pt.r <= 1.0);
      REQUIRE(pt.t >= -0.5);
      REQUIRE(pt.t <= p.T + 0.5);
      if (std::abs(pt.t - t) <= pt.r / 2) c += 1;
    }
    counts.push_back(c);
  }
  // int_{r_min}^1 (c_m / r^2) r dr, evaluated by quadrature.
  boost::math::quadrature::tanh_sinh<double> ts;
  const double expected = ts.integrate([&](double r) { return p.c_m / (r * r) * r; }, p.r_min, 1.0);
  CHECK(expected == Approx(std::log(1 / p.r_min)).epsilon(1e-10));
  CHECK(std::abs(mean_of(counts) - expected) <= 3 * std::sqrt(expected / R));
}

TEST_CASE("generalized Gaussian normalization and kappa") {
  boost::math::quadrature::exp_sinh<double> es;
  for (double beta : {0.3, 0.5, 1.0, 1.5, 2.0, 3.0, 8.0}) {
    const auto g = gen_gaussian_params(beta);
    CHECK(g.kappa > 0.0);
    CHECK(g.kappa < 0.565);
    const double total = 2.0 * es.integrate([beta](double x) { return gen_gaussian_density(x, beta); }, 0.0,
                                            std::numeric_limits<double>::infinity());
    CHECK(total == Approx(1.0).margin(1e-8));
  }
  CHECK(gen_gaussian_params(2.0).kappa == Approx(1 / std::sqrt(M_PI)).epsilon(1e-14));
}

TEST_CASE("generalized Gaussian samples") {
  const auto l = sample_gen_gaussian(1.0, 1000000, RngSpec{8, 0});
  std::vector<double> a;
  for (double v : l) a.push_back(std::abs(v));
  CHECK(mean_of(a) == Approx(1.0).margin(0.01));
  const auto g = sample_gen_gaussian(2.0, 1000000, RngSpec{8, 1});
  CHECK(variance_of(g) == Approx(0.5).margin(0.005));

  for (double beta : {0.5, 1.5, 3.0}) {
    const std::size_t n = 20000;
    auto x = sample_gen_gaussian(beta, n, RngSpec{8, 2});
    std::sort(x.begin(), x.end());
    boost::math::quadrature::tanh_sinh<double> ts;
    double ks = 0.0;
    for (double t = -4.0; t <= 4.0; t += 0.25) {
      const double half = t == 0.0 ? 0.0
                                   : ts.integrate([beta](double u) { return gen_gaussian_density(u, beta); }, 0.0,
                                                  std::abs(t));
      const double F = 0.5 + (t < 0 ? -half : half);
      const double ecdf = static_cast<double>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) / n;
      ks = std::max(ks, std::abs(ecdf - F));
    }
    CHECK(ks <= 2.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("random wavelet series") {
  const WaveletBasis b = daubechies(3);
  const auto damped = gen_rws(10.0, 2.0, b, 6, RngSpec{1, 0});
  double max_draw = 0.0;
  for (const auto& [j, c] : damped.planted.coeffs) {
    for (double v : c) max_draw = std::max(max_draw, std::abs(v) * std::exp2(10.0 * j));
  }
  for (const auto& [j, c] : damped.planted.coeffs) {
    if (j == 0) continue;
    for (double v : c) CHECK(std::abs(v) <= std::exp2(-10.0) * max_draw);
  }

  const int J = 12;
  const auto r = gen_rws(1.0, 2.0, b, J, RngSpec{1, 1});
  REQUIRE(r.signal.size() == std::size_t{1} << (J + 1));
  const int levels = J + 1 - 3;
  const auto p = dwt(r.signal, b, levels);
  CHECK(p.J == r.planted.J);
  double scale = 0.0;
  for (const auto& [j, c] : r.planted.coeffs) {
    for (double v : c) scale = std::max(scale, std::abs(v));
  }
  for (const auto& [j, c] : p.coeffs) {
    const auto& want = r.planted.at(j);
    const auto interior = coefficient_values(p, j, BoundaryPolicy::interior);
    for (std::size_t k = 0; k < interior.size(); ++k) REQUIRE(std::abs(interior[k] - want[k]) <= 1e-8 * scale);
  }

  // beta = 2 draws have variance 1/2: undo the damping on the finest planted level.
  const auto big = gen_rws(0.5, 2.0, b, 19, RngSpec{1, 2});
  std::vector<double> x;
  for (double v : big.planted.at(19)) x.push_back(v * std::exp2(0.5 * 19));
  CHECK(variance_of(x) == Approx(0.5).margin(0.005));
}

TEST_CASE("process specs validate and reproduce") {
  ProcessSpec s;
  s.n = 1024;
  s.rng = {5, 1};
  for (auto kind : {ProcessKind::fbm, ProcessKind::mrw, ProcessKind::cmc, ProcessKind::cpc_ln, ProcessKind::cpc_lp,
                    ProcessKind::rws}) {
    s.kind = kind;
    CHECK(parse_process_kind(to_string(kind)) == kind);
    REQUIRE_NOTHROW(s.validate());
    const Signal a = generate(s), b = generate(s);
    CHECK(a.samples == b.samples);
    CHECK(a.size() >= 2);
    CHECK_NOTHROW(a.validate());
  }
  auto bad = [](auto mutate) {
    ProcessSpec t;
    t.n = 1024;
    mutate(t);
    return t;
  };
  CHECK_THROWS_AS(bad([](ProcessSpec& t) { t.H = 1.0; }).validate(), InvalidArgument);
  CHECK_THROWS_AS(bad([](ProcessSpec& t) { t.kind = ProcessKind::mrw; t.L = 100; }).validate(), InvalidArgument);
  CHECK_THROWS_AS(bad([](ProcessSpec& t) { t.kind = ProcessKind::mrw; t.beta = -0.1; }).validate(), InvalidArgument);
  CHECK_THROWS_AS(bad([](ProcessSpec& t) { t.kind = ProcessKind::cmc; t.mu = 0.0; }).validate(), InvalidArgument);
  CHECK_THROWS_AS(bad([](ProcessSpec& t) { t.kind = ProcessKind::cpc_ln; t.r_min = 0.0; }).validate(), InvalidArgument);
  CHECK_THROWS_AS(bad([](ProcessSpec& t) { t.kind = ProcessKind::cpc_lp; t.T = 0.0; }).validate(), InvalidArgument);
  CHECK_THROWS_AS(bad([](ProcessSpec& t) { t.kind = ProcessKind::rws; t.alpha = 0.0; }).validate(), InvalidArgument);
  CHECK_THROWS_AS(bad([](ProcessSpec& t) { t.kind = ProcessKind::rws; t.gg_beta = -1.0; }).validate(), InvalidArgument);
  CHECK_THROWS_AS(parse_process_kind("levy"), InvalidArgument);
}
