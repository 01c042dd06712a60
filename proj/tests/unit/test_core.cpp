#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "leaderlab/core.hpp"

using namespace leaderlab;
using Catch::Approx;

namespace {

// erf by its Maclaurin series in long double; converges for every |x| used here.
long double erf_series(long double x) {
  long double term = x, sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    sum += term / (2 * n + 1);
  }
  return 2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum;
}

long double phi_series(long double x) { return 0.5L * (1.0L + erf_series(x / std::sqrt(2.0L))); }

double quantile_by_bisection(double p) {
  long double lo = -8, hi = 8;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (phi_series(mid) < p ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

// Composite Simpson of the standard normal density on [0, x].
double phi_by_simpson(double x) {
  const int m = 20000;
  const double h = x / m;
  auto f = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
  double s = f(0) + f(x);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return 0.5 + s * h / 3.0;
}

}  // namespace

TEST_CASE("linfit exact line") {
  const std::vector<double> x{0, 1, 2}, y{1, 3, 5};
  const auto f = linfit(x, y);
  CHECK(f.slope == Approx(2.0).margin(1e-14));
  CHECK(f.intercept == Approx(1.0).margin(1e-14));
  CHECK(f.r_squared == 1.0);
  CHECK(f.n_points == 3);
}

TEST_CASE("linfit constant y has r2 = 1") {
  const std::vector<double> x{0, 1}, y{2.5, 2.5};
  const auto f = linfit(x, y);
  CHECK(f.slope == 0.0);
  CHECK(f.intercept == 2.5);
  CHECK(f.r_squared == 1.0);
}

TEST_CASE("linfit matches an explicit 2x2 normal-equations solve") {
  const std::vector<double> x{1, 2, 3, 4}, y{2.1, 3.9, 6.2, 7.8};
  // [n sx; sx sxx] [a; b] = [sy; sxy] by Cramer's rule.
  double n = 4, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (int i = 0; i < 4; ++i) {
    sx += x[i];
    sxx += x[i] * x[i];
    sy += y[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  const double a = (sy * sxx - sx * sxy) / det;
  const double b = (n * sxy - sx * sy) / det;
  const auto f = linfit(x, y);
  CHECK(f.slope == Approx(b).epsilon(1e-13));
  CHECK(f.intercept == Approx(a).epsilon(1e-13));
  CHECK(f.r_squared > 0.99);
  CHECK(f.r_squared <= 1.0);
}

TEST_CASE("linfit errors") {
  const std::vector<double> x{1, 1, 1}, y{1, 2, 3}, y2{1, 2};
  CHECK_THROWS_AS(linfit(x, y), InvalidArgument);
  CHECK_THROWS_AS(linfit(x, y2), InvalidArgument);
}

TEST_CASE("linfit is affine equivariant") {
  Rng eng(3);
  std::normal_distribution<double> nd;
  std::vector<double> x(50), y(50), z(50);
  for (int i = 0; i < 50; ++i) {
    x[i] = i * 0.3;
    y[i] = 1.7 * x[i] + nd(eng);
  }
  const double a = -2.5, b = 4.0;
  for (int i = 0; i < 50; ++i) z[i] = a * y[i] + b;
  const auto f = linfit(x, y), g = linfit(x, z);
  CHECK(g.slope == Approx(a * f.slope).epsilon(1e-12));
  CHECK(g.intercept == Approx(a * f.intercept + b).epsilon(1e-12));
  CHECK(g.r_squared == Approx(f.r_squared).epsilon(1e-12));
}

TEST_CASE("normal quantile examples") {
  CHECK(std::abs(standard_normal_quantile(0.5)) < 1e-15);
  CHECK(standard_normal_quantile(0.975) == Approx(quantile_by_bisection(0.975)).margin(1e-9));
  CHECK(standard_normal_quantile(0.975) == Approx(1.959964).margin(1e-6));
  CHECK(standard_normal_quantile(phi_by_simpson(1.0)) == Approx(1.0).margin(1e-9));
  CHECK(standard_normal_quantile(0.841344746) == Approx(1.0).margin(1e-8));
  CHECK_THROWS_AS(standard_normal_quantile(0.0), InvalidArgument);
  CHECK_THROWS_AS(standard_normal_quantile(1.0), InvalidArgument);
}

TEST_CASE("normal quantile inverts the cdf") {
  double worst = 0.0, worst_oracle = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double p = (i - 0.5) / 1000.0;
    const double x = standard_normal_quantile(p);
    worst = std::max(worst, std::abs(standard_normal_cdf(x) - p));
    if (i % 50 == 0) worst_oracle = std::max(worst_oracle, std::abs(x - quantile_by_bisection(p)));
  }
  CHECK(worst <= 1e-8);
  CHECK(worst_oracle <= 1e-9);
  for (double p : {1e-4, 1e-6, 1 - 1e-6}) {
    CHECK(standard_normal_quantile(p) == Approx(quantile_by_bisection(p)).margin(1e-9));
  }
}

TEST_CASE("rng streams reproduce and separate") {
  const RngSpec a{42, 0};
  auto e1 = a.engine(), e2 = a.engine();
  for (int i = 0; i < 1000; ++i) REQUIRE(e1() == e2());
  auto e3 = RngSpec{42, 1}.engine();
  auto e4 = a.engine();
  int same = 0;
  for (int i = 0; i < 1000; ++i) same += e3() == e4();
  CHECK(same == 0);
  std::set<std::uint64_t> streams;
  for (std::uint64_t t = 0; t < 1000; ++t) streams.insert(a.derive(t).stream_id);
  CHECK(streams.size() == 1000);
  CHECK(a.derive(7) == a.derive(7));
}

TEST_CASE("parallel_for covers every index and rethrows the lowest failure") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(1000, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) REQUIRE(h.load() == 1);
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 60) throw DataError("task " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()) == "task 17");
  }
  // Nested calls run serially instead of deadlocking or oversubscribing.
  std::atomic<int> total{0};
  parallel_for(4, [&](std::size_t) { parallel_for(10, [&](std::size_t) { total++; }); });
  CHECK(total == 40);
}

TEST_CASE("signal validation and csv round trip") {
  Signal s;
  s.samples = {1.0};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.samples = {1.0, std::nan("")};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.samples = {1.0, 2.0};
  s.dt = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);

  const auto dir = std::filesystem::temp_directory_path() / "leaderlab_core_test";
  std::filesystem::create_directories(dir);
  Signal t;
  t.t0 = 0.5;
  t.dt = 0.25;
  t.samples = {0.1, -2.0 / 3.0, 1e-300, 12345.678901234567};
  write_signal_csv(dir / "a.csv", t);
  const Signal r = read_signal_csv(dir / "a.csv");
  CHECK(r.samples == t.samples);
  CHECK(r.t0 == Approx(0.5));
  CHECK(r.dt == Approx(0.25));

  {
    std::ofstream out(dir / "b.csv");
    out << "3\n4.5\n-1\n";
  }
  const Signal h = read_signal_csv(dir / "b.csv");
  CHECK(h.samples == std::vector<double>{3, 4.5, -1});
  CHECK(h.dt == 1.0);
  CHECK(h.t0 == 0.0);
  CHECK_THROWS_AS(read_signal_csv(dir / "missing.csv"), DataError);
  std::filesystem::remove_all(dir);
}
