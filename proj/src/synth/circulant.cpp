#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "leaderlab/synth.hpp"

namespace leaderlab {

namespace {

// The FFTW planner is not reentrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

ComplexBuffer alloc_complex(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!p) throw std::bad_alloc();
  return ComplexBuffer(p);
}

void forward_dft(fftw_complex* data, std::size_t n) {
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

std::vector<double> circulant_gaussian(const std::function<double(std::size_t)>& cov, std::size_t n, Rng& rng) {
  if (n < 1) throw InvalidArgument("circulant embedding: n must be >= 1");
  std::size_t m = 2;
  while (m < 2 * (n - 1)) m *= 2;

  for (int attempt = 0; attempt <= 3; ++attempt, m *= 2) {
    auto buf = alloc_complex(m);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t lag = i <= m / 2 ? i : m - i;
      buf[i][0] = cov(lag);
      buf[i][1] = 0.0;
    }
    forward_dft(buf.get(), m);

    double lam_max = 0.0, lam_min = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      lam_max = std::max(lam_max, buf[i][0]);
      lam_min = std::min(lam_min, buf[i][0]);
    }
    if (lam_min < -1e-10 * std::max(lam_max, 1e-300)) continue;

    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double s = std::sqrt(std::max(buf[i][0], 0.0) / static_cast<double>(m));
      const double a = normal(rng);
      const double b = normal(rng);
      buf[i][0] = s * a;
      buf[i][1] = s * b;
    }
    forward_dft(buf.get(), m);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = buf[i][0];
    return out;
  }
  throw DataError("circulant embedding: embedding is not nonnegative definite after 3 doublings");
}

}  // namespace leaderlab
