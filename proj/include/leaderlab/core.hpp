#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace leaderlab {

// Error hierarchy. exit_code() is the CLI contract: 2 usage, 3 data/regime, 4 nonconvergence.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 3; }
};

// A caller-supplied parameter violates a precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

// The data cannot support the requested computation (zero leaders with q < 0, constant sample, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// A regime condition of the tail-bound theorem does not hold.
class RegimeError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

struct Signal {
  std::vector<double> samples;
  double t0 = 0.0;
  double dt = 1.0;
  std::string label;

  std::size_t size() const noexcept { return samples.size(); }
  // Throws InvalidArgument unless length >= 2, dt > 0 and every sample is finite.
  void validate() const;
};

// Position (j, k) in a dyadic pyramid; scale 2^{-j}, so larger j is finer.
struct DyadicIndex {
  int j = 0;
  std::size_t k = 0;
};

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
};

// Ordinary least squares of y on x. R^2 = 1 - SS_res/SS_tot, with R^2 = 1 when
// SS_tot = 0 and SS_res = 0 (else 0).
RegressionFit linfit(std::span<const double> x, std::span<const double> y);

double standard_normal_cdf(double x);
// Phi^{-1}(p) for 0 < p < 1; throws InvalidArgument otherwise.
double standard_normal_quantile(double p);

using Rng = std::mt19937_64;

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  // Child stream for a sub-task (realization i, replicate b, ...). Distinct tags give
  // distinct streams; the mapping is a fixed hash, independent of scheduling.
  RngSpec derive(std::uint64_t tag) const noexcept;
  Rng engine() const;

  bool operator==(const RngSpec&) const = default;
};

// Worker count from LEADERLAB_THREADS (falls back to hardware concurrency, at least 1).
std::size_t worker_count();

// Runs fn(i) for i in [0, n) on up to worker_count() threads. Exceptions from tasks are
// rethrown (the one from the lowest index wins) after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// CSV with header `t,value` or a headerless single column (dt = 1, t0 = 0).
Signal read_signal_csv(const std::filesystem::path& path);
void write_signal_csv(const std::filesystem::path& path, const Signal& signal);

}  // namespace leaderlab
