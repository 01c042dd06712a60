#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "leaderlab/core.hpp"

namespace leaderlab {

struct TestReport {
  std::string name;
  double statistic = 0.0;
  std::optional<double> p_value;
  std::optional<double> threshold;  // permutation test: T*_{(k)}, +inf when k > B
  double alpha = 0.05;
  bool rejected = false;
  std::size_t n = 0;
  std::optional<std::size_t> B;
  std::optional<std::size_t> replicates_run;  // permutation test with early stopping
  RngSpec seed;
  bool subsampled = false;                   // Shapiro-Wilk on more than 5000 values
  std::size_t n_input = 0;
};

inline constexpr std::size_t kShapiroWilkMaxN = 5000;

// Shapiro-Wilk W and Royston's p-value. Samples above 5000 are subsampled without
// replacement using `rng`; the report records it.
TestReport shapiro_wilk(std::span<const double> samples, double alpha = 0.05, const RngSpec& rng = {});

// (Phi^{-1}((i - 0.5)/n), x_(i)) for the sorted sample, i = 1..n. With `standardize`, x is
// first centered and divided by its sample standard deviation.
std::vector<std::pair<double, double>> qq_data(std::span<const double> samples, bool standardize = false);

// Piecewise-linear concave log-density on [knots.front(), knots.back()].
struct LogConcaveMLE {
  std::vector<double> knots;
  std::vector<double> log_density_at_knots;
  std::size_t iterations = 0;
  double objective = 0.0;  // (1/n) sum phi(X_i) - int exp(phi)

  double lower() const { return knots.front(); }
  double upper() const { return knots.back(); }
  double log_density(double x) const;  // -inf outside the support
  double cdf(double x) const;
  double integral() const;  // int exp(phi), 1 at the optimum
  double mean() const;
};

struct LogConcaveOptions {
  std::size_t max_iterations = 500;
  double objective_tol = 1e-8;
  double concavity_tol = 1e-9;
  // Called after every accepted iterate with the objective value (test hook for monotonicity).
  std::function<void(double)> on_iteration;
};

LogConcaveMLE fit_logconcave_mle(std::span<const double> samples, const LogConcaveOptions& options = {});

std::vector<double> sample_from_mle(const LogConcaveMLE& model, std::size_t n, const RngSpec& rng);

// sup over centers x in the pooled sample and radii r > 0 of
// |(1/n) sum (1{X_i in (x-r,x+r)} - 1{X*_i in (x-r,x+r)})|. O((2n)^2).
double interval_discrepancy(std::span<const double> x, std::span<const double> x_star);

struct LogConcavityOptions {
  std::size_t B = 99;
  double alpha = 0.05;
  // Stop drawing replicates once the decision cannot change. The decision is identical to
  // the full run; replicates_run records how many were drawn.
  bool early_stop = true;
};

TestReport logconcavity_test(std::span<const double> samples, const RngSpec& rng,
                             const LogConcavityOptions& options = {});

// Index k = ceil((B+1)(1-alpha)) of the order statistic used as the rejection threshold.
std::size_t permutation_threshold_index(std::size_t B, double alpha);

std::string report_json(const TestReport& report);

// One row of a batch run: test `report` on the leaders of `signal` at octave `scale`.
struct TestRow {
  std::string signal;
  int scale = 0;
  TestReport report;
};

// CSV `signal,scale,test,statistic,p_or_T,threshold,rejected`. p_or_T holds the p-value
// when there is one and T otherwise.
void write_test_rows_csv(const std::filesystem::path& path, std::span<const TestRow> rows);

}  // namespace leaderlab
