#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "leaderlab/core.hpp"
#include "leaderlab/wavelet.hpp"

namespace leaderlab {

struct PerScaleLogCumulants {
  std::map<int, double> mean;      // mu_j = (1/n_j) sum log l_{j,k}
  std::map<int, double> variance;  // divisor n_j
  std::map<int, std::size_t> count;
  std::vector<std::string> warnings;
};

// Log-leader sample mean and variance per scale over j1..j2 (natural log).
PerScaleLogCumulants log_cumulants_per_scale(const LeaderPyramid& leaders, ScaleRange range,
                                             BoundaryPolicy policy = BoundaryPolicy::interior);

struct CumulantFit {
  int order = 1;
  std::map<int, double> per_scale;
  double c0 = 0.0;
  double cm = 0.0;
  RegressionFit fit;
};

// OLS of C_m(j) on ln(2^{-j}) over j1..j2 through the normal equations.
CumulantFit fit_cm(const std::map<int, double>& per_scale, ScaleRange range, int order);

enum class CiMethod { clt, bootstrap_percentile };

std::string to_string(CiMethod m);

struct EstimateWithCI {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  CiMethod method = CiMethod::clt;
  std::size_t n_replicates = 0;
};

enum class C2Divisor { n_minus_1, n };

struct EstimationOptions {
  double alpha = 0.05;
  C2Divisor c2_divisor = C2Divisor::n_minus_1;
  BoundaryPolicy boundary = BoundaryPolicy::interior;
};

struct C1C2Estimate {
  EstimateWithCI c1;
  EstimateWithCI c2;
  std::vector<double> c1_samples;  // per-realization slopes
  std::vector<double> c2_samples;
  double c2_mean_divisor_n = 0.0;         // (1/N) sum c2_i
  double c2_mean_divisor_n_minus_1 = 0.0; // (1/(N-1)) sum c2_i
  std::vector<std::string> warnings;
};

// Per-realization (c1_i, c2_i); c1 = mean, c2 = (1/(N-1)) sum c2_i by default; CLT intervals
// estimate +/- z_{alpha/2} s / sqrt(N) with s the sample standard deviation (divisor N-1).
C1C2Estimate estimate_c1_c2(std::span<const LeaderPyramid> realizations, ScaleRange range,
                            const EstimationOptions& options = {});

// Per-realization slopes only, for callers that aggregate themselves (bootstrap).
std::pair<double, double> realization_c1_c2(const LeaderPyramid& leaders, ScaleRange range,
                                            BoundaryPolicy policy = BoundaryPolicy::interior);

// CLT interval for the mean of `samples`.
EstimateWithCI clt_interval(std::span<const double> samples, double estimate, double alpha);

// (0.46 / (v^{3/2} N^{3/2})) sum |x_i - mean|^3.
double berry_esseen_bound(std::span<const double> c1_samples, double c2_hat);

using Statistic = std::function<double(std::span<const double>)>;

// Percentile bootstrap: B resamples with replacement; [q_{alpha/2}, q_{1-alpha/2}] of the
// replicate statistics (linear interpolation between order statistics).
EstimateWithCI bootstrap_percentile(std::span<const double> samples, const Statistic& statistic, std::size_t B,
                                    double level, const RngSpec& rng);

// Quantile with linear interpolation between order statistics (p in [0,1]).
double empirical_quantile(std::vector<double> values, double p);

struct ScaleSelection {
  ScaleRange range;
  std::map<std::pair<int, int>, std::size_t> votes;  // per candidate, realizations that picked it
};

// All (j1, j2) with 3 <= j2 - j1 <= 5 inside [j_min, j_max].
std::vector<ScaleRange> default_candidates(int j_min, int j_max);

// Leaders at the finest octaves take their sup over too few finer scales; the automatic
// range search stays this many octaves away from the finest computed scale.
inline constexpr int kTruncatedFineOctaves = 4;

// default_candidates over [j_min, j_max - kTruncatedFineOctaves] of a computed pyramid.
std::vector<ScaleRange> estimation_candidates(const CoefficientPyramid& pyramid);

// Per realization, the candidate with the largest h_min regression R^2 (ties: wider, then
// coarser j1); returns the modal pick with the same tie rule.
ScaleSelection select_scale_range(std::span<const CoefficientPyramid> pyramids, std::span<const ScaleRange> candidates,
                                  BoundaryPolicy policy = BoundaryPolicy::interior);

void write_estimate_json(const std::filesystem::path& path, const C1C2Estimate& est, ScaleRange range,
                         std::size_t n_realizations, const RngSpec* seed);
// Row layout of a confidence-interval table: parameter,method,estimate,LB,UB,UB-LB.
void write_estimate_csv(const std::filesystem::path& path, const C1C2Estimate& est, const std::string& label);

}  // namespace leaderlab
