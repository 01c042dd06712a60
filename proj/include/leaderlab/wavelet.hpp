#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "leaderlab/core.hpp"

namespace leaderlab {

enum class WaveletFamily { daubechies };

struct WaveletBasis {
  WaveletFamily family = WaveletFamily::daubechies;
  int n_vanishing = 3;
  std::vector<double> filter_lo;  // sums to sqrt(2)
  std::vector<double> filter_hi;  // g_m = (-1)^m h_{L-1-m}

  std::size_t length() const noexcept { return filter_lo.size(); }
  std::string name() const;
};

// Daubechies filter pair with n_vanishing in [1, 10].
WaveletBasis daubechies(int n_vanishing);
// Parses "dbN".
WaveletBasis parse_wavelet(const std::string& name);
// Throws InvalidArgument unless the pair satisfies the orthonormal QMF relations and
// the vanishing-moment conditions.
void validate_basis(const WaveletBasis& basis);

// Scale indices follow the dyadic convention: scale 2^{-j}, j grows toward fine scales,
// and a signal of 2^J samples has 2^j coefficients at scale j. A transform with `levels`
// octaves covers j = J-levels .. J-1; octave o = J - j counts from the finest level (o = 1).
struct CoefficientPyramid {
  std::map<int, std::vector<double>> coeffs;  // L1-normalized detail coefficients c_{j,k}
  int j_min = 0;
  int j_max = 0;
  int J = 0;                     // log2 of the transformed length, rounded up
  std::size_t n_samples = 0;     // samples actually transformed (input truncated to a multiple of 2^levels)
  std::size_t filter_length = 0;
  // Per scale, the first index whose filter support wraps past the end of the signal.
  std::map<int, std::size_t> first_wrapped;

  const std::vector<double>& at(int j) const;
  int octave(int j) const noexcept { return J - j; }
  int scale_of_octave(int o) const noexcept { return J - o; }
  int levels() const noexcept { return j_max - j_min + 1; }
};

// Periodic orthonormal DWT over `levels` octaves, rescaled to the L1 convention
// c = 2^{-o/2} d at octave o. Requires n >= 2^levels * filter length.
CoefficientPyramid dwt(const Signal& signal, const WaveletBasis& basis, int levels);

// Default octave count: the largest with at least 2 * filter_length coefficients at the
// coarsest octave.
int default_levels(std::size_t n, std::size_t filter_length);

// Inverse of dwt: details c_{j,k} (L1 convention) with a zero approximation at the
// coarsest level. Output length is 2^levels times the coarsest array length.
std::vector<double> idwt(const CoefficientPyramid& pyramid, const WaveletBasis& basis);

enum class LeaderVariant { one_leader, three_leader };

std::string to_string(LeaderVariant v);
LeaderVariant parse_leader_variant(const std::string& s);

struct LeaderPyramid {
  std::map<int, std::vector<double>> leaders;
  LeaderVariant variant = LeaderVariant::three_leader;
  int j_coarse_limit = 0;  // finest scale entering every sup
  // Per scale, the half-open index range of leaders untouched by wrapped coefficients
  // or wrapped neighbours. Empty when the scale has no such leader.
  std::map<int, std::pair<std::size_t, std::size_t>> interior;

  const std::vector<double>& at(int j) const;
  int j_min() const { return leaders.begin()->first; }
  int j_max() const { return leaders.rbegin()->first; }
};

LeaderPyramid compute_leaders(const CoefficientPyramid& pyramid, LeaderVariant variant);

// Which positions feed statistics. `interior` drops coefficients whose support wraps
// around the signal end and leaders built from them; `all` keeps the full periodic arrays.
// Pyramids without boundary bookkeeping (hand-built) behave as `all` under either policy.
enum class BoundaryPolicy { interior, all };

std::string to_string(BoundaryPolicy p);
BoundaryPolicy parse_boundary_policy(const std::string& s);

std::span<const double> leader_values(const LeaderPyramid& leaders, int j, BoundaryPolicy policy);
std::span<const double> coefficient_values(const CoefficientPyramid& pyramid, int j, BoundaryPolicy policy);

struct ScaleRange {
  int j1 = 0;
  int j2 = 0;
  bool operator==(const ScaleRange&) const = default;
};

struct StructureFunctionTable {
  std::vector<double> q_values;
  std::vector<int> scales;                // ascending
  std::vector<std::vector<double>> s;     // s[scale index][q index] = S(j,q)
  LeaderVariant variant = LeaderVariant::three_leader;

  double at(int j, std::size_t qi) const;
};

// S(j,q) = 2^{-j} sum_k l_{j,k}^q over every available scale. Under the interior policy
// the sum runs over the retained positions and is rescaled by n_j / (retained count).
StructureFunctionTable structure_functions(const LeaderPyramid& leaders, std::span<const double> q_values,
                                           BoundaryPolicy policy = BoundaryPolicy::interior);

// Per q, OLS of log2 S(j,q) on -j over j1..j2; the slope estimates zeta(q).
std::vector<RegressionFit> scaling_function(const StructureFunctionTable& table, ScaleRange range);

// Default q grid -5, -4.9, ..., 5.
std::vector<double> default_q_grid();

inline constexpr double kLegendreEmpty = -std::numeric_limits<double>::infinity();

// L(H) = min over the q grid of (1 + qH - zeta(q)), clamped to <= 1.
std::vector<double> legendre_spectrum(std::span<const double> q_values, std::span<const double> zeta,
                                      std::span<const double> h_grid);

// OLS of log2 sup_k |c_{j,k}| on -j over j1..j2.
RegressionFit hmin_regression(const CoefficientPyramid& pyramid, ScaleRange range,
                              BoundaryPolicy policy = BoundaryPolicy::interior);

void write_pyramid_json(const std::filesystem::path& path, const CoefficientPyramid& pyramid);
void write_leaders_json(const std::filesystem::path& path, const LeaderPyramid& leaders);
// Columns j,q,S,logS (log base 2); with J >= 0 an extra octave = J - j column.
void write_structure_csv(const std::filesystem::path& path, const StructureFunctionTable& table, int J = -1);

}  // namespace leaderlab
