#include <algorithm>
#include <cmath>

#include "leaderlab/wavelet.hpp"

namespace leaderlab {

double StructureFunctionTable::at(int j, std::size_t qi) const {
  const auto it = std::lower_bound(scales.begin(), scales.end(), j);
  if (it == scales.end() || *it != j || qi >= q_values.size()) {
    throw InvalidArgument("structure functions: entry (" + std::to_string(j) + ", q#" + std::to_string(qi) +
                          ") not available");
  }
  return s[static_cast<std::size_t>(it - scales.begin())][qi];
}

StructureFunctionTable structure_functions(const LeaderPyramid& leaders, std::span<const double> q_values,
                                           BoundaryPolicy policy) {
  if (q_values.empty()) throw InvalidArgument("structure functions: q_values is empty");
  if (leaders.leaders.empty()) throw InvalidArgument("structure functions: empty leader pyramid");
  const bool negative_q = std::any_of(q_values.begin(), q_values.end(), [](double q) { return q < 0.0; });

  StructureFunctionTable table;
  table.q_values.assign(q_values.begin(), q_values.end());
  table.variant = leaders.variant;
  for (const auto& [j, full] : leaders.leaders) {
    const std::span<const double> l = leader_values(leaders, j, policy);
    if (l.empty()) throw DataError("structure functions: no retained leaders at scale " + std::to_string(j));
    if (negative_q) {
      for (std::size_t k = 0; k < l.size(); ++k) {
        if (!(l[k] > 0.0)) {
          throw DataError("structure functions: zero leader at (j=" + std::to_string(j) + ", k=" +
                          std::to_string(k) + ") with negative q requested");
        }
      }
    }
    std::vector<double> row(q_values.size());
    const double w = std::exp2(-static_cast<double>(j)) * static_cast<double>(full.size()) / static_cast<double>(l.size());
    for (std::size_t qi = 0; qi < q_values.size(); ++qi) {
      const double q = q_values[qi];
      double sum = 0.0;
      for (double v : l) sum += std::pow(v, q);
      row[qi] = w * sum;
    }
    table.scales.push_back(j);
    table.s.push_back(std::move(row));
  }
  return table;
}

std::vector<RegressionFit> scaling_function(const StructureFunctionTable& table, ScaleRange range) {
  if (range.j2 - range.j1 < 1) {
    throw InvalidArgument("scaling function: insufficient scales, range must contain at least 2 scales");
  }
  if (table.scales.empty() || range.j1 < table.scales.front() || range.j2 > table.scales.back()) {
    throw InvalidArgument("scaling function: insufficient scales, range [" + std::to_string(range.j1) + "," +
                          std::to_string(range.j2) + "] outside the table");
  }
  std::vector<double> x;
  for (int j = range.j1; j <= range.j2; ++j) x.push_back(-static_cast<double>(j));
  std::vector<RegressionFit> fits;
  fits.reserve(table.q_values.size());
  std::vector<double> y(x.size());
  for (std::size_t qi = 0; qi < table.q_values.size(); ++qi) {
    for (int j = range.j1; j <= range.j2; ++j) {
      y[static_cast<std::size_t>(j - range.j1)] = std::log2(table.at(j, qi));
    }
    fits.push_back(linfit(x, y));
  }
  return fits;
}

std::vector<double> default_q_grid() {
  std::vector<double> q;
  for (int i = -50; i <= 50; ++i) q.push_back(i / 10.0);
  return q;
}

std::vector<double> legendre_spectrum(std::span<const double> q_values, std::span<const double> zeta,
                                      std::span<const double> h_grid) {
  if (q_values.size() != zeta.size() || q_values.empty()) {
    throw InvalidArgument("legendre: q grid and zeta must be non-empty and of equal length");
  }
  if (std::none_of(q_values.begin(), q_values.end(), [](double q) { return q == 0.0; })) {
    throw InvalidArgument("legendre: q grid must contain q = 0");
  }
  std::vector<double> out;
  out.reserve(h_grid.size());
  for (double h : h_grid) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q_values.size(); ++i) best = std::min(best, 1.0 + q_values[i] * h - zeta[i]);
    best = std::min(best, 1.0);
    out.push_back(best < 0.0 ? kLegendreEmpty : best);
  }
  return out;
}

RegressionFit hmin_regression(const CoefficientPyramid& pyramid, ScaleRange range, BoundaryPolicy policy) {
  if (range.j2 - range.j1 < 1) throw InvalidArgument("hmin regression: need at least 2 scales");
  std::vector<double> x, y;
  for (int j = range.j1; j <= range.j2; ++j) {
    const std::span<const double> c = coefficient_values(pyramid, j, policy);
    double sup = 0.0;
    for (double v : c) sup = std::max(sup, std::abs(v));
    if (sup == 0.0) throw DataError("hmin regression: all coefficients vanish at scale " + std::to_string(j));
    x.push_back(-static_cast<double>(j));
    y.push_back(std::log2(sup));
  }
  return linfit(x, y);
}

}  // namespace leaderlab
