#include <algorithm>
#include <cmath>

#include "leaderlab/wavelet.hpp"

namespace leaderlab {

std::string to_string(LeaderVariant v) { return v == LeaderVariant::one_leader ? "one_leader" : "three_leader"; }

LeaderVariant parse_leader_variant(const std::string& s) {
  if (s == "1" || s == "one_leader") return LeaderVariant::one_leader;
  if (s == "3" || s == "three_leader") return LeaderVariant::three_leader;
  throw InvalidArgument("leaders: unknown variant '" + s + "' (expected 1 or 3)");
}

std::string to_string(BoundaryPolicy p) { return p == BoundaryPolicy::interior ? "interior" : "all"; }

BoundaryPolicy parse_boundary_policy(const std::string& s) {
  if (s == "interior") return BoundaryPolicy::interior;
  if (s == "all" || s == "periodic") return BoundaryPolicy::all;
  throw InvalidArgument("boundary: unknown policy '" + s + "' (expected interior|all)");
}

std::span<const double> leader_values(const LeaderPyramid& leaders, int j, BoundaryPolicy policy) {
  const auto& l = leaders.at(j);
  std::span<const double> all(l);
  if (policy == BoundaryPolicy::all) return all;
  const auto it = leaders.interior.find(j);
  if (it == leaders.interior.end()) return all;
  return all.subspan(it->second.first, it->second.second - it->second.first);
}

std::span<const double> coefficient_values(const CoefficientPyramid& pyramid, int j, BoundaryPolicy policy) {
  const auto& c = pyramid.at(j);
  std::span<const double> all(c);
  if (policy == BoundaryPolicy::all) return all;
  const auto it = pyramid.first_wrapped.find(j);
  if (it == pyramid.first_wrapped.end()) return all;
  return all.first(std::min(it->second, c.size()));
}

const std::vector<double>& LeaderPyramid::at(int j) const {
  const auto it = leaders.find(j);
  if (it == leaders.end()) throw InvalidArgument("leaders: scale " + std::to_string(j) + " not available");
  return it->second;
}

LeaderPyramid compute_leaders(const CoefficientPyramid& pyramid, LeaderVariant variant) {
  if (pyramid.coeffs.empty()) throw InvalidArgument("leaders: empty pyramid");

  LeaderPyramid out;
  out.variant = variant;
  out.j_coarse_limit = pyramid.coeffs.rbegin()->first;

  // One-leaders, finest scale first.
  std::map<int, std::vector<double>> one;
  std::map<int, std::size_t> one_hi;
  const std::vector<double>* finer = nullptr;
  std::size_t finer_hi = 0;
  for (auto it = pyramid.coeffs.rbegin(); it != pyramid.coeffs.rend(); ++it) {
    const int j = it->first;
    const auto& c = it->second;
    std::vector<double> l(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) l[k] = std::abs(c[k]);
    std::size_t hi = c.size();
    if (auto w = pyramid.first_wrapped.find(j); w != pyramid.first_wrapped.end()) hi = std::min(hi, w->second);
    if (finer) {
      if (finer->size() != 2 * c.size()) throw InvalidArgument("leaders: scale lengths are not dyadic");
      for (std::size_t k = 0; k < c.size(); ++k) {
        l[k] = std::max({l[k], (*finer)[2 * k], (*finer)[2 * k + 1]});
      }
      hi = std::min(hi, finer_hi / 2);
    }
    one_hi[j] = hi;
    finer = &(one[j] = std::move(l));
    finer_hi = hi;
  }

  const bool tracked = !pyramid.first_wrapped.empty();
  if (variant == LeaderVariant::one_leader) {
    out.leaders = std::move(one);
    if (tracked) {
      for (const auto& [j, hi] : one_hi) out.interior[j] = {0, hi};
    }
    return out;
  }

  for (const auto& [j, l] : one) {
    const std::size_t n = l.size();
    std::vector<double> l3(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double left = l[(k + n - 1) % n];
      const double right = l[(k + 1) % n];
      l3[k] = std::max({left, l[k], right});
    }
    out.leaders[j] = std::move(l3);
    if (tracked) {
      const std::size_t hi = one_hi[j];
      out.interior[j] = hi >= 2 ? std::pair<std::size_t, std::size_t>{1, hi - 1} : std::pair<std::size_t, std::size_t>{0, 0};
    }
  }
  return out;
}

}  // namespace leaderlab
