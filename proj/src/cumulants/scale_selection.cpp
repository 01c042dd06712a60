#include <algorithm>

#include "leaderlab/cumulants.hpp"

namespace leaderlab {

namespace {

// Strict preference order among candidates with equal score: wider range, then coarser j1.
bool preferred(const ScaleRange& a, const ScaleRange& b) {
  const int wa = a.j2 - a.j1, wb = b.j2 - b.j1;
  if (wa != wb) return wa > wb;
  return a.j1 < b.j1;
}

}  // namespace

std::vector<ScaleRange> default_candidates(int j_min, int j_max) {
  std::vector<ScaleRange> out;
  for (int j1 = j_min; j1 <= j_max; ++j1) {
    for (int w = 3; w <= 5; ++w) {
      if (j1 + w <= j_max) out.push_back({j1, j1 + w});
    }
  }
  return out;
}

std::vector<ScaleRange> estimation_candidates(const CoefficientPyramid& pyramid) {
  return default_candidates(pyramid.j_min, pyramid.j_max - kTruncatedFineOctaves);
}

ScaleSelection select_scale_range(std::span<const CoefficientPyramid> pyramids, std::span<const ScaleRange> candidates,
                                  BoundaryPolicy policy) {
  if (candidates.empty()) throw InvalidArgument("scale selection: empty candidate list");
  if (pyramids.empty()) throw InvalidArgument("scale selection: no pyramids");
  for (const auto& c : candidates) {
    if (c.j2 - c.j1 < 2) throw InvalidArgument("scale selection: candidate ranges need j2 - j1 >= 2");
  }

  std::vector<std::size_t> pick(pyramids.size());
  parallel_for(pyramids.size(), [&](std::size_t i) {
    std::size_t best = 0;
    double best_r2 = -1.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double r2 = hmin_regression(pyramids[i], candidates[c], policy).r_squared;
      if (r2 > best_r2 || (r2 == best_r2 && preferred(candidates[c], candidates[best]))) {
        best = c;
        best_r2 = r2;
      }
    }
    pick[i] = best;
  });

  std::vector<std::size_t> votes(candidates.size(), 0);
  for (std::size_t p : pick) ++votes[p];

  ScaleSelection out;
  std::size_t best = 0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    out.votes[{candidates[c].j1, candidates[c].j2}] += votes[c];
    if (votes[c] > votes[best] || (votes[c] == votes[best] && preferred(candidates[c], candidates[best]))) best = c;
  }
  out.range = candidates[best];
  return out;
}

}  // namespace leaderlab
