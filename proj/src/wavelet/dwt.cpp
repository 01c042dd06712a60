#include <cmath>

#include "leaderlab/wavelet.hpp"

namespace leaderlab {

const std::vector<double>& CoefficientPyramid::at(int j) const {
  const auto it = coeffs.find(j);
  if (it == coeffs.end()) throw InvalidArgument("pyramid: scale " + std::to_string(j) + " not available");
  return it->second;
}

CoefficientPyramid dwt(const Signal& signal, const WaveletBasis& basis, int levels) {
  signal.validate();
  validate_basis(basis);
  if (levels < 1 || levels > 40) throw InvalidArgument("dwt: levels must be in [1, 40]");
  const std::size_t L = basis.length();
  const std::size_t block = std::size_t{1} << levels;
  if (signal.size() < block * L) {
    throw InvalidArgument("dwt: signal too short, need at least 2^" + std::to_string(levels) + " * " +
                          std::to_string(L) + " samples, got " + std::to_string(signal.size()));
  }
  const std::size_t n = signal.size() / block * block;

  CoefficientPyramid pyr;
  pyr.n_samples = n;
  pyr.filter_length = L;
  pyr.J = static_cast<int>(std::ceil(std::log2(static_cast<double>(n)) - 1e-12));
  pyr.j_max = pyr.J - 1;
  pyr.j_min = pyr.J - levels;

  std::vector<double> approx(signal.samples.begin(), signal.samples.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> next;
  for (int o = 1; o <= levels; ++o) {
    const std::size_t len = approx.size();
    const std::size_t half = len / 2;
    next.assign(half, 0.0);
    std::vector<double> detail(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
      double a = 0.0, d = 0.0;
      std::size_t idx = (2 * k) % len;
      for (std::size_t m = 0; m < L; ++m) {
        a += basis.filter_lo[m] * approx[idx];
        d += basis.filter_hi[m] * approx[idx];
        if (++idx == len) idx = 0;
      }
      next[k] = a;
      detail[k] = d;
    }
    const double l1 = std::exp2(-0.5 * o);
    for (double& c : detail) c *= l1;

    const int j = pyr.J - o;
    const std::size_t span = (std::size_t{1} << o);
    const std::size_t reach = (span - 1) * (L - 1);
    std::size_t first = 0;
    if (n > reach) first = (n - reach + span - 1) / span;
    pyr.first_wrapped[j] = std::min(first, half);
    pyr.coeffs[j] = std::move(detail);
    approx.swap(next);
  }
  return pyr;
}

std::vector<double> idwt(const CoefficientPyramid& pyramid, const WaveletBasis& basis) {
  validate_basis(basis);
  if (pyramid.coeffs.empty()) throw InvalidArgument("idwt: empty pyramid");
  const std::size_t L = basis.length();
  std::vector<double> approx(pyramid.coeffs.begin()->second.size(), 0.0);
  for (auto it = pyramid.coeffs.begin(); it != pyramid.coeffs.end(); ++it) {
    const int o = pyramid.octave(it->first);
    const auto& c = it->second;
    if (c.size() != approx.size()) throw InvalidArgument("idwt: inconsistent scale lengths");
    const double scale = std::exp2(0.5 * o);
    const std::size_t len = 2 * c.size();
    std::vector<double> out(len, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double a = approx[k];
      const double d = scale * c[k];
      std::size_t idx = (2 * k) % len;
      for (std::size_t m = 0; m < L; ++m) {
        out[idx] += basis.filter_lo[m] * a + basis.filter_hi[m] * d;
        if (++idx == len) idx = 0;
      }
    }
    approx.swap(out);
  }
  return approx;
}

int default_levels(std::size_t n, std::size_t filter_length) {
  if (filter_length == 0) throw InvalidArgument("default_levels: empty filter");
  int levels = 0;
  while ((std::size_t{2} << levels) * 2 * filter_length <= n) ++levels;
  if (levels < 1) throw InvalidArgument("default_levels: signal too short for a single octave");
  return levels;
}

}  // namespace leaderlab
