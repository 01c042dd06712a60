#include <boost/math/filters/daubechies.hpp>
#include <cmath>
#include <utility>

#include "leaderlab/wavelet.hpp"

namespace leaderlab {

namespace {

template <unsigned P>
std::vector<double> scaling_filter() {
  const auto h = boost::math::filters::daubechies_scaling_filter<double, P>();
  return {h.begin(), h.end()};
}

template <unsigned... Ps>
std::vector<double> scaling_filter_for(int p, std::integer_sequence<unsigned, Ps...>) {
  std::vector<double> out;
  ((static_cast<int>(Ps + 1) == p ? (out = scaling_filter<Ps + 1>(), true) : false) || ...);
  return out;
}

}  // namespace

std::string WaveletBasis::name() const { return "db" + std::to_string(n_vanishing); }

WaveletBasis daubechies(int n_vanishing) {
  if (n_vanishing < 1 || n_vanishing > 10) {
    throw InvalidArgument("wavelet: invalid basis, Daubechies order must be in [1,10], got " +
                          std::to_string(n_vanishing));
  }
  WaveletBasis b;
  b.family = WaveletFamily::daubechies;
  b.n_vanishing = n_vanishing;
  b.filter_lo = scaling_filter_for(n_vanishing, std::make_integer_sequence<unsigned, 10>{});
  const std::size_t L = b.filter_lo.size();
  b.filter_hi.resize(L);
  for (std::size_t m = 0; m < L; ++m) {
    b.filter_hi[m] = (m % 2 == 0 ? 1.0 : -1.0) * b.filter_lo[L - 1 - m];
  }
  validate_basis(b);
  return b;
}

WaveletBasis parse_wavelet(const std::string& name) {
  if (name.size() < 3 || name.compare(0, 2, "db") != 0) {
    throw InvalidArgument("wavelet: invalid basis '" + name + "' (expected dbN)");
  }
  int p = 0;
  try {
    std::size_t used = 0;
    p = std::stoi(name.substr(2), &used);
    if (used != name.size() - 2) throw std::invalid_argument(name);
  } catch (const std::exception&) {
    throw InvalidArgument("wavelet: invalid basis '" + name + "' (expected dbN)");
  }
  return daubechies(p);
}

void validate_basis(const WaveletBasis& b) {
  const std::size_t L = b.filter_lo.size();
  if (L < 2 || L % 2 != 0 || b.filter_hi.size() != L) {
    throw InvalidArgument("wavelet: invalid basis, filters must have equal even length");
  }
  double sum = 0.0;
  for (double h : b.filter_lo) sum += h;
  if (std::abs(sum - std::sqrt(2.0)) > 1e-12) {
    throw InvalidArgument("wavelet: invalid basis, sum of low-pass filter differs from sqrt(2)");
  }
  // Orthonormality of even shifts for both filters and cross-orthogonality.
  for (std::size_t s = 0; s < L; s += 2) {
    double hh = 0.0, gg = 0.0, hg = 0.0;
    for (std::size_t m = 0; m + s < L; ++m) {
      hh += b.filter_lo[m] * b.filter_lo[m + s];
      gg += b.filter_hi[m] * b.filter_hi[m + s];
      hg += b.filter_lo[m] * b.filter_hi[m + s];
    }
    const double target = s == 0 ? 1.0 : 0.0;
    if (std::abs(hh - target) > 1e-12 || std::abs(gg - target) > 1e-12 || std::abs(hg) > 1e-12) {
      throw InvalidArgument("wavelet: invalid basis, quadrature-mirror relations violated");
    }
  }
  for (int p = 0; p < b.n_vanishing; ++p) {
    double moment = 0.0, scale = 0.0;
    for (std::size_t m = 0; m < L; ++m) {
      const double w = std::pow(static_cast<double>(m), p);
      moment += w * b.filter_hi[m];
      scale += std::abs(w * b.filter_hi[m]);
    }
    if (std::abs(moment) > 1e-10 * std::max(1.0, scale)) {
      throw InvalidArgument("wavelet: invalid basis, moment " + std::to_string(p) +
                            " of the high-pass filter does not vanish");
    }
  }
}

}  // namespace leaderlab
