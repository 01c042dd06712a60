#include <cmath>

#include "leaderlab/synth.hpp"

namespace leaderlab {

RwsRealization gen_rws(double alpha, double beta, const WaveletBasis& basis, int J, const RngSpec& rng) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("synth: rws alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("synth: rws beta must be > 0");
  if (J < 1 || J > 24) throw InvalidArgument("synth: rws depth J must be in [1, 24]");
  validate_basis(basis);

  Rng eng = rng.engine();
  std::gamma_distribution<double> gamma(1.0 / beta, 1.0);
  std::bernoulli_distribution sign(0.5);

  RwsRealization out;
  CoefficientPyramid& pyr = out.planted;
  pyr.J = J + 1;
  pyr.j_min = 0;
  pyr.j_max = J;
  pyr.n_samples = std::size_t{1} << (J + 1);
  pyr.filter_length = basis.length();
  const std::size_t L = basis.length();
  for (int j = 0; j <= J; ++j) {
    const std::size_t nj = std::size_t{1} << j;
    const double damp = std::exp2(-alpha * j);
    std::vector<double> c(nj);
    for (double& v : c) {
      const double mag = std::pow(gamma(eng), 1.0 / beta);
      v = damp * (sign(eng) ? mag : -mag);
    }
    pyr.coeffs[j] = std::move(c);
    const int o = pyr.J - j;
    const std::size_t span = std::size_t{1} << o;
    const std::size_t reach = (span - 1) * (L - 1);
    pyr.first_wrapped[j] = pyr.n_samples > reach ? std::min(nj, (pyr.n_samples - reach + span - 1) / span) : 0;
  }

  out.signal.samples = idwt(pyr, basis);
  out.signal.t0 = 0.0;
  out.signal.dt = 1.0 / static_cast<double>(pyr.n_samples);
  out.signal.label = "rws";
  return out;
}

}  // namespace leaderlab
