#include <algorithm>
#include <cmath>

#include "leaderlab/synth.hpp"

namespace leaderlab {

namespace {

int ceil_log2(std::size_t n) {
  int J = 0;
  while ((std::size_t{1} << J) < n) ++J;
  return J;
}

void truncate(Signal& s, std::size_t n) {
  if (n > 0 && n < s.samples.size()) s.samples.resize(n);
}

}  // namespace

std::string to_string(ProcessKind k) {
  switch (k) {
    case ProcessKind::fbm: return "fbm";
    case ProcessKind::mrw: return "mrw";
    case ProcessKind::cmc: return "cmc";
    case ProcessKind::cpc_ln: return "cpc-ln";
    case ProcessKind::cpc_lp: return "cpc-lp";
    case ProcessKind::rws: return "rws";
  }
  return "unknown";
}

ProcessKind parse_process_kind(const std::string& s) {
  for (auto k : {ProcessKind::fbm, ProcessKind::mrw, ProcessKind::cmc, ProcessKind::cpc_ln, ProcessKind::cpc_lp,
                 ProcessKind::rws}) {
    if (s == to_string(k)) return k;
  }
  throw InvalidArgument("process: unknown kind '" + s + "' (expected fbm|mrw|cmc|cpc-ln|cpc-lp|rws)");
}

void ProcessSpec::validate() const {
  auto fail = [](const std::string& what) { throw InvalidArgument("process spec: " + what); };
  const bool depth_given = J > 0;
  if (!depth_given && n < 2) fail("n must be >= 2");
  switch (kind) {
    case ProcessKind::fbm:
      if (!(H > 0.0 && H < 1.0)) fail("fbm requires H in (0,1)");
      break;
    case ProcessKind::mrw:
      if (!(H > 0.0 && H < 1.0)) fail("mrw requires H in (0,1)");
      if (!(beta >= 0.0)) fail("mrw requires beta >= 0");
      if (L != 0.0 && !(L >= static_cast<double>(n))) fail("mrw requires L >= n");
      break;
    case ProcessKind::cmc:
      if (!(mu > 0.0)) fail("cmc requires mu > 0");
      break;
    case ProcessKind::cpc_ln:
    case ProcessKind::cpc_lp:
      if (!(T > 0.0)) fail("cpc requires T > 0");
      if (!(r_min > 0.0 && r_min <= 1.0)) fail("cpc requires r_min in (0,1]");
      if (kind == ProcessKind::cpc_ln && !(sigma2 >= 0.0)) fail("cpc-ln requires sigma2 >= 0");
      if (kind == ProcessKind::cpc_lp && !(w > 0.0)) fail("cpc-lp requires w > 0");
      if (n < 2) fail("cpc requires n >= 2");
      break;
    case ProcessKind::rws:
      if (!(alpha > 0.0)) fail("rws requires alpha > 0");
      if (!(gg_beta > 0.0)) fail("rws requires ggbeta > 0");
      break;
  }
}

Signal generate(const ProcessSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ProcessKind::fbm:
      return gen_fbm(spec.H, spec.n, spec.rng);
    case ProcessKind::mrw:
      return gen_mrw(spec.H, spec.beta, spec.L == 0.0 ? static_cast<double>(spec.n) : spec.L, spec.n, spec.rng);
    case ProcessKind::cmc: {
      Signal s = gen_cmc_motion(spec.mu, spec.J > 0 ? spec.J : ceil_log2(spec.n), spec.rng);
      truncate(s, spec.n);
      return s;
    }
    case ProcessKind::cpc_ln:
    case ProcessKind::cpc_lp: {
      CpcParams p;
      p.kind = spec.kind == ProcessKind::cpc_ln ? CpcKind::ln : CpcKind::lp;
      p.T = spec.T;
      p.r_min = spec.r_min;
      p.sigma2 = spec.sigma2;
      p.mu = spec.cpc_mu;
      p.w = spec.w;
      p.n = spec.n;
      return gen_cpc_motion(p, spec.rng).motion;
    }
    case ProcessKind::rws: {
      const int J = spec.J > 0 ? spec.J : std::max(1, ceil_log2(spec.n) - 1);
      Signal s = gen_rws(spec.alpha, spec.gg_beta, parse_wavelet(spec.wavelet), J, spec.rng).signal;
      truncate(s, spec.n);
      return s;
    }
  }
  throw InvalidArgument("process: unknown kind");
}

}  // namespace leaderlab
