#include <algorithm>
#include <cmath>
#include <limits>

#include "leaderlab/stattests.hpp"

namespace leaderlab {

namespace {

// m_k(d) = int_0^1 t^k e^{t d} dt for d <= 0, k = 0, 1, 2.
void moments(double d, double& m0, double& m1, double& m2) {
  if (d > -1.0) {
    m0 = m1 = m2 = 0.0;
    double term = 1.0;
    for (int i = 0; i < 60; ++i) {
      m0 += term / (i + 1);
      m1 += term / (i + 2);
      m2 += term / (i + 3);
      term *= d / (i + 1);
      if (std::abs(term) < 1e-18) break;
    }
    return;
  }
  const double e = std::exp(d);
  m0 = -std::expm1(d) / -d;
  m1 = (e * (d - 1.0) + 1.0) / (d * d);
  m2 = (e * (d * d - 2.0 * d + 2.0) - 2.0) / (d * d * d);
}

// J(r,s) = int_0^1 exp((1-t) r + t s) dt and its first and second partial derivatives.
struct Seg {
  double J, Jr, Js, Jrr, Jrs, Jss;
};

Seg segment(double r, double s) {
  double m0, m1, m2;
  const double d = s - r;
  Seg out;
  if (d <= 0.0) {
    moments(d, m0, m1, m2);
    const double e = std::exp(r);
    out = {e * m0, e * (m0 - m1), e * m1, e * (m0 - 2.0 * m1 + m2), e * (m1 - m2), e * m2};
  } else {
    // Integrate from the right end so the exponent stays <= 0.
    moments(-d, m0, m1, m2);
    const double e = std::exp(s);
    out = {e * m0, e * m1, e * (m0 - m1), e * m2, e * (m1 - m2), e * (m0 - 2.0 * m1 + m2)};
  }
  return out;
}

// Standardized, tie-merged data: strictly increasing x with weights summing to 1.
struct Data {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> suffix_w;   // sum_{j > i} w_j
  std::vector<double> suffix_wx;  // sum_{j > i} w_j x_j
};

class Solver {
 public:
  Solver(const Data& data, const LogConcaveOptions& opt) : d_(data), opt_(opt) {}

  void run() {
    const std::size_t m = d_.x.size();
    knots_ = {0, m - 1};
    const double width = d_.x.back() - d_.x.front();
    phi_ = {-std::log(width), -std::log(width)};
    obj_ = objective(knots_, phi_);
    newton(knots_, phi_, obj_);

    for (iterations_ = 0; iterations_ < opt_.max_iterations; ++iterations_) {
      std::size_t best = 0;
      const double dmax = best_new_knot(best);
      residual_ = dmax;
      if (dmax <= kDerivTol) return;

      const auto pos = std::upper_bound(knots_.begin(), knots_.end(), best);
      const std::size_t seg = static_cast<std::size_t>(pos - knots_.begin()) - 1;
      const double lam = (d_.x[best] - d_.x[knots_[seg]]) / (d_.x[knots_[seg + 1]] - d_.x[knots_[seg]]);
      const double v = (1.0 - lam) * phi_[seg] + lam * phi_[seg + 1];
      knots_.insert(pos, best);
      phi_.insert(phi_.begin() + static_cast<std::ptrdiff_t>(seg + 1), v);
      const double before = obj_;
      constrained_step();
      if (obj_ - before < opt_.objective_tol * 1e-3 && dmax < 1e-6) {
        residual_ = dmax;
        return;
      }
    }
    std::size_t dummy = 0;
    residual_ = best_new_knot(dummy);
    if (residual_ > kDerivTol * 1e3) {
      throw ConvergenceError("log-concave MLE: no convergence after " + std::to_string(opt_.max_iterations) +
                             " iterations (max directional derivative " + std::to_string(residual_) + ")");
    }
  }

  const std::vector<std::size_t>& knots() const { return knots_; }
  const std::vector<double>& phi() const { return phi_; }
  double objective_value() const { return obj_; }
  std::size_t iterations() const { return iterations_; }

 private:
  static constexpr double kDerivTol = 1e-10;

  // Interpolation weights sum_i w_i phi(x_i) = sum_k W_k phi_k.
  std::vector<double> knot_weights(const std::vector<std::size_t>& K) const {
    std::vector<double> W(K.size(), 0.0);
    for (std::size_t s = 0; s + 1 < K.size(); ++s) {
      const double xa = d_.x[K[s]], xb = d_.x[K[s + 1]];
      for (std::size_t i = K[s]; i < K[s + 1]; ++i) {
        const double lam = (d_.x[i] - xa) / (xb - xa);
        W[s] += (1.0 - lam) * d_.w[i];
        W[s + 1] += lam * d_.w[i];
      }
    }
    W.back() += d_.w[K.back()];
    return W;
  }

  double objective(const std::vector<std::size_t>& K, const std::vector<double>& phi) const {
    const std::vector<double> W = knot_weights(K);
    double lin = 0.0, integral = 0.0;
    for (std::size_t k = 0; k < K.size(); ++k) lin += W[k] * phi[k];
    for (std::size_t s = 0; s + 1 < K.size(); ++s) {
      integral += (d_.x[K[s + 1]] - d_.x[K[s]]) * segment(phi[s], phi[s + 1]).J;
    }
    return lin - integral;
  }

  void accept(double value) {
    obj_ = value;
    if (opt_.on_iteration) opt_.on_iteration(value);
  }

  // Unconstrained Newton ascent over the knot values; `obj` tracks the objective.
  void newton(const std::vector<std::size_t>& K, std::vector<double>& phi, double& obj, bool report = true) {
    const std::size_t k = K.size();
    const std::vector<double> W = knot_weights(K);
    std::vector<double> g(k), diag(k), off(k > 0 ? k - 1 : 0), delta(k), trial(k);
    for (int it = 0; it < 200; ++it) {
      std::fill(diag.begin(), diag.end(), 0.0);
      for (std::size_t i = 0; i < k; ++i) g[i] = W[i];
      for (std::size_t s = 0; s + 1 < k; ++s) {
        const double len = d_.x[K[s + 1]] - d_.x[K[s]];
        const Seg t = segment(phi[s], phi[s + 1]);
        g[s] -= len * t.Jr;
        g[s + 1] -= len * t.Js;
        diag[s] += len * t.Jrr;
        diag[s + 1] += len * t.Jss;
        off[s] = len * t.Jrs;
      }
      // Thomas algorithm on the symmetric positive definite system (-Hessian) delta = g.
      std::vector<double> c(k), r(k);
      double denom = diag[0];
      c[0] = k > 1 ? off[0] / denom : 0.0;
      r[0] = g[0] / denom;
      for (std::size_t i = 1; i < k; ++i) {
        denom = diag[i] - off[i - 1] * c[i - 1];
        c[i] = i + 1 < k ? off[i] / denom : 0.0;
        r[i] = (g[i] - off[i - 1] * r[i - 1]) / denom;
      }
      delta[k - 1] = r[k - 1];
      for (std::size_t i = k - 1; i-- > 0;) delta[i] = r[i] - c[i] * delta[i + 1];

      double decrement = 0.0;
      for (std::size_t i = 0; i < k; ++i) decrement += g[i] * delta[i];
      if (!(decrement > 1e-15)) return;

      double step = 1.0;
      bool moved = false;
      for (int h = 0; h < 60; ++h, step *= 0.5) {
        for (std::size_t i = 0; i < k; ++i) trial[i] = phi[i] + step * delta[i];
        const double value = objective(K, trial);
        if (value >= obj + 1e-4 * step * decrement) {
          phi = trial;
          if (report) {
            accept(value);
          } else {
            obj = value;
          }
          moved = true;
          break;
        }
      }
      if (!moved) return;
    }
  }

  // Slope decrease at each interior knot (>= 0 for concavity); entry 0 and last unused.
  std::vector<double> kinks(const std::vector<std::size_t>& K, const std::vector<double>& phi) const {
    std::vector<double> out(K.size(), 0.0);
    for (std::size_t i = 1; i + 1 < K.size(); ++i) {
      const double left = (phi[i] - phi[i - 1]) / (d_.x[K[i]] - d_.x[K[i - 1]]);
      const double right = (phi[i + 1] - phi[i]) / (d_.x[K[i + 1]] - d_.x[K[i]]);
      out[i] = left - right;
    }
    return out;
  }

  // Newton over the enlarged knot set, pulled back to the concave cone when needed and
  // dropping knots whose kink reaches zero.
  void constrained_step() {
    for (int guard = 0; guard < 1000; ++guard) {
      std::vector<double> target = phi_;
      double target_obj = obj_;
      newton(knots_, target, target_obj, false);
      const std::vector<double> kin_old = kinks(knots_, phi_);
      const std::vector<double> kin_new = kinks(knots_, target);

      double t_star = 1.0;
      for (std::size_t i = 1; i + 1 < knots_.size(); ++i) {
        if (kin_new[i] < 0.0) {
          const double t = kin_old[i] / (kin_old[i] - kin_new[i]);
          t_star = std::min(t_star, std::max(t, 0.0));
        }
      }
      if (t_star >= 1.0) {
        phi_ = target;
        if (target_obj >= obj_) accept(target_obj);
        return;
      }
      std::vector<double> moved(phi_.size());
      for (std::size_t i = 0; i < phi_.size(); ++i) moved[i] = phi_[i] + t_star * (target[i] - phi_[i]);
      const double moved_obj = objective(knots_, moved);
      if (moved_obj >= obj_) {
        phi_ = moved;
        accept(moved_obj);
      }
      // Remove interior knots that are (numerically) no longer kinks.
      const std::vector<double> kin = kinks(knots_, phi_);
      std::vector<std::size_t> keep_k{knots_.front()};
      std::vector<double> keep_p{phi_.front()};
      for (std::size_t i = 1; i + 1 < knots_.size(); ++i) {
        const double scale = 1e-10 * (1.0 + std::abs(kin_old[i]));
        if (kin[i] > scale) {
          keep_k.push_back(knots_[i]);
          keep_p.push_back(phi_[i]);
        }
      }
      keep_k.push_back(knots_.back());
      keep_p.push_back(phi_.back());
      if (keep_k.size() == knots_.size()) {
        // Guard against stalling on rounding: drop the binding knot explicitly.
        std::size_t worst = 1;
        double worst_t = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < knots_.size(); ++i) {
          if (kin_new[i] < 0.0) {
            const double t = kin_old[i] / (kin_old[i] - kin_new[i]);
            if (t < worst_t) {
              worst_t = t;
              worst = i;
            }
          }
        }
        keep_k.erase(keep_k.begin() + static_cast<std::ptrdiff_t>(worst));
        keep_p.erase(keep_p.begin() + static_cast<std::ptrdiff_t>(worst));
      }
      knots_ = std::move(keep_k);
      phi_ = std::move(keep_p);
      const double value = objective(knots_, phi_);
      if (value >= obj_ - 1e-13 * (1.0 + std::abs(obj_))) {
        obj_ = std::max(obj_, value);
      } else {
        obj_ = value;  // forced removal of a nonzero kink: re-optimized below
      }
    }
  }

  // Largest directional derivative of the objective along the concave hinge -(x - x_i)_+
  // over data points that are not knots.
  double best_new_knot(std::size_t& best) const {
    const std::size_t m = d_.x.size();
    std::vector<double> phi_all(m);
    for (std::size_t s = 0; s + 1 < knots_.size(); ++s) {
      const double xa = d_.x[knots_[s]], xb = d_.x[knots_[s + 1]];
      for (std::size_t i = knots_[s]; i <= knots_[s + 1]; ++i) {
        const double lam = (d_.x[i] - xa) / (xb - xa);
        phi_all[i] = (1.0 - lam) * phi_[s] + lam * phi_[s + 1];
      }
    }
    // Suffix integrals of exp(phi) and x exp(phi) over [x_i, x_m].
    std::vector<double> m0(m, 0.0), m1(m, 0.0);
    for (std::size_t i = m - 1; i-- > 0;) {
      const double len = d_.x[i + 1] - d_.x[i];
      const Seg t = segment(phi_all[i], phi_all[i + 1]);
      m0[i] = m0[i + 1] + len * t.J;
      m1[i] = m1[i + 1] + len * (d_.x[i] * t.J + len * t.Js);
    }
    double dmax = -std::numeric_limits<double>::infinity();
    std::size_t ki = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (ki < knots_.size() && knots_[ki] == i) {
        ++ki;
        continue;
      }
      const double D = (m1[i] - d_.suffix_wx[i]) - d_.x[i] * (m0[i] - d_.suffix_w[i]);
      if (D > dmax) {
        dmax = D;
        best = i;
      }
    }
    return dmax;
  }

  const Data& d_;
  const LogConcaveOptions& opt_;
  std::vector<std::size_t> knots_;
  std::vector<double> phi_;
  double obj_ = 0.0;
  double residual_ = 0.0;
  std::size_t iterations_ = 0;
};

std::size_t segment_index(const std::vector<double>& knots, double x) {
  const auto it = std::upper_bound(knots.begin(), knots.end(), x);
  std::size_t s = static_cast<std::size_t>(it - knots.begin());
  if (s == 0) return 0;
  return std::min(s - 1, knots.size() - 2);
}

}  // namespace

double LogConcaveMLE::log_density(double x) const {
  if (x < knots.front() || x > knots.back()) return -std::numeric_limits<double>::infinity();
  const std::size_t s = segment_index(knots, x);
  const double lam = (x - knots[s]) / (knots[s + 1] - knots[s]);
  return (1.0 - lam) * log_density_at_knots[s] + lam * log_density_at_knots[s + 1];
}

double LogConcaveMLE::integral() const {
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    total += (knots[s + 1] - knots[s]) * segment(log_density_at_knots[s], log_density_at_knots[s + 1]).J;
  }
  return total;
}

double LogConcaveMLE::cdf(double x) const {
  if (x <= knots.front()) return 0.0;
  if (x >= knots.back()) return 1.0;
  const std::size_t s = segment_index(knots, x);
  double total = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    total += (knots[i + 1] - knots[i]) * segment(log_density_at_knots[i], log_density_at_knots[i + 1]).J;
  }
  total += (x - knots[s]) * segment(log_density_at_knots[s], log_density(x)).J;
  return std::min(total, 1.0);
}

double LogConcaveMLE::mean() const {
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const double len = knots[s + 1] - knots[s];
    const Seg t = segment(log_density_at_knots[s], log_density_at_knots[s + 1]);
    total += len * (knots[s] * t.J + len * t.Js);
  }
  return total;
}

LogConcaveMLE fit_logconcave_mle(std::span<const double> samples, const LogConcaveOptions& options) {
  if (samples.size() < 2) throw InvalidArgument("log-concave MLE: need at least 2 samples");
  for (double v : samples) {
    if (!std::isfinite(v)) throw InvalidArgument("log-concave MLE: samples must be finite");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw DataError("log-concave MLE: constant sample has no density MLE");

  const double n = static_cast<double>(sorted.size());
  double center = 0.0;
  for (double v : sorted) center += v;
  center /= n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - center) * (v - center);
  const double scale = std::sqrt(ss / n);

  Data d;
  for (double v : sorted) {
    const double z = (v - center) / scale;
    if (!d.x.empty() && z == d.x.back()) {
      d.w.back() += 1.0 / n;
    } else {
      d.x.push_back(z);
      d.w.push_back(1.0 / n);
    }
  }
  if (d.x.size() < 2) throw DataError("log-concave MLE: sample collapses to a single value after scaling");
  const std::size_t m = d.x.size();
  d.suffix_w.assign(m, 0.0);
  d.suffix_wx.assign(m, 0.0);
  for (std::size_t i = m - 1; i-- > 0;) {
    d.suffix_w[i] = d.suffix_w[i + 1] + d.w[i + 1];
    d.suffix_wx[i] = d.suffix_wx[i + 1] + d.w[i + 1] * d.x[i + 1];
  }

  const double log_scale = std::log(scale);
  LogConcaveOptions opt = options;
  if (options.on_iteration) {
    opt.on_iteration = [&](double v) { options.on_iteration(v - log_scale); };
  }
  Solver solver(d, opt);
  solver.run();

  LogConcaveMLE out;
  for (std::size_t k = 0; k < solver.knots().size(); ++k) {
    out.knots.push_back(center + scale * d.x[solver.knots()[k]]);
    out.log_density_at_knots.push_back(solver.phi()[k] - log_scale);
  }
  // Keep the outermost knots on the exact data extremes.
  out.knots.front() = sorted.front();
  out.knots.back() = sorted.back();
  out.iterations = solver.iterations();
  out.objective = solver.objective_value() - log_scale;
  return out;
}

std::vector<double> sample_from_mle(const LogConcaveMLE& model, std::size_t n, const RngSpec& rng) {
  const std::size_t segs = model.knots.size() - 1;
  if (model.knots.size() < 2 || model.log_density_at_knots.size() != model.knots.size()) {
    throw InvalidArgument("sample_from_mle: invalid model");
  }
  std::vector<double> cum(segs);
  double total = 0.0;
  for (std::size_t s = 0; s < segs; ++s) {
    total += (model.knots[s + 1] - model.knots[s]) *
             segment(model.log_density_at_knots[s], model.log_density_at_knots[s + 1]).J;
    cum[s] = total;
  }
  Rng eng = rng.engine();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(n);
  for (double& x : out) {
    const double pick = unif(eng) * total;
    std::size_t s = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), pick) - cum.begin());
    s = std::min(s, segs - 1);
    const double a = model.knots[s], b = model.knots[s + 1];
    const double len = b - a;
    const double beta = (model.log_density_at_knots[s + 1] - model.log_density_at_knots[s]) / len;
    const double t = beta * len;
    const double u = unif(eng);
    if (std::abs(t) < 1e-12) {
      x = a + u * len;
    } else if (t > 0.0) {
      x = b + std::log(u + (1.0 - u) * std::exp(-t)) / beta;
    } else {
      x = a + std::log1p(u * std::expm1(t)) / beta;
    }
    x = std::clamp(x, a, b);
  }
  return out;
}

}  // namespace leaderlab
