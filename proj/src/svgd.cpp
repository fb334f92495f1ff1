#include "steinlab/svgd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "steinlab/divergence.hpp"

namespace steinlab::svgd {
namespace {

constexpr double kEscapeRadius = 1e6;

double checked_weight(const TargetModel& t, double x) {
  const double w = std::exp(t.V(x) - 0.5 * t.V0(x));
  if (!std::isfinite(w))
    throw std::overflow_error("svgd: ansatz weight e^{V - V0/2} overflowed");
  return w;
}

// dW/dx = W (V' - V0'/2)
double weight_slope(const TargetModel& t, double x, double w) {
  return w * (t.dV(x) - 0.5 * t.dV0(x));
}

// per-step cached particle quantities
struct Cache {
  std::vector<double> w;       // W(X_j)
  std::vector<double> dv;      // V'(X_j)
  std::vector<double> dw;      // W'(X_j)
  std::vector<std::size_t> order;  // indices sorted by position
};

Cache build_cache(const std::vector<double>& xs, const TargetModel& t) {
  Cache c;
  const std::size_t n = xs.size();
  c.w.resize(n);
  c.dv.resize(n);
  c.dw.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    c.w[j] = checked_weight(t, xs[j]);
    c.dv[j] = t.dV(xs[j]);
    c.dw[j] = weight_slope(t, xs[j], c.w[j]);
  }
  c.order.resize(n);
  std::iota(c.order.begin(), c.order.end(), std::size_t{0});
  std::sort(c.order.begin(), c.order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  return c;
}

// phi*(x) with precomputed per-particle data; summation follows the
// position-sorted order so relabelling cannot change the result
double phi_star_cached(double x, const std::vector<double>& xs,
                       const Cache& c, const AnsatzKernel& kern) {
  const double wx = checked_weight(kern.target, x);
  double acc = 0.0;
  for (std::size_t idx : c.order) {
    const double s = x - xs[idx];
    const double kv = kern.k(s);
    // K V' - dK/dy with dK/dy = W(x)[-k'(x-y) W(y) + k(x-y) W'(y)]
    acc += wx * kv * c.w[idx] * c.dv[idx] -
           wx * (-kern.dk(s) * c.w[idx] + kv * c.dw[idx]);
  }
  return acc / static_cast<double>(xs.size());
}

GridDensity kde_density(const std::vector<double>& xs, const TargetModel& t) {
  const std::size_t n = xs.size();
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : xs) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  const double sd = std::sqrt(std::max(var, 1e-12));

  const double half = 8.0 * std::sqrt(t.sigma);
  GridDensity g;
  g.x_min = t.mu - half;
  g.x_max = t.mu + half;
  g.values.assign(512, 0.0);
  // never let the smoothing window fall between grid points, otherwise a
  // tightly collapsed ensemble paints nothing at all
  const double bw = std::max(sd * std::pow(static_cast<double>(n), -0.2), g.dx());
  const double norm = 1.0 / (static_cast<double>(n) * bw * std::sqrt(2.0 * M_PI));
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double xi = g.x(i);
    double s = 0.0;
    for (double p : xs) {
      const double z = (xi - p) / bw;
      s += std::exp(-0.5 * z * z);
    }
    g.values[i] = s * norm;
  }
  return g;
}

void record(SvgdTrace& tr, int step, const std::vector<double>& xs,
            const AnsatzKernel& kern) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : xs) var += (v - mean) * (v - mean);
  var /= n;
  tr.step.push_back(step);
  tr.mean.push_back(mean);
  tr.variance.push_back(var);
  GridDensity kde = kde_density(xs, kern.target);
  if (kde.mass() > 1e-12) {
    renormalize(kde);
    tr.kl_kde.push_back(divergence::kl(kde, kern.target));
  } else {
    // ensemble escaped the diagnostic window; the estimate is meaningless
    tr.kl_kde.push_back(std::numeric_limits<double>::infinity());
  }
}

}  // namespace

AnsatzKernel make_matern_ansatz(TargetModel target) {
  AnsatzKernel k;
  k.target = std::move(target);
  k.k = [](double s) { return std::exp(-std::abs(s)); };
  k.dk = [](double s) {
    if (s == 0.0) return 0.0;  // symmetric a.e. selection at the kink
    return s > 0.0 ? -std::exp(-s) : std::exp(s);
  };
  return k;
}

AnsatzKernel make_gaussian_ansatz(TargetModel target, double ell) {
  if (!(ell > 0.0))
    throw std::invalid_argument("svgd: length scale must be positive");
  AnsatzKernel k;
  k.target = std::move(target);
  k.k = [ell](double s) { return std::exp(-0.5 * s * s / (ell * ell)); };
  k.dk = [ell](double s) {
    return -s / (ell * ell) * std::exp(-0.5 * s * s / (ell * ell));
  };
  return k;
}

double weight(const AnsatzKernel& k, double x) {
  return checked_weight(k.target, x);
}

double kernel_K(const AnsatzKernel& k, double x, double y) {
  return checked_weight(k.target, x) * k.k(x - y) * checked_weight(k.target, y);
}

double kernel_dK_dy(const AnsatzKernel& k, double x, double y) {
  const double wx = checked_weight(k.target, x);
  const double wy = checked_weight(k.target, y);
  return wx * (-k.dk(x - y) * wy + k.k(x - y) * weight_slope(k.target, y, wy));
}

ParticleEnsemble make_gaussian_ensemble(std::size_t n, double mu, double var,
                                        double eps, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("svgd: need at least one particle");
  if (!(var > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("svgd: variance and step size must be positive");
  ParticleEnsemble e;
  e.rng_seed = seed;
  e.step_schedule = [eps](int) { return eps; };
  e.positions.resize(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double sd = std::sqrt(var);
  // Box-Muller keeps the draw reproducible across standard libraries
  for (std::size_t i = 0; i < n; i += 2) {
    const double u1 = std::max(uni(rng), 1e-300);
    const double u2 = uni(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    e.positions[i] = mu + sd * r * std::cos(2.0 * M_PI * u2);
    if (i + 1 < n) e.positions[i + 1] = mu + sd * r * std::sin(2.0 * M_PI * u2);
  }
  return e;
}

double phi_star(double x, const ParticleEnsemble& e, const AnsatzKernel& k) {
  if (e.positions.empty())
    throw std::invalid_argument("svgd: empty ensemble");
  const auto cache = build_cache(e.positions, k.target);
  return phi_star_cached(x, e.positions, cache, k);
}

SvgdResult svgd_run(ParticleEnsemble e, const AnsatzKernel& k, int n_steps,
                    int record_every) {
  if (n_steps < 1) throw std::invalid_argument("svgd: n_steps must be >= 1");
  if (record_every < 1)
    throw std::invalid_argument("svgd: record_every must be >= 1");
  if (!e.step_schedule)
    throw std::invalid_argument("svgd: missing step schedule");
  for (double p : e.positions) {
    if (!std::isfinite(p))
      throw std::invalid_argument("svgd: positions must be finite");
  }

  SvgdResult out;
  out.trace = {};
  record(out.trace, 0, e.positions, k);
  std::vector<double> next(e.positions.size());
  for (int n = 0; n < n_steps; ++n) {
    const double eps = e.step_schedule(n);
    if (!(eps >= 0.0))
      throw std::invalid_argument("svgd: schedule must be nonnegative");
    const auto cache = build_cache(e.positions, k.target);
    for (std::size_t i = 0; i < e.positions.size(); ++i) {
      next[i] = e.positions[i] -
                eps * phi_star_cached(e.positions[i], e.positions, cache, k);
      if (std::abs(next[i]) > kEscapeRadius) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "svgd: particle %zu diverged at step %d (|x| > 1e6)", i,
                      n + 1);
        throw std::runtime_error(buf);
      }
    }
    e.positions.swap(next);
    if ((n + 1) % record_every == 0 || n + 1 == n_steps)
      record(out.trace, n + 1, e.positions, k);
  }
  out.ensemble = std::move(e);
  return out;
}

}  // namespace steinlab::svgd
