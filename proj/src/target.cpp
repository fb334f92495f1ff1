#include "steinlab/target.hpp"

#include <cmath>
#include <stdexcept>

#include "steinlab/quadrature.hpp"

namespace steinlab {

double TargetModel::density(double x) const { return std::exp(-V(x)) / Z; }

TargetModel make_gaussian_target(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("target: sigma must be > 0");
  TargetModel t;
  t.mu = mu;
  t.sigma = sigma;
  t.C = 0.0;
  t.V = [mu, sigma](double x) { return 0.5 * (x - mu) * (x - mu) / sigma; };
  t.dV = [mu, sigma](double x) { return (x - mu) / sigma; };
  t.Z = std::sqrt(2.0 * M_PI * sigma);
  return t;
}

TargetModel make_target(std::function<double(double)> V,
                        std::function<double(double)> dV, double mu,
                        double sigma, double C, double xlo, double xhi) {
  if (!(sigma > 0.0)) throw std::invalid_argument("target: sigma must be > 0");
  if (!(xhi > xlo)) throw std::invalid_argument("target: bad window");
  TargetModel t;
  t.V = std::move(V);
  t.dV = std::move(dV);
  t.mu = mu;
  t.sigma = sigma;
  t.C = C;
  t.Z = integrate([&t](double x) { return std::exp(-t.V(x)); }, xlo, xhi,
                  1e-10);
  // domination bound V >= C + V0, sampled
  for (int i = 0; i <= 400; ++i) {
    const double x = xlo + (xhi - xlo) * i / 400.0;
    if (t.V(x) < C + t.V0(x) - 1e-9)
      throw std::invalid_argument("target: potential violates V >= C + V0");
  }
  return t;
}

double GridDensity::mass() const {
  const double h = dx();
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * h;
}

double GridDensity::mean() const {
  const double h = dx();
  double s = 0.5 * (values.front() * x(0) + values.back() * x(size() - 1));
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i] * x(i);
  return s * h / mass();
}

double GridDensity::variance() const {
  const double m = mean();
  const double h = dx();
  auto sq = [&](std::size_t i) {
    const double d = x(i) - m;
    return values[i] * d * d;
  };
  double s = 0.5 * (sq(0) + sq(size() - 1));
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += sq(i);
  return s * h / mass();
}

void validate(const GridDensity& g) {
  if (g.values.size() < 2)
    throw std::invalid_argument("grid density: need at least 2 points");
  if (!(g.x_max > g.x_min))
    throw std::invalid_argument("grid density: x_max must exceed x_min");
  for (double v : g.values) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("grid density: values must be finite and >= 0");
  }
  if (g.probability && std::abs(g.mass() - 1.0) > 1e-8)
    throw std::invalid_argument("grid density: mass deviates from 1");
}

GridDensity gaussian_density(double x_min, double x_max, std::size_t n,
                             double mu, double var) {
  if (!(var > 0.0)) throw std::invalid_argument("gaussian_density: var > 0");
  GridDensity g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.values.resize(n);
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * var);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = g.x(i) - mu;
    g.values[i] = norm * std::exp(-0.5 * d * d / var);
  }
  renormalize(g);
  return g;
}

GridDensity mixture_density(double x_min, double x_max, std::size_t n,
                            const std::vector<double>& weights,
                            const std::vector<double>& mus,
                            const std::vector<double>& vars) {
  if (weights.empty() || weights.size() != mus.size() ||
      weights.size() != vars.size())
    throw std::invalid_argument("mixture_density: inconsistent component lists");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixture_density: weights >= 0");
    wsum += w;
  }
  if (!(wsum > 0.0)) throw std::invalid_argument("mixture_density: zero weight");
  GridDensity g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.values.assign(n, 0.0);
  for (std::size_t c = 0; c < weights.size(); ++c) {
    const double norm = weights[c] / (wsum * std::sqrt(2.0 * M_PI * vars[c]));
    for (std::size_t i = 0; i < n; ++i) {
      const double d = g.x(i) - mus[c];
      g.values[i] += norm * std::exp(-0.5 * d * d / vars[c]);
    }
  }
  renormalize(g);
  return g;
}

void renormalize(GridDensity& g) {
  const double m = g.mass();
  if (!(m > 0.0)) throw std::invalid_argument("renormalize: zero mass");
  for (double& v : g.values) v /= m;
  g.probability = true;
}

}  // namespace steinlab
