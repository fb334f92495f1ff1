#include "steinlab/failures.hpp"

#include <cmath>
#include <stdexcept>

#include "steinlab/quadrature.hpp"

namespace steinlab::failures {
namespace {

// surface area of the unit sphere in R^d
double surface(int d) {
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace

std::vector<F1Entry> f1_report(int d, double r,
                               const std::vector<int>& n_list) {
  if (d < 1) throw std::invalid_argument("f1_report: dimension must be >= 1");
  if (!(r > 1.0 + 0.5 * d))
    throw std::invalid_argument("f1_report: need r > 1 + d/2");
  if (n_list.empty() || n_list.front() < 1)
    throw std::invalid_argument("f1_report: index list must start at n >= 1");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument(
          "f1_report: index list must be strictly increasing");

  // Everything here lives in the angular frequency w, the same spectral
  // variable the kernel module calibrates against: the Sobolev weight
  // (1 + |w|^2)^{-r} is then the r-th power of the Matern-type profile.
  const double sd = surface(d);
  const auto q = [d, r](double s) {
    const double s2 = s * s;
    return (s2 - 0.5 * d + r * s2 / (1.0 + s2)) * std::pow(1.0 + s2, -r);
  };

  std::vector<F1Entry> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    F1Entry e;
    e.n = n;
    e.kl = 0.5 * d * (1.0 / n - 1.0 + std::log(static_cast<double>(n)));

    // |ghat_n(w)|^2 = c2 e^{-a |w|^2} from the closed-form transform of the
    // rescaled mollifier; its gradient squares to a^2 |w|^2 times the same.
    // At n = 1 the two halves of the bound cancel exactly, as they must for
    // rho_1 = rho_inf.
    const double c2 = std::pow(1.0 - 0.5 / n, -d);
    const double a = 2.0 / (2.0 * n - 1.0);
    const double spectral = sd * integrate_to_inf(
                                     [&](double s) {
                                       return c2 * std::exp(-a * s * s) * q(s) *
                                              std::pow(s, d - 1);
                                     },
                                     0.0, 1e-11);
    const double gradient =
        0.25 * a * a * sd *
        integrate_to_inf(
            [&](double s) {
              return c2 * std::exp(-a * s * s) * s * s *
                     std::pow(1.0 + s * s, -r) * std::pow(s, d - 1);
            },
            0.0, 1e-11);
    e.d2_upper = spectral + gradient;
    e.ratio = e.kl / e.d2_upper;
    out.push_back(e);
  }
  return out;
}

F2Report f2_report(int d, double beta, double p) {
  if (d < 1) throw std::invalid_argument("f2_report: dimension must be >= 1");
  if (!(p > 1.0) || !(p <= 2.0))
    throw std::invalid_argument(
        "f2_report: p must lie in (1, 2], the conjugate range of 2r/(2r-1)");

  F2Report rep;
  rep.p = p;
  rep.exp_grad = p * (d + 3.0 - beta);
  rep.exp_drift = p * (d + 1.0 - beta);
  rep.grad_integrable = rep.exp_grad > d;
  rep.drift_integrable = rep.exp_drift > d;

  // normalization of the tail density 1/(1 + |x|^{d+2})
  const double sd = surface(d);
  const double mass = sd * integrate_to_inf(
                               [d](double s) {
                                 return std::pow(s, d - 1) /
                                        (1.0 + std::pow(s, d + 2));
                               },
                               0.0, 1e-11);
  const double c = 1.0 / mass;

  // truncated moments of V = |x|^2; the integrand decays like c/s so the
  // running integral tracks c S_{d-1} ln R
  for (double radius = 4.0; radius <= 1024.0; radius *= 2.0)
    rep.radii.push_back(radius);
  std::vector<double> logs;
  for (double radius : rep.radii) {
    const double m = c * sd *
                     integrate(
                         [d](double s) {
                           return std::pow(s, d + 1) /
                                  (1.0 + std::pow(s, d + 2));
                         },
                         0.0, radius, 1e-10);
    rep.moments.push_back(m);
    logs.push_back(std::log(radius));
  }
  rep.fitted_slope = fit_line(logs, rep.moments).slope;
  rep.analytic_slope = c * sd;
  rep.kl_divergent =
      rep.fitted_slope > 0.0 &&
      std::abs(rep.fitted_slope / rep.analytic_slope - 1.0) <= 0.05;
  return rep;
}

namespace {

// Kernel-weighted drift correlation for V = |x|^gamma, k = |z|^beta:
// gamma^2/Z^2 times the double integral of |x|^{gamma-2} x . k(x-y)
// |y|^{gamma-2} y against e^{-V(x)-V(y)}. The drift field is the exact
// gradient of -e^{-V}/gamma, so the double integral collapses under
// Plancherel to a single radial frequency integral against the transform
// of |z|^beta, which is c |xi|^{-beta-d} with an explicit constant. This
// sidesteps the |x-y|^beta singularity entirely.
double pair_integral(int d, double gamma, double beta, double z_total) {
  const double alpha = -beta;  // in (0, d)
  const double cut = std::pow(45.0, 1.0 / gamma);
  const auto rho_hat = [&](double xi) {
    if (d == 1)
      return 2.0 * integrate(
                       [&](double s) {
                         return std::cos(2.0 * M_PI * xi * s) *
                                std::exp(-std::pow(s, gamma));
                       },
                       0.0, cut, 1e-11);
    return 2.0 * M_PI *
           integrate(
               [&](double s) {
                 return std::cyl_bessel_j(0.0, 2.0 * M_PI * xi * s) *
                        std::exp(-std::pow(s, gamma)) * s;
               },
               0.0, cut, 1e-11);
  };
  const double riesz = std::pow(M_PI, alpha - 0.5 * d) *
                       std::tgamma(0.5 * (d - alpha)) /
                       std::tgamma(0.5 * alpha);
  const double radial = integrate(
      [&](double xi) {
        const double r = rho_hat(xi);
        return std::pow(xi, 1.0 - beta) * r * r;
      },
      0.0, 50.0, 1e-9);
  return 4.0 * M_PI * M_PI * riesz * surface(d) * radial / (z_total * z_total);
}

}  // namespace

F3Report f3_report(int d, double gamma, double beta, double alpha,
                   const std::vector<double>& lambdas) {
  if (d != 1 && d != 2)
    throw std::invalid_argument("f3_report: only d = 1 and d = 2 supported");
  if (!(gamma > 0.0)) throw std::invalid_argument("f3_report: need gamma > 0");
  if (!(beta < 0.0)) throw std::invalid_argument("f3_report: need beta < 0");
  if (!(beta > -d))
    throw std::domain_error(
        "f3_report: kernel singularity |z|^beta is not integrable, the pair "
        "integral diverges");
  if (!(alpha >= 1.0)) throw std::invalid_argument("f3_report: need alpha >= 1");
  if (lambdas.size() < 4)
    throw std::invalid_argument("f3_report: need at least four dilations");
  const double r0 = lambdas[1] / lambdas[0];
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > lambdas[i - 1]) || !(lambdas[i - 1] > 0.0))
      throw std::invalid_argument("f3_report: dilations must be increasing");
    if (std::abs(lambdas[i] / lambdas[i - 1] - r0) > 1e-9 * r0)
      throw std::invalid_argument("f3_report: dilation list must be geometric");
  }

  const double sd = surface(d);
  const double z_radial = integrate_to_inf(
      [d, gamma](double s) {
        return std::pow(s, d - 1) * std::exp(-std::pow(s, gamma));
      },
      0.0, 1e-12);
  const double z_total = sd * z_radial;

  F3Report rep;
  rep.v_mean = sd *
               integrate_to_inf(
                   [d, gamma](double s) {
                     return std::pow(s, gamma + d - 1) *
                            std::exp(-std::pow(s, gamma));
                   },
                   0.0, 1e-12) /
               z_total;
  rep.pair_integral = pair_integral(d, gamma, beta, z_total);
  if (!std::isfinite(rep.pair_integral))
    throw std::domain_error("f3_report: pair integral did not converge");

  for (double lambda : lambdas) {
    F3Entry e;
    e.lambda = lambda;
    const double growth = std::pow(lambda, gamma) - 1.0;
    const double kl = growth * rep.v_mean - d * std::log(lambda);
    e.lhs = std::pow(kl, alpha);
    e.rhs = growth * growth * std::pow(lambda, beta - 2.0) * rep.pair_integral;
    rep.entries.push_back(e);
  }

  // growth exponents from the asymptotic (upper) half of the dilation list
  std::vector<double> lx, ll, lr;
  for (std::size_t i = lambdas.size() / 2; i < lambdas.size(); ++i) {
    lx.push_back(std::log(rep.entries[i].lambda));
    ll.push_back(std::log(rep.entries[i].lhs));
    lr.push_back(std::log(rep.entries[i].rhs));
  }
  rep.slope_lhs = fit_line(lx, ll).slope;
  rep.slope_rhs = fit_line(lx, lr).slope;
  rep.fails = rep.slope_lhs > rep.slope_rhs + 0.05;
  rep.analytic_fails = (alpha - 2.0) * gamma > beta - 2.0;
  return rep;
}

}  // namespace steinlab::failures
