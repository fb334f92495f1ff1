#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "steinlab/kernels.hpp"
#include "steinlab/target.hpp"

namespace steinlab::divergence {

// Trapezoidal KL(rho || target) with 0 ln 0 = 0. Returns +inf when rho has
// mass where the target density underflows.
double kl(const GridDensity& rho, const TargetModel& t);

// Closed form between two Gaussians.
double kl_gaussian(double mu0, double var0, double mu1, double var1);

// Quotient of the low-frequency integrals of rho e^{V - V0/2} and e^{-V0/2}:
// integrating the transform over |xi| < eps collapses to a sinc weight in x,
// so no transform grid enters. Throws when the denominator degenerates.
double tau(const GridDensity& rho, const TargetModel& t, double eps);

// F = grad(rho e^V) e^{-V0/2}, computed from h = rho/rho_inf as
// (grad h) e^{-V0/2} / Z with central differences. Throws std::overflow_error
// where the target support ends but rho does not.
GridDensity stein_field(const GridDensity& rho, const TargetModel& t);

// Spectral route: sum of khat(|xi|) |F_hat(xi)|^2 over the padded transform.
double dissipation_fourier(const GridDensity& F,
                           const kernels::KernelSpec& spec,
                           int pad_factor = 4);

// Direct double sum dx^2 sum_ij F_i k(x_i - x_j) F_j.
double dissipation_quadrature(const GridDensity& F,
                              const std::function<double(double)>& k_phys);

struct Chi2Check {
  double lhs = 0.0;  // integral of |h - t|^2 against the target
  double rhs = 0.0;  // KL(rho || target)
  bool holds = false;
};

// Chi-square domination of KL; t is the centering constant (tau Z is the
// natural choice).
Chi2Check chi2_lower_bound_check(const GridDensity& rho, const TargetModel& t,
                                 double center);

struct RatioEntry {
  double kl = 0.0;
  double d2 = 0.0;
  double ratio = 0.0;  // d2 / kl, NaN at equilibrium
  bool equilibrium = false;
  double b_lhs = 0.0;  // lambda * ||rho e^{V-V0/2} - tau e^{-V0/2}||^2
  bool b_holds = false;
};

struct RatioReport {
  std::vector<RatioEntry> entries;
  std::vector<std::size_t> skipped;  // indices whose field overflowed
  double min_ratio = 0.0;            // over non-equilibrium entries, NaN if none
  double lambda_theoretical = 0.0;
};

// Empirical decay-constant survey over a family of densities, with the
// theoretical rate (calibrated coefficient) attached for comparison.
// One-dimensional kernels only.
RatioReport slsi_ratio_report(const std::vector<GridDensity>& family,
                              const kernels::KernelSpec& spec,
                              const TargetModel& t);

}  // namespace steinlab::divergence
