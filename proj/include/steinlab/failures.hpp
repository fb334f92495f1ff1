#pragma once

#include <vector>

namespace steinlab::failures {

// Mollifier family rho_n = N(mu, Sigma/n) against a Gaussian equilibrium:
// the divergence grows like ln n while the Fourier-side dissipation bound
// stays bounded, so no linear (or power) comparison can hold.
struct F1Entry {
  int n = 0;
  double kl = 0.0;        // (d/2)(1/n - 1 + ln n), closed form
  double d2_upper = 0.0;  // quadrature of the two spectral integrals
  double ratio = 0.0;     // kl / d2_upper
};

// Requires r > 1 + d/2 (the spectral weight must be integrable) and a
// strictly increasing index list.
std::vector<F1Entry> f1_report(int d, double r, const std::vector<int>& n_list);

// Polynomially weighted kernels against a Gaussian equilibrium, probed with
// the heavy-tailed density rho ~ 1/(1 + |x|^{d+2}). Both L^p memberships that
// bound the dissipation hold, yet the potential moment integral diverges
// logarithmically, carrying the divergence with it.
struct F2Report {
  double p = 0.0;
  double exp_grad = 0.0;   // p (d + 3 - beta)
  double exp_drift = 0.0;  // p (d + 1 - beta)
  bool grad_integrable = false;   // exp_grad > d
  bool drift_integrable = false;  // exp_drift > d
  std::vector<double> radii;      // truncation radii R
  std::vector<double> moments;    // integral of rho V over |x| <= R
  double fitted_slope = 0.0;      // of moments against ln R
  double analytic_slope = 0.0;    // tail rate of rho V, ~ c / |x|^d
  bool kl_divergent = false;      // fitted slope matches the tail rate
};

F2Report f2_report(int d, double beta, double p);

// Dilation family pushed through a gamma-homogeneous potential against a
// beta-homogeneous kernel: both sides of the inequality are exact in lambda
// up to two quadrature constants, and their log-log growth rates differ.
struct F3Entry {
  double lambda = 0.0;
  double lhs = 0.0;  // KL(dilated || equilibrium)^alpha
  double rhs = 0.0;  // (lambda^gamma - 1)^2 lambda^{beta-2} I
};

struct F3Report {
  double v_mean = 0.0;            // integral of V against the equilibrium
  double pair_integral = 0.0;     // I, the kernel-weighted drift correlation
  std::vector<F3Entry> entries;
  double slope_lhs = 0.0;   // fitted over the upper half of the lambda list
  double slope_rhs = 0.0;
  bool fails = false;          // slope_lhs exceeds slope_rhs beyond fit slack
  bool analytic_fails = false; // (alpha - 2) gamma > beta - 2
};

// V(x) = |x|^gamma, k(z) = |z|^beta, d in {1, 2}. Requires gamma > 0,
// -d < beta < 0 (else the pair integral has a non-integrable singularity),
// alpha >= 1 and a geometric lambda list of at least four entries.
F3Report f3_report(int d, double gamma, double beta, double alpha,
                   const std::vector<double>& lambdas);

}  // namespace steinlab::failures
