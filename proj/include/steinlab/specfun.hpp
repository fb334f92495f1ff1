#pragma once

#include <vector>

namespace steinlab::specfun {

// Incomplete gamma pair: lower_gamma(s,r) integrates z^{s-1}e^{-z} over
// [0,r], upper_gamma over [r,inf). s > 0, r >= 0. The small-r branch uses
// the ascending series, the large-r branch the continued fraction; the two
// are tied together through additivity with tgamma(s).
double lower_gamma(double s, double r);
double upper_gamma(double s, double r);

// Scaled variants e^r r^{-s} gamma(s,r) used where the raw pair would
// overflow. They stay O(1) (upper) or grow only like e^r/r^s (lower).
double lower_gamma_scaled(double s, double r);
double upper_gamma_scaled(double s, double r);

struct AsymptoticResult {
  double value;        // n-term truncation of the large-r expansion
  double error_bound;  // rigorous bound on |upper_gamma - value|
  int terms_used;
};

// Large-r expansion Gamma(s,r) = e^{-r} r^{s-1} (1 + (s-1)/r + ...) with a
// certified remainder. Requires r >= 1 and n >= s-2.
AsymptoticResult upper_gamma_asymptotic(double s, double r, int n);

struct ExpansionResult {
  std::vector<double> coefficients;  // C_1..C_k for powers (1+r)^{-i}
  double tail_bound;                 // |residual| <= tail_bound * r^{-(k+1)}
};

// Rewrites e^r r^{-s} Gamma(s,r) as sum_i C_i (1+r)^{-i} + tail, valid on
// r >= 1. Requires k >= s-1 so the underlying expansion step is admissible.
ExpansionResult matern_expansion(double s, int k);

// Bessel function of the first kind, ascending series, intended for
// 0 < x <= 20 and nu >= -1/2 (plus nu = -1 via reflection).
double bessel_j(double nu, double x);
double bessel_j_derivative(double nu, double x);

// First positive zero of J_nu', found by bracketed bisection on
// [1e-6, 20] to absolute tolerance 1e-10.
double bessel_jprime_first_zero(double nu);

}  // namespace steinlab::specfun
