#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "steinlab/target.hpp"

namespace steinlab::svgd {

// Weighted interaction kernel K(x,y) = W(x) k(x-y) W(y) with the ansatz
// weight W = e^{V - V0/2}. k is an even profile with k'(0) = 0 by the
// symmetric a.e. selection.
struct AnsatzKernel {
  TargetModel target;
  std::function<double(double)> k;
  std::function<double(double)> dk;
};

// k(s) = e^{-|s|}, derivative -sign(s) e^{-|s|} with dk(0) = 0.
AnsatzKernel make_matern_ansatz(TargetModel target);
// Baseline smooth profile e^{-s^2 / (2 ell^2)}.
AnsatzKernel make_gaussian_ansatz(TargetModel target, double ell);

// e^{V(x) - V0(x)/2}; throws std::overflow_error beyond representable range.
double weight(const AnsatzKernel& k, double x);
double kernel_K(const AnsatzKernel& k, double x, double y);
// Derivative of K in its second argument (the integrated variable).
double kernel_dK_dy(const AnsatzKernel& k, double x, double y);

struct ParticleEnsemble {
  std::vector<double> positions;
  std::function<double(int)> step_schedule;  // n -> eps_n > 0
  std::uint64_t rng_seed = 0;
};

// Gaussian cloud drawn by Box-Muller from the seed; constant step size.
ParticleEnsemble make_gaussian_ensemble(std::size_t n, double mu, double var,
                                        double eps, std::uint64_t seed);

// Steepest KL-descent direction for the empirical measure,
//   phi*(x) = (1/N) sum_j [K(x, X_j) V'(X_j) - dK/dy(x, X_j)],
// so that X <- X - eps phi* is attracted to the target and the particles
// repel each other. Terms are accumulated in position-sorted order, which
// makes the sum independent of particle labelling bit for bit.
double phi_star(double x, const ParticleEnsemble& e, const AnsatzKernel& k);

struct SvgdTrace {
  std::vector<int> step;
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> kl_kde;
};

struct SvgdResult {
  ParticleEnsemble ensemble;
  SvgdTrace trace;
};

// n_steps synchronized updates; diagnostics (mean, variance, grid-KDE
// divergence with bandwidth N^{-1/5} std) every record_every steps. Throws
// std::runtime_error when a particle passes |x| > 1e6.
SvgdResult svgd_run(ParticleEnsemble e, const AnsatzKernel& k, int n_steps,
                    int record_every = 10);

}  // namespace steinlab::svgd
