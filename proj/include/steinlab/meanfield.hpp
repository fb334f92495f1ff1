#pragma once

#include <vector>

#include "steinlab/kernels.hpp"
#include "steinlab/target.hpp"

namespace steinlab::meanfield {

// Explicit conservative solver controls. dt = 0 requests the adaptive step
// cfl * dx / max|velocity|; diffusion adds the optional linear Fokker-Planck
// stabilizer eps_d * d/dx (drho/dx + rho V').
struct SolverConfig {
  double dt = 0.0;  // 0 means automatic
  double t_end = 1.0;
  double cfl = 0.5;
  double diffusion = 0.0;
  int record_every = 1;
};

struct DiagnosticsTrace {
  std::vector<double> times;
  std::vector<double> kl;
  std::vector<double> d2;
  std::vector<double> mass;
  std::vector<double> mean;
  std::vector<double> variance;

  std::size_t size() const { return times.size(); }
};

// One explicit upwind update of d_t rho = d_x(rho e^{V - V0/2} (k * F)) with
// zero-flux boundaries. Face fluxes are assembled from h = rho/rho_inf so no
// raw e^V is ever formed. Throws std::runtime_error when the step loses
// positivity (dt too large).
GridDensity step(const GridDensity& rho, const TargetModel& t,
                 const kernels::KernelSpec& spec, const SolverConfig& cfg);

// March to t_end recording diagnostics every record_every steps (plus the
// initial and final states). Requires KL(rho0 || target) finite.
DiagnosticsTrace run(const GridDensity& rho0, const TargetModel& t,
                     const kernels::KernelSpec& spec, const SolverConfig& cfg);

// Centered-difference d(KL)/dt plus the recorded dissipation, one value per
// recorded sample (one-sided at the ends). Zero for an exact solution.
std::vector<double> dissipation_identity_residual(const DiagnosticsTrace& tr);

}  // namespace steinlab::meanfield
