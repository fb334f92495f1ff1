#include "steinlab/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "steinlab/divergence.hpp"
#include "steinlab/fourier.hpp"

namespace steinlab::meanfield {
namespace {

void check_config(const SolverConfig& cfg) {
  if (!(cfg.dt >= 0.0) || !std::isfinite(cfg.dt))
    throw std::invalid_argument("meanfield: dt must be finite and >= 0");
  if (!(cfg.t_end > 0.0))
    throw std::invalid_argument("meanfield: t_end must be positive");
  if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0)
    throw std::invalid_argument("meanfield: cfl must lie in (0, 1]");
  if (!(cfg.diffusion >= 0.0))
    throw std::invalid_argument("meanfield: diffusion must be >= 0");
  if (cfg.record_every < 1)
    throw std::invalid_argument("meanfield: record_every must be >= 1");
}

// Face fluxes of the transport term in the h-stabilized form
//   Phi = -(h_up / Z) e^{V(face) - V(up) - V0(face)/2} (k*F)(face),
// upwinded by the sign of the velocity u = -e^{V - V0/2} (k*F). The exponent
// only carries the face-to-cell increment of V, so nothing blows up even
// where e^V alone would overflow.
struct Fluxes {
  std::vector<double> phi;      // phi[i] lives at face i+1/2, i = 0..n-2
  std::vector<std::size_t> up;  // upwind cell per face
  double max_speed = 0.0;       // over faces whose upwind cell carries mass
};

Fluxes transport_fluxes(const GridDensity& rho, const TargetModel& t,
                        const kernels::KernelSpec& spec, double diffusion) {
  const std::size_t n = rho.size();
  const double dx = rho.dx();
  const auto F = divergence::stein_field(rho, t);
  const auto conv = convolve_kernel(
      F.values, dx, [&](double u) { return kernels::position_kernel(spec, u); });

  // The velocity grows like e^{V - V0/2} into the tails, where it only moves
  // vanishing mass; cells below this share of the peak are excluded from the
  // stability bound and protected by the flux limiter in advance() instead.
  double rho_max = 0.0;
  for (double v : rho.values) rho_max = std::max(rho_max, v);
  const double mass_floor = 1e-6 * rho_max;

  Fluxes out;
  out.phi.assign(n - 1, 0.0);
  out.up.assign(n - 1, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xf = 0.5 * (rho.x(i) + rho.x(i + 1));
    const double conv_f = 0.5 * (conv[i] + conv[i + 1]);
    // u > 0 exactly when the convolution is negative
    const std::size_t up = conv_f < 0.0 ? i : i + 1;
    const double h_up =
        rho.values[up] <= 0.0 ? 0.0 : rho.values[up] * std::exp(t.V(rho.x(up)));
    double phi = -h_up * std::exp(t.V(xf) - t.V(rho.x(up)) - 0.5 * t.V0(xf)) *
                 conv_f;
    if (rho.values[up] >= mass_floor)
      out.max_speed = std::max(out.max_speed, std::abs(phi / rho.values[up]));
    if (diffusion > 0.0) {
      phi -= diffusion * ((rho.values[i + 1] - rho.values[i]) / dx +
                          0.5 * (rho.values[i] + rho.values[i + 1]) * t.dV(xf));
    }
    out.phi[i] = phi;
    out.up[i] = up;
  }
  return out;
}

double pick_dt(const SolverConfig& cfg, const Fluxes& fl, double dx,
               double remaining) {
  if (cfg.dt > 0.0) return std::min(cfg.dt, remaining);
  double dt = remaining;
  if (fl.max_speed > 0.0) dt = std::min(dt, cfg.cfl * dx / fl.max_speed);
  if (cfg.diffusion > 0.0)
    dt = std::min(dt, cfg.cfl * dx * dx / (2.0 * cfg.diffusion));
  // keep a floor on the step count so short traces still resolve the decay
  dt = std::min(dt, cfg.t_end / 32.0);
  return dt;
}

// Euler update rho <- rho - dt (phi_{i+1/2} - phi_{i-1/2}) / dx with zero
// flux through the boundary faces. Returns the dt actually taken.
double advance(GridDensity& rho, const TargetModel& t,
               const kernels::KernelSpec& spec, const SolverConfig& cfg,
               double remaining, double now) {
  const double dx = rho.dx();
  auto fl = transport_fluxes(rho, t, spec, cfg.diffusion);
  const double dt = pick_dt(cfg, fl, dx, remaining);

  // positivity limiter: a face may drain at most half its upwind cell per
  // step, so even tail cells excluded from the stability bound stay >= 0
  for (std::size_t i = 0; i + 1 < rho.size(); ++i) {
    const double cap = 0.5 * rho.values[fl.up[i]] * dx / dt;
    fl.phi[i] = std::clamp(fl.phi[i], -cap, cap);
  }

  const double mass_before = rho.mass();
  const std::size_t n = rho.size();
  double min_v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? 0.0 : fl.phi[i - 1];
    const double right = i + 1 == n ? 0.0 : fl.phi[i];
    rho.values[i] -= dt * (right - left) / dx;
    min_v = std::min(min_v, rho.values[i]);
  }
  if (min_v < -1e-12) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "meanfield: density lost positivity at t = %.6g (min %.3g); "
                  "reduce dt",
                  now + dt, min_v);
    throw std::runtime_error(buf);
  }
  for (auto& v : rho.values) v = std::max(v, 0.0);
  const double mass_after = rho.mass();
  if (mass_after > 0.0 && mass_after != mass_before) {
    const double scale = mass_before / mass_after;
    for (auto& v : rho.values) v *= scale;
  }
  return dt;
}

}  // namespace

GridDensity step(const GridDensity& rho, const TargetModel& t,
                 const kernels::KernelSpec& spec, const SolverConfig& cfg) {
  check_config(cfg);
  validate(rho);
  GridDensity out = rho;
  advance(out, t, spec, cfg, cfg.dt > 0.0 ? cfg.dt : cfg.t_end, 0.0);
  return out;
}

DiagnosticsTrace run(const GridDensity& rho0, const TargetModel& t,
                     const kernels::KernelSpec& spec, const SolverConfig& cfg) {
  check_config(cfg);
  validate(rho0);
  if (!std::isfinite(divergence::kl(rho0, t)))
    throw std::invalid_argument(
        "meanfield: initial divergence from the target must be finite");

  GridDensity rho = rho0;
  DiagnosticsTrace tr;
  auto record = [&](double time) {
    tr.times.push_back(time);
    tr.kl.push_back(divergence::kl(rho, t));
    tr.d2.push_back(
        divergence::dissipation_fourier(divergence::stein_field(rho, t), spec));
    tr.mass.push_back(rho.mass());
    tr.mean.push_back(rho.mean());
    tr.variance.push_back(rho.variance());
  };

  double now = 0.0;
  record(now);
  int since_record = 0;
  while (now < cfg.t_end) {
    const double dt = advance(rho, t, spec, cfg, cfg.t_end - now, now);
    now += dt;
    if (++since_record >= cfg.record_every || now >= cfg.t_end) {
      record(now);
      since_record = 0;
    }
  }
  return tr;
}

std::vector<double> dissipation_identity_residual(const DiagnosticsTrace& tr) {
  const std::size_t n = tr.size();
  if (n < 3)
    throw std::invalid_argument(
        "dissipation identity: need at least three samples");
  std::vector<double> res(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    const double dkl = (tr.kl[hi] - tr.kl[lo]) / (tr.times[hi] - tr.times[lo]);
    res[i] = dkl + tr.d2[i];
  }
  return res;
}

}  // namespace steinlab::meanfield
