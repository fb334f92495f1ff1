#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "steinlab/divergence.hpp"
#include "steinlab/kernels.hpp"
#include "steinlab/meanfield.hpp"
#include "steinlab/target.hpp"

namespace mf = steinlab::meanfield;
namespace dv = steinlab::divergence;
namespace kn = steinlab::kernels;
using steinlab::GridDensity;
using steinlab::TargetModel;

namespace {

GridDensity sampled_equilibrium(const TargetModel& t, double half,
                                std::size_t n) {
  GridDensity g;
  g.x_min = t.mu - half;
  g.x_max = t.mu + half;
  g.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.values[i] = t.density(g.x(i));
  steinlab::renormalize(g);
  return g;
}

struct LineFit {
  double slope = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LineFit f;
  f.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double r =
      (m * sxy - sx * sy) / std::sqrt((m * sxx - sx * sx) * (m * syy - sy * sy));
  f.r2 = r * r;
  return f;
}

}  // namespace

TEST_CASE("solver config is validated") {
  const auto t = steinlab::make_gaussian_target(0.0, 1.0);
  const auto rho = steinlab::gaussian_density(-8.0, 8.0, 64, 0.5, 1.0);
  const auto spec = kn::make_matern_kernel();
  mf::SolverConfig cfg;
  cfg.t_end = -1.0;
  CHECK_THROWS(mf::step(rho, t, spec, cfg));
  cfg.t_end = 1.0;
  cfg.cfl = 1.5;
  CHECK_THROWS(mf::step(rho, t, spec, cfg));
  cfg.cfl = 0.5;
  cfg.diffusion = -0.1;
  CHECK_THROWS(mf::step(rho, t, spec, cfg));
  cfg.diffusion = 0.0;
  cfg.record_every = 0;
  CHECK_THROWS(mf::run(rho, t, spec, cfg));
}

TEST_CASE("equilibrium is a fixed point of the step") {
  const auto t = steinlab::make_gaussian_target(0.0, 1.0);
  const auto eq = sampled_equilibrium(t, 8.0, 512);
  mf::SolverConfig cfg;
  cfg.t_end = 1.0;
  const auto next = mf::step(eq, t, kn::make_matern_kernel(), cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < eq.size(); ++i)
    worst = std::max(worst, std::abs(next.values[i] - eq.values[i]));
  CHECK(worst <= 1e-13);
}

TEST_CASE("equilibrium run produces a flat trace with zero residual") {
  const auto t = steinlab::make_gaussian_target(0.0, 1.0);
  const auto eq = sampled_equilibrium(t, 8.0, 512);
  mf::SolverConfig cfg;
  cfg.t_end = 1.0;
  const auto tr = mf::run(eq, t, kn::make_matern_kernel(), cfg);
  REQUIRE(tr.size() >= 3);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(std::abs(tr.kl[i]) <= 1e-10);
    CHECK(std::abs(tr.mass[i] - 1.0) <= 1e-9);
  }
  for (double r : mf::dissipation_identity_residual(tr))
    CHECK(std::abs(r) <= 1e-10);
}

TEST_CASE("a step conserves mass and small steps decrease kl") {
  const auto t = steinlab::make_gaussian_target(0.0, 1.0);
  const auto rho = steinlab::gaussian_density(-8.0, 8.0, 512, 1.5, 0.7);
  const auto spec = kn::make_matern_kernel();
  mf::SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  const auto next = mf::step(rho, t, spec, cfg);
  CHECK(std::abs(next.mass() - rho.mass()) <= 1e-14);
  for (double v : next.values) CHECK(v >= 0.0);
  CHECK(dv::kl(next, t) < dv::kl(rho, t));
}

TEST_CASE("run requires a finite starting divergence") {
  // a wide gaussian has mass outside the quartic target's support
  const auto t = steinlab::make_target([](double x) { return x * x * x * x; },
                                       [](double x) { return 4.0 * x * x * x; },
                                       0.0, 1.0, -0.0625, -8.0, 8.0);
  const auto rho = steinlab::gaussian_density(-8.0, 8.0, 256, 0.0, 4.0);
  mf::SolverConfig cfg;
  cfg.t_end = 0.1;
  CHECK_THROWS_AS(mf::run(rho, t, kn::make_matern_kernel(), cfg),
                  std::invalid_argument);
}

TEST_CASE("gaussian benchmark decays exponentially in divergence") {
  const auto t = steinlab::make_gaussian_target(0.0, 1.0);
  const auto rho0 = steinlab::gaussian_density(-8.0, 8.0, 512, 1.5, 0.7);
  const auto spec = kn::make_matern_kernel();
  mf::SolverConfig cfg;
  cfg.t_end = 26.0;
  cfg.record_every = 2;
  const auto tr = mf::run(rho0, t, spec, cfg);

  // divergence never increases between samples
  for (std::size_t i = 1; i < tr.size(); ++i)
    CHECK(tr.kl[i] <= tr.kl[i - 1] + 1e-6);
  // cumulative mass drift stays tiny
  for (double m : tr.mass) CHECK(std::abs(m - 1.0) <= 1e-6);

  // log-divergence is approximately affine over the decay window
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.kl[i] >= 1e-6 && tr.kl[i] <= 0.5 * tr.kl[0]) {
      xs.push_back(tr.times[i]);
      ys.push_back(std::log(tr.kl[i]));
    }
  }
  REQUIRE(xs.size() >= 20);
  const auto fit = fit_line(xs, ys);
  CHECK(fit.slope < 0.0);
  CHECK(fit.r2 > 0.95);

  // observed rate dominates the guaranteed rate
  const auto consts = kn::lambda0(1, kn::matern_alpha(), kn::p_provider_calibrated());
  const double dk = kn::sandwich_constant(spec).Dk;
  const double dk0 = kn::sandwich_constant(kn::make_matern_kernel()).Dk;
  const double lambda = kn::slsi_lambda(consts, t, dk, dk0);
  CHECK(-fit.slope >= 0.9 * lambda);

  // the decay carries the moments toward the target's
  CHECK(std::abs(tr.mean.back()) < 0.01);
  CHECK(std::abs(tr.variance.back() - 1.0) < 0.01);
}

TEST_CASE("dissipation identity holds mid-trajectory") {
  const auto t = steinlab::make_gaussian_target(0.0, 1.0);
  const auto rho0 = steinlab::gaussian_density(-8.0, 8.0, 512, 1.5, 0.7);
  mf::SolverConfig cfg;
  cfg.t_end = 4.0;
  const auto tr = mf::run(rho0, t, kn::make_matern_kernel(), cfg);
  const auto res = mf::dissipation_identity_residual(tr);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
    if (tr.times[i] < 1.0 || tr.times[i] > 3.0) continue;
    worst = std::max(worst, std::abs(res[i]) / tr.d2[i]);
  }
  CHECK(worst <= 0.05);

  // d(KL)/dt is nonpositive wherever the dissipation is active
  for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
    if (tr.d2[i] > 1e-12) CHECK(tr.kl[i + 1] - tr.kl[i - 1] <= 1e-12);
  }
}

TEST_CASE("identity residual shrinks under grid refinement") {
  const auto t = steinlab::make_gaussian_target(0.0, 1.0);
  auto worst_mid = [&](std::size_t n) {
    const auto rho0 = steinlab::gaussian_density(-8.0, 8.0, n, 1.5, 0.7);
    mf::SolverConfig cfg;
    cfg.t_end = 4.0;
    const auto tr = mf::run(rho0, t, kn::make_matern_kernel(), cfg);
    const auto res = mf::dissipation_identity_residual(tr);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
      if (tr.times[i] < 1.0 || tr.times[i] > 3.0) continue;
      worst = std::max(worst, std::abs(res[i]) / tr.d2[i]);
    }
    return worst;
  };
  const double coarse = worst_mid(256);
  const double fine = worst_mid(512);
  CHECK(fine < coarse);
  // first-order spatial error: halving dx roughly halves the residual
  CHECK(coarse / fine == doctest::Approx(2.0).epsilon(0.45));
}

TEST_CASE("identity residual needs at least three samples") {
  mf::DiagnosticsTrace tr;
  tr.times = {0.0, 1.0};
  tr.kl = {1.0, 0.5};
  tr.d2 = {0.5, 0.25};
  CHECK_THROWS(mf::dissipation_identity_residual(tr));
}

TEST_CASE("diffusive stabilizer keeps the solver conservative") {
  const auto t = steinlab::make_gaussian_target(0.0, 1.0);
  const auto rho0 = steinlab::gaussian_density(-8.0, 8.0, 256, 1.0, 0.8);
  mf::SolverConfig cfg;
  cfg.t_end = 0.5;
  cfg.diffusion = 0.05;
  const auto tr = mf::run(rho0, t, kn::make_matern_kernel(), cfg);
  for (double m : tr.mass) CHECK(std::abs(m - 1.0) <= 1e-9);
  CHECK(tr.kl.back() < tr.kl.front());
}
