// Python surface: thin wrappers around the main library operations, values
// returned as plain dicts and lists so the module needs nothing beyond the
// interpreter.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "steinlab/divergence.hpp"
#include "steinlab/failures.hpp"
#include "steinlab/kernels.hpp"
#include "steinlab/meanfield.hpp"
#include "steinlab/specfun.hpp"
#include "steinlab/svgd.hpp"
#include "steinlab/target.hpp"

namespace py = pybind11;
using namespace steinlab;

namespace {

kernels::KernelSpec spec_from(const std::string& kernel, int d, double alpha,
                              double eps) {
  if (kernel == "matern") return kernels::make_matern_kernel();
  if (kernel == "step") return kernels::make_step_kernel(d, alpha, eps);
  throw std::invalid_argument("unknown kernel \"" + kernel +
                              "\" (expected matern or step)");
}

py::dict constants_dict(const kernels::SlsiConstants& c) {
  py::dict out;
  out["d"] = c.d;
  out["alpha"] = c.alpha;
  out["eps"] = c.eps;
  out["theta"] = c.theta;
  out["p"] = c.p;
  out["margin"] = c.margin;
  out["lambda0"] = c.lambda0;
  out["feasible"] = c.feasible;
  out["note"] = c.note;
  return out;
}

}  // namespace

PYBIND11_MODULE(_steinlab, m) {
  m.doc() = "numerical laboratory for kernelized gradient-flow decay";

  // special functions
  m.def("lower_gamma", &specfun::lower_gamma, py::arg("s"), py::arg("r"));
  m.def("upper_gamma", &specfun::upper_gamma, py::arg("s"), py::arg("r"));
  m.def("bessel_j", &specfun::bessel_j, py::arg("nu"), py::arg("x"));
  m.def("bessel_jprime_first_zero", &specfun::bessel_jprime_first_zero,
        py::arg("nu"));

  // kernel spectra
  m.def("matern_khat", &kernels::matern_khat, py::arg("r"));
  m.def(
      "khat",
      [](double r, const std::string& kernel, int d, double alpha, double eps) {
        return kernels::khat_closed(spec_from(kernel, d, alpha, eps), r);
      },
      py::arg("r"), py::arg("kernel") = "step", py::arg("d") = 2,
      py::arg("alpha") = 1.0, py::arg("eps") = 0.1,
      "closed-form kernel spectrum at radius r");
  m.def(
      "spectral_q",
      [](double r, const std::string& kernel, int d, double alpha, double eps) {
        return kernels::spectral_q(spec_from(kernel, d, alpha, eps), r);
      },
      py::arg("r"), py::arg("kernel") = "step", py::arg("d") = 2,
      py::arg("alpha") = 1.0, py::arg("eps") = 0.1);
  m.def(
      "slsi_constants",
      [](int d, double alpha, const std::string& provider) {
        return constants_dict(
            kernels::lambda0(d, alpha, kernels::p_provider(provider)));
      },
      py::arg("d") = 1, py::arg("alpha") = 0.5, py::arg("provider") = "paper",
      "decay constants under the chosen Poincare coefficient convention");
  m.def(
      "fig_series",
      [](int dmax, const std::string& provider) {
        py::list out;
        for (const auto& pt :
             kernels::fig_series(dmax, kernels::p_provider(provider))) {
          py::dict row;
          row["d"] = pt.d;
          row["margin"] = pt.margin;
          row["passes"] = pt.passes;
          out.append(row);
        }
        return out;
      },
      py::arg("dmax") = 50, py::arg("provider") = "paper",
      "condition margin across dimensions");

  // divergences
  m.def("kl_gaussian", &divergence::kl_gaussian, py::arg("mu0"),
        py::arg("var0"), py::arg("mu1"), py::arg("var1"));
  m.def(
      "slsi_check",
      [](std::vector<std::pair<double, double>> family, double target_mu,
         double target_sigma, int grid_n, double xmin, double xmax) {
        const auto t = make_gaussian_target(target_mu, target_sigma);
        std::vector<GridDensity> grids;
        for (const auto& [mu, var] : family) {
          auto g = gaussian_density(xmin, xmax, static_cast<std::size_t>(grid_n),
                                    mu, var);
          renormalize(g);
          grids.push_back(std::move(g));
        }
        const auto rep = divergence::slsi_ratio_report(
            grids, kernels::make_matern_kernel(), t);
        py::list entries;
        for (const auto& e : rep.entries) {
          py::dict row;
          row["kl"] = e.kl;
          row["d2"] = e.d2;
          row["ratio"] = e.ratio;
          entries.append(row);
        }
        py::dict out;
        out["entries"] = entries;
        out["min_ratio"] = rep.min_ratio;
        out["lambda_theoretical"] = rep.lambda_theoretical;
        return out;
      },
      py::arg("family"), py::arg("target_mu") = 0.0,
      py::arg("target_sigma") = 1.0, py::arg("grid_n") = 512,
      py::arg("xmin") = -8.0, py::arg("xmax") = 8.0,
      "divergence/dissipation ratios for a list of (mean, variance) pairs");

  // mean-field solver
  m.def(
      "meanfield_run",
      [](double mu0, double var0, double t_end, double dt, double cfl,
         double diffusion, int record_every, int grid_n, double xmin,
         double xmax, double target_mu, double target_sigma) {
        const auto t = make_gaussian_target(target_mu, target_sigma);
        const auto rho0 = gaussian_density(
            xmin, xmax, static_cast<std::size_t>(grid_n), mu0, var0);
        meanfield::SolverConfig cfg;
        cfg.dt = dt;
        cfg.t_end = t_end;
        cfg.cfl = cfl;
        cfg.diffusion = diffusion;
        cfg.record_every = record_every;
        const auto tr =
            meanfield::run(rho0, t, kernels::make_matern_kernel(), cfg);
        py::dict out;
        out["t"] = tr.times;
        out["kl"] = tr.kl;
        out["d2"] = tr.d2;
        out["mass"] = tr.mass;
        out["mean"] = tr.mean;
        out["variance"] = tr.variance;
        return out;
      },
      py::arg("mu0") = 1.5, py::arg("var0") = 0.7, py::arg("t_end") = 1.0,
      py::arg("dt") = 0.0, py::arg("cfl") = 0.5, py::arg("diffusion") = 0.0,
      py::arg("record_every") = 1, py::arg("grid_n") = 512,
      py::arg("xmin") = -8.0, py::arg("xmax") = 8.0, py::arg("target_mu") = 0.0,
      py::arg("target_sigma") = 1.0,
      "deterministic transport solve toward the Gaussian target");

  // particle descent
  m.def(
      "svgd_run",
      [](int n, double mu0, double var0, double eps, int steps,
         std::uint64_t seed, int record_every, const std::string& kernel,
         double ell, double target_mu, double target_sigma) {
        const auto t = make_gaussian_target(target_mu, target_sigma);
        svgd::AnsatzKernel kern;
        if (kernel == "matern")
          kern = svgd::make_matern_ansatz(t);
        else if (kernel == "gauss")
          kern = svgd::make_gaussian_ansatz(t, ell);
        else
          throw std::invalid_argument("unknown kernel \"" + kernel +
                                      "\" (expected matern or gauss)");
        auto e = svgd::make_gaussian_ensemble(static_cast<std::size_t>(n), mu0,
                                              var0, eps, seed);
        const auto res = svgd::svgd_run(std::move(e), kern, steps, record_every);
        py::dict out;
        out["positions"] = res.ensemble.positions;
        out["step"] = res.trace.step;
        out["mean"] = res.trace.mean;
        out["variance"] = res.trace.variance;
        out["kl_kde"] = res.trace.kl_kde;
        return out;
      },
      py::arg("n") = 200, py::arg("mu0") = 1.5, py::arg("var0") = 0.7,
      py::arg("eps") = 0.05, py::arg("steps") = 2000, py::arg("seed") = 42,
      py::arg("record_every") = 50, py::arg("kernel") = "matern",
      py::arg("ell") = 1.0, py::arg("target_mu") = 0.0,
      py::arg("target_sigma") = 1.0, "interacting particle descent");

  // counterexample mechanisms
  m.def(
      "f1_report",
      [](int d, double r, const std::vector<int>& n_list) {
        py::list out;
        for (const auto& e : failures::f1_report(d, r, n_list)) {
          py::dict row;
          row["n"] = e.n;
          row["kl"] = e.kl;
          row["d2_upper"] = e.d2_upper;
          row["ratio"] = e.ratio;
          out.append(row);
        }
        return out;
      },
      py::arg("d"), py::arg("r"), py::arg("n_list"),
      "mollifier sweep: bounded dissipation bound vs growing divergence");
  m.def(
      "f2_report",
      [](int d, double beta, double p) {
        const auto rep = failures::f2_report(d, beta, p);
        py::dict out;
        out["p"] = rep.p;
        out["exp_grad"] = rep.exp_grad;
        out["exp_drift"] = rep.exp_drift;
        out["grad_integrable"] = rep.grad_integrable;
        out["drift_integrable"] = rep.drift_integrable;
        out["radii"] = rep.radii;
        out["moments"] = rep.moments;
        out["fitted_slope"] = rep.fitted_slope;
        out["analytic_slope"] = rep.analytic_slope;
        out["kl_divergent"] = rep.kl_divergent;
        return out;
      },
      py::arg("d"), py::arg("beta"), py::arg("p"),
      "heavy-tail membership exponents and the divergent moment");
  m.def(
      "f3_report",
      [](int d, double gamma, double beta, double alpha,
         const std::vector<double>& lambdas) {
        const auto rep = failures::f3_report(d, gamma, beta, alpha, lambdas);
        py::list entries;
        for (const auto& e : rep.entries) {
          py::dict row;
          row["lambda"] = e.lambda;
          row["lhs"] = e.lhs;
          row["rhs"] = e.rhs;
          entries.append(row);
        }
        py::dict out;
        out["v_mean"] = rep.v_mean;
        out["pair_integral"] = rep.pair_integral;
        out["entries"] = entries;
        out["slope_lhs"] = rep.slope_lhs;
        out["slope_rhs"] = rep.slope_rhs;
        out["fails"] = rep.fails;
        out["analytic_fails"] = rep.analytic_fails;
        return out;
      },
      py::arg("d"), py::arg("gamma"), py::arg("beta"), py::arg("alpha"),
      py::arg("lambdas"), "dilation family growth-rate comparison");
}
