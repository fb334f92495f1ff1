// Batch front end: every subcommand runs one library routine and writes the
// plot-ready CSV/JSON artifacts. No interactivity, no plotting.

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steinlab/divergence.hpp"
#include "steinlab/failures.hpp"
#include "steinlab/kernels.hpp"
#include "steinlab/meanfield.hpp"
#include "steinlab/svgd.hpp"
#include "steinlab/target.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace steinlab;

namespace {

// 17 significant digits: doubles round-trip losslessly and reruns diff clean.
std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";  // strip the meaningless sign bit
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + path.string());
  out << body;
  if (!out) throw std::invalid_argument("failed writing " + path.string());
  std::cout << "wrote " << path.string() << "\n";
}

void write_json(const fs::path& path, const ordered_json& j) {
  write_file(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Config file support. Keys mirror the long flags; `t_end`, `t-end` and
// `tend` all address --tend. Values given on the command line win.

std::string normalize_key(std::string k) {
  std::string out;
  for (char c : k)
    if (c != '-' && c != '_') out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();

  std::vector<std::pair<std::string, std::string>> kv;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    ordered_json j = ordered_json::parse(text);
    if (!j.is_object())
      throw std::invalid_argument("config: top level must be an object");
    for (const auto& [key, val] : j.items())
      kv.emplace_back(key, val.is_string() ? val.get<std::string>() : val.dump());
    return kv;
  }

  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
  };
  while (std::getline(lines, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not key=value");
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

template <typename T>
T parse_scalar(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  try {
    if constexpr (std::is_same_v<T, std::string>) {
      return s;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (s == "true" || s == "1" || s == "yes") return true;
      if (s == "false" || s == "0" || s == "no") return false;
      throw std::invalid_argument(s);
    } else if constexpr (std::is_floating_point_v<T>) {
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return static_cast<T>(v);
    } else {
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return static_cast<T>(v);
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad value for key \"" + key +
                                "\": " + s);
  }
}

// Registers flags with CLI11 and remembers how to assign the same slot from
// a config entry, so both sources feed one parameter set.
class ParamBinder {
 public:
  explicit ParamBinder(CLI::App* sub) : sub_(sub) {
    // lets app-level options (--out) trail the subcommand's own flags
    sub_->fallthrough();
    sub_->add_option("--config", config_path_,
                     "config file, flat key=value or JSON");
  }

  template <typename T>
  CLI::Option* add(const std::string& flag, T& slot, const std::string& desc) {
    auto* opt = sub_->add_option(flag, slot, desc);
    setters_[normalize_key(flag)] = Entry{
        flag, [&slot, flag](const std::string& s) {
          slot = parse_scalar<T>(flag, s);
        }};
    return opt;
  }

  // Call at the top of the subcommand body, before validation.
  void merge_config() const {
    if (config_path_.empty()) return;
    for (const auto& [key, value] : parse_config_file(config_path_)) {
      const auto it = setters_.find(normalize_key(key));
      if (it == setters_.end())
        throw std::invalid_argument("config: unknown key \"" + key + "\"");
      if (sub_->count(it->second.flag) > 0) continue;  // explicit flag wins
      it->second.assign(value);
    }
  }

 private:
  struct Entry {
    std::string flag;
    std::function<void(const std::string&)> assign;
  };
  CLI::App* sub_;
  std::string config_path_;
  std::map<std::string, Entry> setters_;
};

// ---------------------------------------------------------------------------

kernels::KernelSpec make_spec(const std::string& name, int d, double alpha,
                              double eps) {
  if (name == "matern") return kernels::make_matern_kernel();
  if (name == "step") return kernels::make_step_kernel(d, alpha, eps);
  throw std::invalid_argument("unknown kernel \"" + name +
                              "\" (expected matern or step)");
}

std::string describe_target(double mu, double sigma) {
  return "gaussian(mu=" + fmt_short(mu) + ",sigma=" + fmt_short(sigma) + ")";
}

// ---------------------------------------------------------------------------

struct ConstantsParams {
  int d = 1;
  double alpha = 0.5;
};

void run_constants(const ConstantsParams& p, const fs::path& out) {
  const auto matern = kernels::make_matern_kernel();
  const auto sw = kernels::sandwich_constant(matern);

  ordered_json j;
  j["d"] = p.d;
  j["alpha"] = p.alpha;
  j["matern"] = {{"eps", kernels::matern_eps()},
                 {"theta", kernels::matern_theta()},
                 {"alpha", kernels::matern_alpha()},
                 {"Dk", sw.Dk},
                 {"positive", sw.positive}};

  ordered_json providers = ordered_json::array();
  for (const char* name : {"jprime", "jzero", "paper"}) {
    const auto c = kernels::lambda0(p.d, p.alpha, kernels::p_provider(name));
    providers.push_back({{"name", name},
                         {"p", c.p},
                         {"eps", c.eps},
                         {"theta", c.theta},
                         {"margin", c.margin},
                         {"lambda0", c.lambda0},
                         {"feasible", c.feasible},
                         {"note", c.note}});
  }
  j["providers"] = providers;

  if (p.d == 1) {
    const auto c =
        kernels::lambda0(1, kernels::matern_alpha(), kernels::p_provider("paper"));
    j["lambda_theoretical"] =
        kernels::slsi_lambda(c, make_gaussian_target(0.0, 1.0), sw.Dk, sw.Dk);
  }

  write_json(out / "constants.json", j);
}

struct SpectrumParams {
  std::string kernel = "step";
  int d = 2;
  double alpha = 1.0;
  double eps = 0.1;
  double rmax = 2.0;
  int n = 400;
};

void run_spectrum(const SpectrumParams& p, const fs::path& out) {
  if (p.n < 2) throw std::invalid_argument("spectrum: need at least 2 rows");
  if (p.rmax <= 0.0) throw std::invalid_argument("spectrum: rmax must be positive");
  const auto spec = make_spec(p.kernel, p.d, p.alpha, p.eps);

  std::string csv = "r,khat,khat_prime,q,ode_residual\n";
  for (int i = 0; i < p.n; ++i) {
    const double r = p.rmax * static_cast<double>(i) / (p.n - 1);
    csv += fmt17(r);
    csv += ',';
    csv += fmt17(kernels::khat_closed(spec, r));
    csv += ',';
    csv += fmt17(kernels::khat_derivative(spec, r));
    csv += ',';
    csv += fmt17(kernels::spectral_q(spec, r));
    csv += ',';
    csv += fmt17(kernels::ode_residual(spec, r));
    csv += '\n';
  }
  write_file(out / "spectrum.csv", csv);
}

struct FigParams {
  int dmax = 50;
  std::string p = "paper";
};

void run_fig1(const FigParams& p, const fs::path& out) {
  if (p.dmax < 1) throw std::invalid_argument("fig1: dmax must be at least 1");
  const auto series = kernels::fig_series(p.dmax, kernels::p_provider(p.p));

  std::string csv = "d,margin,passes\n";
  for (const auto& pt : series) {
    csv += std::to_string(pt.d);
    csv += ',';
    csv += fmt17(pt.margin);
    csv += ',';
    csv += pt.passes ? '1' : '0';
    csv += '\n';
  }
  write_file(out / "fig1.csv", csv);
}

struct SlsiParams {
  std::string kernel = "matern";
  double alpha = 0.5;
  double eps = 0.1;
  int grid_n = 512;
  double xmin = -8.0, xmax = 8.0;
  int count = 8;
  double mu = 1.5, var = 0.7;
  double tmu = 0.0, tsigma = 1.0;
};

void run_slsi(const SlsiParams& p, const fs::path& out) {
  if (p.count < 2) throw std::invalid_argument("slsi-check: need count >= 2");
  const auto spec = make_spec(p.kernel, 1, p.alpha, p.eps);
  const auto target = make_gaussian_target(p.tmu, p.tsigma);

  // Gaussian family sliding from the initial pair toward the equilibrium;
  // the last member coincides with the target and reports as such.
  std::vector<GridDensity> family;
  for (int i = 0; i < p.count; ++i) {
    const double s = static_cast<double>(i) / (p.count - 1);
    const double mu_i = p.mu + s * (p.tmu - p.mu);
    const double var_i = p.var + s * (p.tsigma - p.var);
    auto g = gaussian_density(p.xmin, p.xmax, static_cast<std::size_t>(p.grid_n),
                              mu_i, var_i);
    renormalize(g);
    family.push_back(std::move(g));
  }

  const auto rep = divergence::slsi_ratio_report(family, spec, target);

  ordered_json j;
  j["kernel"] = p.kernel == "matern" ? "matern1d" : "step";
  j["target"] = describe_target(p.tmu, p.tsigma);
  ordered_json entries = ordered_json::array();
  for (const auto& e : rep.entries)
    entries.push_back({{"kl", e.kl}, {"d2", e.d2}, {"ratio", e.ratio}});
  j["entries"] = entries;
  j["min_ratio"] = rep.min_ratio;
  j["lambda_theoretical"] = rep.lambda_theoretical;
  j["skipped"] = rep.skipped;
  write_json(out / "slsi_check.json", j);
}

struct MeanfieldParams {
  std::string target = "gauss";
  std::string kernel = "matern";
  double tmu = 0.0, tsigma = 1.0;
  double mu0 = 1.5, var0 = 0.7;
  int grid_n = 512;
  double xmin = -8.0, xmax = 8.0;
  double dt = 0.0, tend = 1.0, cfl = 0.5, diffusion = 0.0;
  int record_every = 1;
};

void run_meanfield(const MeanfieldParams& p, const fs::path& out) {
  if (p.kernel != "matern")
    throw std::invalid_argument(
        "meanfield: only the matern kernel has the position-space form the "
        "solver convolves with");
  TargetModel target;
  if (p.target == "gauss") {
    target = make_gaussian_target(p.tmu, p.tsigma);
  } else if (p.target == "quartic") {
    target = make_target([](double x) { return 0.25 * x * x * x * x + 0.5 * x * x; },
                         [](double x) { return x * x * x + x; }, 0.0, 1.0, 0.0,
                         -10.0, 10.0);
  } else {
    throw std::invalid_argument("meanfield: unknown target \"" + p.target +
                                "\" (expected gauss or quartic)");
  }

  const auto rho0 = gaussian_density(
      p.xmin, p.xmax, static_cast<std::size_t>(p.grid_n), p.mu0, p.var0);
  meanfield::SolverConfig cfg;
  cfg.dt = p.dt;
  cfg.t_end = p.tend;
  cfg.cfl = p.cfl;
  cfg.diffusion = p.diffusion;
  cfg.record_every = p.record_every;

  const auto tr = meanfield::run(rho0, target, kernels::make_matern_kernel(), cfg);

  std::string csv = "t,kl,d2,mass,mean,variance\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    csv += fmt17(tr.times[i]);
    csv += ',';
    csv += fmt17(tr.kl[i]);
    csv += ',';
    csv += fmt17(tr.d2[i]);
    csv += ',';
    csv += fmt17(tr.mass[i]);
    csv += ',';
    csv += fmt17(tr.mean[i]);
    csv += ',';
    csv += fmt17(tr.variance[i]);
    csv += '\n';
  }
  write_file(out / "meanfield.csv", csv);
  std::cout << "final kl " << fmt_short(tr.kl.back()) << " after "
            << fmt_short(tr.times.back()) << " time units\n";
}

struct SvgdParams {
  int n = 200;
  double mu0 = 1.5, var0 = 0.7;
  double eps = 0.05;
  int steps = 2000;
  std::uint64_t seed = 42;
  int record_every = 50;
  std::string kernel = "matern";
  double ell = 1.0;
  double tmu = 0.0, tsigma = 1.0;
};

void run_svgd(const SvgdParams& p, const fs::path& out) {
  if (p.n < 1) throw std::invalid_argument("svgd: need at least one particle");
  if (p.steps < 0) throw std::invalid_argument("svgd: steps must be nonnegative");
  const auto target = make_gaussian_target(p.tmu, p.tsigma);
  svgd::AnsatzKernel kern;
  if (p.kernel == "matern") {
    kern = svgd::make_matern_ansatz(target);
  } else if (p.kernel == "gauss") {
    kern = svgd::make_gaussian_ansatz(target, p.ell);
  } else {
    throw std::invalid_argument("svgd: unknown kernel \"" + p.kernel +
                                "\" (expected matern or gauss)");
  }

  auto ensemble = svgd::make_gaussian_ensemble(
      static_cast<std::size_t>(p.n), p.mu0, p.var0, p.eps, p.seed);
  const auto res = svgd::svgd_run(std::move(ensemble), kern, p.steps,
                                  p.record_every);

  std::string csv = "step,mean,variance,kl_kde\n";
  for (std::size_t i = 0; i < res.trace.step.size(); ++i) {
    csv += std::to_string(res.trace.step[i]);
    csv += ',';
    csv += fmt17(res.trace.mean[i]);
    csv += ',';
    csv += fmt17(res.trace.variance[i]);
    csv += ',';
    csv += fmt17(res.trace.kl_kde[i]);
    csv += '\n';
  }
  write_file(out / "svgd.csv", csv);

  ordered_json j;
  j["n"] = p.n;
  j["steps"] = p.steps;
  j["eps"] = p.eps;
  j["seed"] = p.seed;
  j["kernel"] = p.kernel;
  j["target"] = describe_target(p.tmu, p.tsigma);
  j["positions"] = res.ensemble.positions;
  write_json(out / "svgd_positions.json", j);
}

struct FailureParams {
  std::string which = "all";
  int f1_d = 2;
  double f1_r = 3.0;
  int f1_nmax = 256;
  int f2_d = 1;
  double f2_beta = 0.0;
  double f2_p = 2.0;
  int f3_d = 2;
  double f3_gamma = 2.0, f3_beta = -1.0, f3_alpha = 1.0;
  double f3_lmax = 64.0;
};

void run_failure(const FailureParams& p, const fs::path& out) {
  const bool all = p.which == "all";
  if (!all && p.which != "f1" && p.which != "f2" && p.which != "f3")
    throw std::invalid_argument("failure: unknown case \"" + p.which +
                                "\" (expected f1, f2, f3 or all)");

  if (all || p.which == "f1") {
    if (p.f1_nmax < 1) throw std::invalid_argument("failure: f1-nmax must be >= 1");
    std::vector<int> ns;
    for (int n = 1; n <= p.f1_nmax; n *= 2) ns.push_back(n);
    const auto rep = failures::f1_report(p.f1_d, p.f1_r, ns);

    ordered_json j;
    j["case"] = "f1";
    j["d"] = p.f1_d;
    j["r"] = p.f1_r;
    j["n_list"] = ns;
    ordered_json entries = ordered_json::array();
    std::string csv = "n,lhs,rhs,ratio\n";
    for (const auto& e : rep) {
      entries.push_back({{"n", e.n},
                         {"kl", e.kl},
                         {"d2_upper", e.d2_upper},
                         {"ratio", e.ratio}});
      csv += std::to_string(e.n);
      csv += ',';
      csv += fmt17(e.kl);
      csv += ',';
      csv += fmt17(e.d2_upper);
      csv += ',';
      csv += fmt17(e.ratio);
      csv += '\n';
    }
    j["entries"] = entries;
    write_json(out / "failure_f1.json", j);
    write_file(out / "failure_f1.csv", csv);
  }

  if (all || p.which == "f2") {
    const auto rep = failures::f2_report(p.f2_d, p.f2_beta, p.f2_p);

    ordered_json j;
    j["case"] = "f2";
    j["d"] = p.f2_d;
    j["beta"] = p.f2_beta;
    j["p"] = rep.p;
    j["exp_grad"] = rep.exp_grad;
    j["exp_drift"] = rep.exp_drift;
    j["grad_integrable"] = rep.grad_integrable;
    j["drift_integrable"] = rep.drift_integrable;
    j["radii"] = rep.radii;
    j["moments"] = rep.moments;
    j["fitted_slope"] = rep.fitted_slope;
    j["analytic_slope"] = rep.analytic_slope;
    j["kl_divergent"] = rep.kl_divergent;
    write_json(out / "failure_f2.json", j);

    // rhs is the asymptote of the truncated moment; the ratio drifting to
    // one is the logarithmic divergence showing itself
    std::string csv = "radius,lhs,rhs,ratio\n";
    for (std::size_t i = 0; i < rep.radii.size(); ++i) {
      const double rhs = rep.analytic_slope * std::log(rep.radii[i]);
      csv += fmt17(rep.radii[i]);
      csv += ',';
      csv += fmt17(rep.moments[i]);
      csv += ',';
      csv += fmt17(rhs);
      csv += ',';
      csv += fmt17(rep.moments[i] / rhs);
      csv += '\n';
    }
    write_file(out / "failure_f2.csv", csv);
  }

  if (all || p.which == "f3") {
    if (p.f3_lmax < 16.0)
      throw std::invalid_argument("failure: f3-lmax must be >= 16 for a fit");
    std::vector<double> lambdas;
    for (double l = 2.0; l <= p.f3_lmax * (1.0 + 1e-12); l *= 2.0)
      lambdas.push_back(l);
    const auto rep =
        failures::f3_report(p.f3_d, p.f3_gamma, p.f3_beta, p.f3_alpha, lambdas);

    ordered_json j;
    j["case"] = "f3";
    j["d"] = p.f3_d;
    j["gamma"] = p.f3_gamma;
    j["beta"] = p.f3_beta;
    j["alpha"] = p.f3_alpha;
    j["lambdas"] = lambdas;
    j["v_mean"] = rep.v_mean;
    j["pair_integral"] = rep.pair_integral;
    ordered_json entries = ordered_json::array();
    std::string csv = "lambda,lhs,rhs,ratio\n";
    for (const auto& e : rep.entries) {
      entries.push_back({{"lambda", e.lambda}, {"lhs", e.lhs}, {"rhs", e.rhs}});
      csv += fmt17(e.lambda);
      csv += ',';
      csv += fmt17(e.lhs);
      csv += ',';
      csv += fmt17(e.rhs);
      csv += ',';
      csv += fmt17(e.lhs / e.rhs);
      csv += '\n';
    }
    j["entries"] = entries;
    j["slope_lhs"] = rep.slope_lhs;
    j["slope_rhs"] = rep.slope_rhs;
    j["fails"] = rep.fails;
    j["analytic_fails"] = rep.analytic_fails;
    write_json(out / "failure_f3.json", j);
    write_file(out / "failure_f3.csv", csv);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for kernelized gradient-flow decay"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory (default: $STEINLAB_OUT or .)")
      ->envname("STEINLAB_OUT");

  ConstantsParams cp;
  auto* c_sub = app.add_subcommand("constants",
                                   "decay constants and the calibration report");
  ParamBinder cb(c_sub);
  cb.add("--d", cp.d, "dimension");
  cb.add("--alpha", cp.alpha, "spectral weight depth (ignored at d=1)");

  SpectrumParams sp;
  auto* s_sub = app.add_subcommand("spectrum", "kernel spectrum table");
  ParamBinder sb(s_sub);
  sb.add("--kernel", sp.kernel, "matern or step");
  sb.add("--d", sp.d, "dimension (step kernel)");
  sb.add("--alpha", sp.alpha, "weight depth (step kernel)");
  sb.add("--eps", sp.eps, "switch radius (step kernel)");
  sb.add("--rmax", sp.rmax, "largest frequency");
  sb.add("--n", sp.n, "number of rows");

  FigParams fp;
  auto* f_sub = app.add_subcommand("fig1", "condition margin across dimensions");
  ParamBinder fb(f_sub);
  fb.add("--dmax", fp.dmax, "largest dimension");
  fb.add("--p", fp.p, "Poincare coefficient convention: jprime, jzero or paper");

  SlsiParams lp;
  auto* l_sub = app.add_subcommand("slsi-check",
                                   "divergence/dissipation ratio survey");
  ParamBinder lb(l_sub);
  lb.add("--kernel", lp.kernel, "matern or step (d=1)");
  lb.add("--alpha", lp.alpha, "weight depth (step kernel)");
  lb.add("--eps", lp.eps, "switch radius (step kernel)");
  lb.add("--grid-n", lp.grid_n, "grid points");
  lb.add("--xmin", lp.xmin, "left edge");
  lb.add("--xmax", lp.xmax, "right edge");
  lb.add("--count", lp.count, "family size");
  lb.add("--mu", lp.mu, "starting mean");
  lb.add("--var", lp.var, "starting variance");
  lb.add("--target-mu", lp.tmu, "target mean");
  lb.add("--target-sigma", lp.tsigma, "target variance");

  MeanfieldParams mp;
  auto* m_sub = app.add_subcommand("meanfield", "deterministic transport solve");
  ParamBinder mb(m_sub);
  mb.add("--target", mp.target, "gauss or quartic");
  mb.add("--kernel", mp.kernel, "matern");
  mb.add("--target-mu", mp.tmu, "target mean (gauss)");
  mb.add("--target-sigma", mp.tsigma, "target variance (gauss)");
  mb.add("--mu0", mp.mu0, "initial mean");
  mb.add("--var0", mp.var0, "initial variance");
  mb.add("--grid-n", mp.grid_n, "grid points");
  mb.add("--xmin", mp.xmin, "left edge");
  mb.add("--xmax", mp.xmax, "right edge");
  mb.add("--dt", mp.dt, "time step, 0 for automatic");
  mb.add("--tend", mp.tend, "final time");
  mb.add("--cfl", mp.cfl, "CFL number for the automatic step");
  mb.add("--diffusion", mp.diffusion, "optional linear stabilizer");
  mb.add("--record-every", mp.record_every, "steps between samples");

  SvgdParams vp;
  auto* v_sub = app.add_subcommand("svgd", "interacting particle descent");
  ParamBinder vb(v_sub);
  vb.add("--n", vp.n, "particles");
  vb.add("--mu0", vp.mu0, "initial mean");
  vb.add("--var0", vp.var0, "initial variance");
  vb.add("--eps", vp.eps, "step size");
  vb.add("--steps", vp.steps, "updates");
  vb.add("--seed", vp.seed, "RNG seed");
  vb.add("--record-every", vp.record_every, "steps between samples");
  vb.add("--kernel", vp.kernel, "matern or gauss");
  vb.add("--ell", vp.ell, "length scale (gauss kernel)");
  vb.add("--target-mu", vp.tmu, "target mean");
  vb.add("--target-sigma", vp.tsigma, "target variance");

  FailureParams xp;
  auto* x_sub = app.add_subcommand("failure", "counterexample mechanism reports");
  ParamBinder xb(x_sub);
  xb.add("--case", xp.which, "f1, f2, f3 or all");
  xb.add("--f1-d", xp.f1_d, "mollifier sweep dimension");
  xb.add("--f1-r", xp.f1_r, "mollifier sweep decay order");
  xb.add("--f1-nmax", xp.f1_nmax, "largest mollifier index (doubling from 1)");
  xb.add("--f2-d", xp.f2_d, "heavy-tail dimension");
  xb.add("--f2-beta", xp.f2_beta, "heavy-tail weight exponent");
  xb.add("--f2-p", xp.f2_p, "heavy-tail integrability order");
  xb.add("--f3-d", xp.f3_d, "dilation dimension");
  xb.add("--f3-gamma", xp.f3_gamma, "potential growth");
  xb.add("--f3-beta", xp.f3_beta, "kernel singularity exponent");
  xb.add("--f3-alpha", xp.f3_alpha, "divergence power");
  xb.add("--f3-lmax", xp.f3_lmax, "largest dilation (doubling from 2)");

  c_sub->callback([&] { cb.merge_config(); run_constants(cp, out_dir); });
  s_sub->callback([&] { sb.merge_config(); run_spectrum(sp, out_dir); });
  f_sub->callback([&] { fb.merge_config(); run_fig1(fp, out_dir); });
  l_sub->callback([&] { lb.merge_config(); run_slsi(lp, out_dir); });
  m_sub->callback([&] { mb.merge_config(); run_meanfield(mp, out_dir); });
  v_sub->callback([&] { vb.merge_config(); run_svgd(vp, out_dir); });
  x_sub->callback([&] { xb.merge_config(); run_failure(xp, out_dir); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    // instability, overflow sentinels, non-convergent quadrature
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
