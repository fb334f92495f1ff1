#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "steinlab/kernels.hpp"
#include "steinlab/quadrature.hpp"
#include "steinlab/specfun.hpp"
#include "steinlab/target.hpp"

namespace kn = steinlab::kernels;
namespace sf = steinlab::specfun;

namespace {

constexpr double kPi = M_PI;

double zof(double r) { return 4.0 * kPi * kPi * r * r; }

// Gaussian-measure mean of the spectral weight, by quadrature split at the
// jump; the construction fixes beta precisely so this vanishes.
double weight_mean(const kn::KernelSpec& k) {
  const int d = k.dim();
  auto f = [&](double r) {
    return kn::spectral_q(k, r) * std::pow(r, d - 1) * std::exp(-zof(r));
  };
  return steinlab::integrate(f, 0.0, k.eps(), 1e-14) +
         steinlab::integrate_to_inf(f, k.eps(), 1e-14);
}

}  // namespace

TEST_CASE("step weight has zero mean in the gaussian measure") {
  for (const auto& [d, alpha, eps] :
       {std::tuple{1, 0.5, 0.1}, std::tuple{2, 1.0, 0.05},
        std::tuple{5, 1.0, 0.05}, std::tuple{8, 2.0, 0.2}}) {
    CAPTURE(d);
    const auto k = kn::make_step_kernel(d, alpha, eps);
    CHECK(k.w.beta > 0.0);
    CHECK(std::abs(weight_mean(k)) < 1e-12);
  }
}

TEST_CASE("exponential-kernel weight has zero mean too") {
  CHECK(std::abs(weight_mean(kn::make_matern_kernel())) < 1e-12);
}

TEST_CASE("step spectrum starts at 2 alpha / d and is continuous at the jump") {
  for (const auto& [d, alpha, eps] :
       {std::tuple{1, 0.5, 0.1}, std::tuple{2, 1.0, 0.05},
        std::tuple{3, 0.7, 0.12}, std::tuple{8, 1.0, 0.05}}) {
    CAPTURE(d);
    const auto k = kn::make_step_kernel(d, alpha, eps);
    CHECK(kn::khat_closed(k, 0.0) ==
          doctest::Approx(2.0 * alpha / d).epsilon(1e-13));
    const double left = kn::khat_closed(k, eps);
    const double right = kn::khat_closed(k, eps * (1.0 + 1e-12));
    CHECK(left == doctest::Approx(right).epsilon(1e-9));
    CHECK(left > 0.0);
  }
}

TEST_CASE("closed spectrum matches published curve samples") {
  // six-digit samples of the alpha = 1, eps = 0.05 family
  struct Sample {
    int d;
    double r, value;
  };
  const Sample samples[] = {
      {2, 0.01, 1.00198},   {2, 0.05, 1.05101},  {2, 0.06, 0.72987},
      {2, 0.2, 0.0656883},  {5, 0.02, 0.401811}, {5, 0.1, 0.0169207},
      {8, 0.01, 0.250196},  {8, 0.06, 0.0619404}, {8, 0.2, 1.58025e-5},
  };
  for (const auto& s : samples) {
    CAPTURE(s.d);
    CAPTURE(s.r);
    const auto k = kn::make_step_kernel(s.d, 1.0, 0.05);
    CHECK(kn::khat_closed(k, s.r) ==
          doctest::Approx(s.value).epsilon(2e-5));
  }
}

TEST_CASE("closed and quadrature spectra agree") {
  std::vector<kn::KernelSpec> kernels = {
      kn::make_step_kernel(1, 0.5, 0.1),  kn::make_step_kernel(2, 1.0, 0.05),
      kn::make_step_kernel(2, 1.0, 0.1),  kn::make_step_kernel(5, 1.0, 0.05),
      kn::make_step_kernel(8, 1.0, 0.05), kn::make_matern_kernel()};
  const double rs[] = {0.0,  0.01, 0.03, 0.05, 0.07, 0.1, 0.15, 0.2,
                       0.35, 0.5,  0.6,  0.65, 0.8,  1.0, 2.0,  3.0};
  for (const auto& k : kernels) {
    for (double r : rs) {
      CAPTURE(r);
      const double c = kn::khat_closed(k, r);
      const double q = kn::khat_quadrature(k, r);
      CHECK(std::abs(c - q) <= 1e-7 * (1.0 + std::abs(c)));
    }
  }
}

TEST_CASE("spectrum derivative matches finite differences") {
  for (const auto& k : {kn::make_step_kernel(2, 1.0, 0.1),
                        kn::make_step_kernel(5, 1.0, 0.05),
                        kn::make_matern_kernel()}) {
    for (double r : {0.03, 0.07, 0.15, 0.3, 0.5, 1.0}) {
      const double h = 1e-5 * std::max(1.0, r);
      if (std::abs(r - k.eps()) < 2.0 * h) continue;  // kink in curvature
      const double fd =
          (kn::khat_closed(k, r + h) - kn::khat_closed(k, r - h)) / (2.0 * h);
      const double an = kn::khat_derivative(k, r);
      CAPTURE(r);
      CHECK(std::abs(an - fd) <= 1e-5 * (1.0 + std::abs(an)));
    }
  }
  CHECK(kn::khat_derivative(kn::make_step_kernel(3, 1.0, 0.1), 0.0) == 0.0);
}

TEST_CASE("spectra solve the defining radial ode") {
  for (const auto& k : {kn::make_step_kernel(1, 0.5, 0.1),
                        kn::make_step_kernel(2, 1.0, 0.05),
                        kn::make_step_kernel(8, 1.0, 0.05)}) {
    for (double r : {0.0, 0.02, 0.04, 0.08, 0.3, 0.7, 1.5}) {
      CAPTURE(r);
      const double q = kn::spectral_q(k, r);
      CHECK(std::abs(kn::ode_residual(k, r)) <= 1e-7 * (1.0 + std::abs(q)));
    }
  }
  // the exponential kernel solves it to roundoff
  const auto m = kn::make_matern_kernel();
  for (double r : {0.0, 0.05, 0.3, 1.0, 5.0}) {
    CHECK(std::abs(kn::ode_residual(m, r)) < 1e-13);
  }
}

TEST_CASE("exponential-kernel weight agrees with its multiplier definition") {
  // q = 4 pi^2 r^2 khat - (khat + r khat')/2 with the derivative taken
  // numerically, so the closed q formula is checked against raw calculus
  for (double r : {0.01, 0.1, 0.3, 1.0, 2.5}) {
    const double h = 1e-6 * std::max(1.0, r);
    const double fd =
        (kn::matern_khat(r + h) - kn::matern_khat(r - h)) / (2.0 * h);
    const double lhs = 4.0 * kPi * kPi * r * r * kn::matern_khat(r) -
                       0.5 * (kn::matern_khat(r) + r * fd);
    CHECK(kn::matern_q(r) == doctest::Approx(lhs).epsilon(1e-8));
  }
}

TEST_CASE("sandwich constant of the exponential kernel is 4 pi^2") {
  const auto res = kn::sandwich_constant(kn::make_matern_kernel());
  CHECK(res.positive);
  CHECK(res.Dk == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-12));
}

TEST_CASE("sandwich constant of step kernels is finite and positive") {
  for (const auto& [d, alpha, eps] :
       {std::tuple{2, 1.0, 0.05}, std::tuple{5, 1.0, 0.1},
        std::tuple{8, 1.0, 0.05}}) {
    CAPTURE(d);
    const auto res = kn::sandwich_constant(kn::make_step_kernel(d, alpha, eps));
    CHECK(res.positive);
    CHECK(std::isfinite(res.Dk));
    CHECK(res.Dk >= 1.0);  // contains both a ratio and its reciprocal
  }
}

TEST_CASE("decay constant in d = 2 hits the analytic crossing") {
  // min(e^z - 1, p^2/(4z) - 1) is maximised where z e^z = p^2 / 4
  const double p = sf::bessel_jprime_first_zero(1.0);
  double lo = 1e-9, hi = 10.0;
  while (hi - lo > 1e-14) {
    const double m = 0.5 * (lo + hi);
    (m * std::exp(m) < 0.25 * p * p ? lo : hi) = m;
  }
  const double zstar = 0.5 * (lo + hi);
  const auto c = kn::lambda0(2, 1.0, kn::p_provider_jprime());
  CHECK(c.feasible);
  CHECK(c.lambda0 == doctest::Approx(std::expm1(zstar)).epsilon(1e-8));
  CHECK(c.eps ==
        doctest::Approx(std::sqrt(zstar) / (2.0 * kPi)).epsilon(1e-6));
  CHECK(c.margin < 1.0);
  CHECK(c.theta == doctest::Approx(1.0).epsilon(1e-14));

  // the decay constant is linear in alpha, the optimum location is not moved
  const auto c2 = kn::lambda0(2, 2.0, kn::p_provider_jprime());
  CHECK(c2.lambda0 == doctest::Approx(2.0 * c.lambda0).epsilon(1e-9));
  CHECK(c2.eps == doctest::Approx(c.eps).epsilon(1e-8));
}

TEST_CASE("decay constant beats a dense brute-force scan") {
  const double p = kn::p_provider_jzero()(1.5);
  const double alpha = 0.7;
  const int d = 3;
  const double s = 0.5 * d;
  const double emax = std::sqrt(2.0 / d) * p / (2.0 * kPi);
  double brute = 0.0;
  for (int i = 1; i <= 200000; ++i) {
    const double e = emax * i / 200001.0;
    const double z = zof(e);
    const double ratio = sf::lower_gamma(s, z) / sf::upper_gamma(s, z);
    const double deficit =
        p * p / (8.0 * kPi * kPi * d * e * e) - 1.0;
    brute = std::max(brute, alpha * std::min(ratio, deficit));
  }
  const auto c = kn::lambda0(d, alpha, kn::p_provider_jzero());
  CHECK(c.lambda0 >= brute - 1e-12);
  // the scan undershoots by at most its cell width times the kink slope
  CHECK(c.lambda0 <= brute + 1e-4 * alpha);
  CHECK(c.feasible);
}

TEST_CASE("one-dimensional decay constant under the calibrated coefficient") {
  const auto c = kn::lambda0(1, 0.5, kn::p_provider_calibrated());
  CHECK(c.feasible);
  CHECK(c.margin ==
        doctest::Approx(kn::margin_reference_series()[0].second)
            .epsilon(1e-12));
  CHECK(c.p == doctest::Approx(3.0013).epsilon(1e-4));
  // the deficit at the switch radius undercuts the weight there, so the
  // supremum is its boundary value alpha (1/margin - 1)
  const double boundary = 0.5 * (1.0 / c.margin - 1.0);
  REQUIRE(boundary <= kn::matern_q(kn::matern_eps()));
  CHECK(c.lambda0 == doctest::Approx(boundary).epsilon(1e-9));
  CHECK(c.eps == doctest::Approx(kn::matern_eps()).epsilon(1e-13));
  CHECK(c.theta == doctest::Approx(kn::matern_theta()).epsilon(1e-13));
}

TEST_CASE("one-dimensional decay constant with other coefficients") {
  // p = pi keeps the margin under one and the boundary value still binds
  const auto c = kn::lambda0(1, 0.5, [](double) { return kPi; });
  CHECK(c.feasible);
  CHECK(c.lambda0 ==
        doctest::Approx(0.5 * (1.0 / c.margin - 1.0)).epsilon(1e-9));

  // the literature value of the J_{1/2}' zero is too small: infeasible
  const auto bad = kn::lambda0(1, 0.5, kn::p_provider_jprime());
  CHECK_FALSE(bad.feasible);
  CHECK(bad.lambda0 == 0.0);
  CHECK(bad.margin == doctest::Approx(3.5103).epsilon(1e-3));
  CHECK_FALSE(bad.note.empty());
}

TEST_CASE("feasibility tracks the margin across dimensions") {
  for (int d : {1, 2, 3, 5, 8}) {
    for (const char* name : {"jprime", "jzero", "calibrated"}) {
      CAPTURE(d);
      CAPTURE(name);
      const auto c = kn::lambda0(d, 1.0, kn::p_provider(name));
      CHECK(c.feasible == (c.margin < 1.0));
      CHECK((c.lambda0 > 0.0) == c.feasible);
    }
  }
}

TEST_CASE("margin series reproduces the stored reference exactly") {
  const auto series = kn::fig_series(50, kn::p_provider_calibrated());
  const auto& ref = kn::margin_reference_series();
  REQUIRE(series.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CAPTURE(i);
    CHECK(series[i].d == ref[i].first);
    CHECK(series[i].margin ==
          doctest::Approx(ref[i].second).epsilon(1e-12));
    CHECK(series[i].passes == (ref[i].first == 1));
  }
}

TEST_CASE("full decay rate assembles the prefactors") {
  const auto c = kn::lambda0(1, 0.5, kn::p_provider_calibrated());
  const auto t = steinlab::make_gaussian_target(0.0, 1.0);
  const double Dk = 4.0 * kPi * kPi;
  const double Dk0 = 2.0;
  const double lam = kn::slsi_lambda(c, t, Dk, Dk0);
  CHECK(lam == doctest::Approx(c.lambda0 / (Dk * Dk * Dk * Dk0 * t.Z))
                   .epsilon(1e-13));

  // wider targets only shrink the rate through min(sigma,1)/sigma
  const auto wide = steinlab::make_gaussian_target(0.0, 4.0);
  const double lam_wide = kn::slsi_lambda(c, wide, Dk, Dk0);
  CHECK(lam_wide ==
        doctest::Approx(lam * (0.25) * t.Z / wide.Z).epsilon(1e-12));
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS(kn::make_step_weight(0, 1.0, 0.1));
  CHECK_THROWS(kn::make_step_weight(2, -1.0, 0.1));
  CHECK_THROWS(kn::make_step_weight(2, 1.0, 0.0));
  CHECK_THROWS(kn::make_step_weight(2, 1.0, 2.5));
  CHECK_THROWS(kn::p_provider("bogus"));
  CHECK_THROWS(kn::lambda0(0, 1.0, kn::p_provider_calibrated()));
  CHECK_THROWS(kn::p_provider_calibrated()(25.5));  // d = 51 is off the table
  CHECK_THROWS(kn::position_kernel(kn::make_step_kernel(2, 1.0, 0.1), 0.3));
  CHECK(kn::position_kernel(kn::make_matern_kernel(), -0.25) ==
        doctest::Approx(0.5 * std::exp(-0.25)).epsilon(1e-15));
}

namespace {

struct FixtureRow {
  std::vector<double> cols;
};

// Tiny CSV reader for the golden fixtures: header line, then comma-separated
// decimal columns. Tests run from the repository root.
std::vector<FixtureRow> read_fixture(const std::string& path,
                                     std::size_t n_cols) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing fixture ", path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<FixtureRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    FixtureRow row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.cols.push_back(std::stod(cell));
    REQUIRE(row.cols.size() == n_cols);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_CASE("margin fixture file agrees with the embedded series") {
  const auto rows = read_fixture("data/fig1_reference.csv", 2);
  const auto& ref = kn::margin_reference_series();
  REQUIRE(rows.size() == ref.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(static_cast<int>(rows[i].cols[0]) == ref[i].first);
    // the file and the table come from the same decimal literals
    CHECK(rows[i].cols[1] == ref[i].second);
  }
}

TEST_CASE("spectrum shape fixture: knick placement and the quantitative panel") {
  const auto rows = read_fixture("data/fig2_reference.csv", 4);
  REQUIRE(rows.size() == 125);

  // group rows by (eps, d) preserving file order
  std::map<std::pair<double, int>, std::vector<std::pair<double, double>>> series;
  for (const auto& row : rows)
    series[{row.cols[0], static_cast<int>(row.cols[1])}].emplace_back(
        row.cols[2], row.cols[3]);
  REQUIRE(series.size() == 6);

  for (const auto& [key, pts] : series) {
    const auto [eps, d] = key;
    // rises to the switch radius, falls beyond it, stays positive
    for (std::size_t i = 1; i < pts.size(); ++i) {
      CHECK(pts[i].second > 0.0);
      if (pts[i - 1].first < 0.005) continue;  // r = 0 rows copy r = 0.01
      if (pts[i].first <= eps + 1e-12)
        CHECK(pts[i].second > pts[i - 1].second);
      else
        CHECK(pts[i].second < pts[i - 1].second);
    }
    // the fine-switch panel reproduces the closed spectrum to coordinate
    // precision; the coarse-switch panel is shape data only
    if (eps == 0.05) {
      const auto spec = kn::make_step_kernel(d, 1.0, eps);
      for (const auto& [r, v] : pts) {
        if (r < 0.005) continue;
        CHECK(v == doctest::Approx(kn::khat_closed(spec, r)).epsilon(2e-5));
      }
    }
  }
}
