#pragma once

#include <functional>
#include <vector>

namespace steinlab {

// Equilibrium description: density proportional to e^{-V} with a quadratic
// reference potential V0(x) = (x - mu)^2 / (2 sigma). V must dominate
// C + V0 pointwise; Z is the normalisation of e^{-V}.
struct TargetModel {
  std::function<double(double)> V;
  std::function<double(double)> dV;  // V'
  double mu = 0.0;
  double sigma = 1.0;  // variance scale of the reference Gaussian
  double C = 0.0;      // lower-bound offset in V >= C + V0
  double Z = 1.0;

  double V0(double x) const { return 0.5 * (x - mu) * (x - mu) / sigma; }
  double dV0(double x) const { return (x - mu) / sigma; }
  double density(double x) const;  // e^{-V(x)} / Z
};

// V = V0 exactly; Z has the closed Gaussian form.
TargetModel make_gaussian_target(double mu, double sigma);

// General potential; Z computed by quadrature over [xlo, xhi] to relative
// accuracy ~1e-8 (the window must capture the mass). Throws if the
// domination bound V >= C + V0 fails on a check grid.
TargetModel make_target(std::function<double(double)> V,
                        std::function<double(double)> dV, double mu,
                        double sigma, double C, double xlo, double xhi);

// Uniformly gridded nonnegative function on [x_min, x_max].
struct GridDensity {
  double x_min = -8.0;
  double x_max = 8.0;
  std::vector<double> values;
  bool probability = true;  // trapezoid mass expected to be 1

  std::size_t size() const { return values.size(); }
  double dx() const {
    return (x_max - x_min) / static_cast<double>(values.size() - 1);
  }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  double mass() const;  // trapezoid rule
  double mean() const;
  double variance() const;
};

// Validates shape (>= 2 points, finite nonnegative values, mass ~ 1 when
// flagged as a probability). Throws std::invalid_argument on violations.
void validate(const GridDensity& g);

GridDensity gaussian_density(double x_min, double x_max, std::size_t n,
                             double mu, double var);
// weights renormalised to sum 1; components sampled and renormalised on grid
GridDensity mixture_density(double x_min, double x_max, std::size_t n,
                            const std::vector<double>& weights,
                            const std::vector<double>& mus,
                            const std::vector<double>& vars);
void renormalize(GridDensity& g);

}  // namespace steinlab
