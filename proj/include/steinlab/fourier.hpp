#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace steinlab {

// Continuous-transform samples of a gridded function, convention
// F(xi) = int f(x) e^{-2 pi i x xi} dx, stored in increasing frequency order.
struct FourierField {
  std::vector<double> freq;
  std::vector<std::complex<double>> coef;
  double dfreq = 0.0;
};

// In-place radix-2 complex FFT, sign -1 for the forward transform. n must be
// a power of two.
void fft(std::vector<std::complex<double>>& a, int sign);

std::size_t next_pow2(std::size_t n);

// Transform of samples f_j at x_j = x0 + j dx, zero padded by pad_factor.
// Includes the dx weight and the x0 phase, so coef approximates the
// continuous transform at the returned frequencies.
FourierField forward_transform(const std::vector<double>& values, double x0,
                               double dx, int pad_factor = 4);

// Discrete convolution (k * f)(x_j) = dx * sum_m k(x_j - x_m) f_m computed by
// padded FFTs; kernel sampled analytically on the padded grid.
std::vector<double> convolve_kernel(const std::vector<double>& values,
                                    double dx,
                                    const std::function<double(double)>& kernel,
                                    int pad_factor = 4);

}  // namespace steinlab
