#include "steinlab/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace steinlab {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft: size must be a power of two");
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

FourierField forward_transform(const std::vector<double>& values, double x0,
                               double dx, int pad_factor) {
  if (values.empty()) throw std::invalid_argument("forward_transform: empty input");
  if (pad_factor < 1) throw std::invalid_argument("forward_transform: pad_factor >= 1");
  const std::size_t n = next_pow2(values.size() * pad_factor);
  std::vector<std::complex<double>> a(n, 0.0);
  for (std::size_t j = 0; j < values.size(); ++j) a[j] = values[j];
  fft(a, -1);

  FourierField out;
  out.dfreq = 1.0 / (static_cast<double>(n) * dx);
  out.freq.resize(n);
  out.coef.resize(n);
  // reorder so frequencies run from -1/(2 dx) upward
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = (k + half) % n;  // src=half -> most negative
    const double fk =
        (static_cast<double>(src) - (src >= half ? static_cast<double>(n) : 0.0)) *
        out.dfreq;
    out.freq[k] = fk;
    // restore the absolute position phase so coef ~ continuous transform
    const double ph = -2.0 * M_PI * fk * x0;
    out.coef[k] = a[src] * dx * std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return out;
}

std::vector<double> convolve_kernel(const std::vector<double>& values,
                                    double dx,
                                    const std::function<double(double)>& kernel,
                                    int pad_factor) {
  if (pad_factor < 2)
    throw std::invalid_argument("convolve_kernel: pad_factor >= 2 required");
  const std::size_t n = values.size();
  const std::size_t m = next_pow2(n * pad_factor);
  std::vector<std::complex<double>> fa(m, 0.0), fk(m, 0.0);
  for (std::size_t j = 0; j < n; ++j) fa[j] = values[j];
  // kernel samples wrapped onto the circular grid
  const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
  for (std::ptrdiff_t j = -mm / 2; j < mm / 2; ++j) {
    const std::size_t idx = static_cast<std::size_t>((j + mm) % mm);
    fk[idx] = kernel(static_cast<double>(j) * dx);
  }
  fft(fa, -1);
  fft(fk, -1);
  for (std::size_t k = 0; k < m; ++k) fa[k] *= fk[k];
  fft(fa, +1);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = fa[j].real() * dx / static_cast<double>(m);
  return out;
}

}  // namespace steinlab
