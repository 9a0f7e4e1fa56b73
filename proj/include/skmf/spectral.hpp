#pragma once

// Fourier helpers on the uniform periodic grid theta_j = -pi + 2 pi j / m.
// Convention throughout the project: f(theta) = sum_n fhat_n e^{i n theta},
// fhat_n = (1/2pi) int f e^{-i n theta}. Real signals store n >= 0 only.

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <complex>
#include <stdexcept>
#include <vector>

namespace skmf {

template <typename Scalar>
using ComplexVectorX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// fhat_0 .. fhat_{n_max} of real samples on the grid; n_max < m / 2.
template <typename Scalar>
ComplexVectorX<Scalar> fourier_coefficients(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& samples, int n_max) {
  const int m = static_cast<int>(samples.size());
  if (n_max >= m / 2 + 1) throw std::invalid_argument("fourier_coefficients: n_max must be <= m/2");
  std::vector<Scalar> in(samples.data(), samples.data() + m);
  std::vector<std::complex<Scalar>> out;
  Eigen::FFT<Scalar> fft;
  fft.fwd(out, in);
  ComplexVectorX<Scalar> coeffs(n_max + 1);
  // the grid starts at -pi, so each mode picks up e^{i n pi} = (-1)^n
  for (int n = 0; n <= n_max; ++n) coeffs[n] = out[n] * Scalar(n % 2 == 0 ? 1 : -1) / Scalar(m);
  return coeffs;
}

/// Real samples of sum_{|n|<=N} fhat_n e^{i n theta} on an m-point grid, m > 2N.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> synthesize(const ComplexVectorX<Scalar>& coeffs, int m) {
  const int n_max = static_cast<int>(coeffs.size()) - 1;
  if (m <= 2 * n_max) throw std::invalid_argument("synthesize: grid too coarse for the coefficient count");
  std::vector<std::complex<Scalar>> spectrum(m, std::complex<Scalar>(0));
  for (int n = 0; n <= n_max; ++n) {
    const std::complex<Scalar> c = coeffs[n] * Scalar(n % 2 == 0 ? 1 : -1) * Scalar(m);
    spectrum[n] += c;
    if (n > 0) spectrum[m - n] += std::conj(c);
  }
  std::vector<std::complex<Scalar>> out;
  Eigen::FFT<Scalar> fft;
  fft.inv(out, spectrum);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> samples(m);
  for (int j = 0; j < m; ++j) samples[j] = out[j].real();
  return samples;
}

/// d/dtheta of periodic samples by spectral differentiation (Nyquist mode dropped).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> spectral_derivative(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& samples) {
  const int m = static_cast<int>(samples.size());
  std::vector<Scalar> in(samples.data(), samples.data() + m);
  std::vector<std::complex<Scalar>> spectrum;
  Eigen::FFT<Scalar> fft;
  fft.fwd(spectrum, in);
  for (int j = 0; j < m; ++j) {
    int n = j <= m / 2 ? j : j - m;
    if (2 * j == m) n = 0;
    spectrum[j] *= std::complex<Scalar>(0, Scalar(n));
  }
  std::vector<std::complex<Scalar>> out;
  fft.inv(out, spectrum);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> derivative(m);
  for (int j = 0; j < m; ++j) derivative[j] = out[j].real();
  return derivative;
}

}  // namespace skmf
