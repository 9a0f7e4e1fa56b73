#pragma once

// Asymmetrically extended von Mises densities.
//
// chi_{k,r} is the periodic solution of
//     chi' + (r sin phi + k) chi = k,
// extended continuously to chi_{0,r} = I_0(r) e^{r cos phi} and chi_{k,0} = 1.
// Writing chi = psi e^{r cos phi}, the Fourier modes of psi are
//     psihat_m = (-1)^m I_m(r) k / (k + i m),
// which gives both the pointwise series for chi and, by convolution with the
// modes I_n(r) of e^{r cos phi}, every Fourier coefficient
//     C_n - i S_n = (1/2pi) int chi e^{-i n phi} = sum_m psihat_m I_{n-m}(r).
//
// The normalized functionals of n = 1 come from the power series
//     C_0 = 1 + sum_{p>=1} a_{k,p} (r/2)^{2p},
//     a_{k,p} = (2p)! / ((p!)^2 prod_{n=1}^p (n^2 + k^2)),
// whose terms are all positive. With u = r^2/4, P1 = sum a_{k,p} u^{p-1} and
// P2 = sum p a_{k,p} u^{p-1}:
//     C_1 = (r/4) P2,   S_1 = -(k r/4) P1,
//     cal_C1 = P2 / (4 C_0),   cal_S1 = k P1 / (4 C_0),   T_1 = k P1 / P2.
// None of these divide by r, so the r -> 0 limits come out exactly.

#include "skmf/bessel.hpp"
#include "skmf/quadrature.hpp"
#include "skmf/spectral.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace skmf {

/// Wave speed k and rescaled order parameter r. Any finite pair is valid.
template <typename Scalar>
struct AvmPoint {
  Scalar k{0};
  Scalar r{0};
};

/// C_0, C_1, S_1 at one point and the normalized cal_C1, cal_S1, T_1, R_1.
template <typename Scalar>
struct AvmFunctionals {
  Scalar c0{1};
  Scalar c1{0};
  Scalar s1{0};
  Scalar cal_c1{0};
  Scalar cal_s1{0};
  Scalar cal_t1{0};
  Scalar cal_r1{0};
};

/// (C_n, S_n)
template <typename Scalar>
using FourierPair = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
struct C0Series {
  Scalar value{1};
  Scalar last_term{0};
  bool converged{true};
};

template <typename Scalar>
struct EtaSigma {
  Scalar eta{0};
  std::optional<Scalar> sigma;  // defined for p >= 1
  Scalar eta_error{0};
  Scalar sigma_error{0};
};

namespace detail {

template <typename Scalar>
Scalar sign(Scalar x) {
  return Scalar((x > Scalar(0)) - (x < Scalar(0)));
}

// sinh(pi k) / (pi k), equal to 1 at k = 0
template <typename Scalar>
Scalar sinhc_pi(Scalar k) {
  const Scalar x = std::numbers::pi_v<Scalar> * k;
  if (std::abs(x) < Scalar(1e-4)) return Scalar(1) + x * x / Scalar(6);
  return std::sinh(x) / x;
}

template <typename Scalar>
struct PowerSums {
  Scalar c0{1};
  Scalar p1{0};
  Scalar p2{0};
  int terms{0};
};

template <typename Scalar>
PowerSums<Scalar> c0_power_sums(Scalar k, Scalar r) {
  const Scalar u = r * r / Scalar(4);
  const Scalar k2 = k * k;
  const Scalar tol = std::numeric_limits<Scalar>::epsilon() / Scalar(8);

  // s_p = a_{k,p} u^{p-1}, starting from a_{k,1} = 2 / (1 + k^2)
  Scalar s = Scalar(2) / (Scalar(1) + k2);
  PowerSums<Scalar> sums;
  sums.p1 = s;
  sums.p2 = s;
  int p = 1;
  for (; p < 200000; ++p) {
    const Scalar q = Scalar(p + 1);
    const Scalar ratio = Scalar(2) * Scalar(2 * p + 1) * u / (q * (q * q + k2));
    s *= ratio;
    sums.p1 += s;
    sums.p2 += q * s;
    if (ratio < Scalar(0.5) && q * s <= tol * sums.p2) break;
  }
  if (!std::isfinite(sums.p2) || !std::isfinite(u * sums.p1)) {
    std::ostringstream msg;
    msg << "avm power series overflows at r = " << static_cast<double>(r);
    throw std::range_error(msg.str());
  }
  sums.c0 = Scalar(1) + u * sums.p1;
  sums.terms = p + 1;
  return sums;
}

// chi from a precomputed Bessel table
template <typename Scalar>
Scalar chi_from_table(const AvmPoint<Scalar>& point, const BesselTable<Scalar>& table, Scalar phi) {
  const Scalar k = point.k;
  const Scalar k2 = k * k;
  Scalar sum = table(0);
  if (k != Scalar(0)) {
    for (int n = 1; n <= table.n_max; ++n) {
      const Scalar weight = (n % 2 == 0 ? Scalar(2) : Scalar(-2)) * table(n) / (k2 + Scalar(n) * Scalar(n));
      sum += weight * (k2 * std::cos(Scalar(n) * phi) + Scalar(n) * k * std::sin(Scalar(n) * phi));
    }
  }
  return sum * std::exp(point.r * std::cos(phi));
}

}  // namespace detail

/// chi_{k,r}(phi) from the Bessel series, truncated at default_order_cutoff(r).
template <typename Scalar>
Scalar avm_chi(const AvmPoint<Scalar>& point, Scalar phi) {
  if (point.r == Scalar(0)) return Scalar(1);
  return detail::chi_from_table(point, bessel_i_range(point.r), phi);
}

/// chihat_n = C_n - i S_n for n = 0..n_max by Bessel convolution.
/// Accurate while e^{pi |k|} eps I_0(r)^2 stays small; the n <= 1 functionals
/// have a cancellation-free path in avm_functionals.
template <typename Scalar>
ComplexVectorX<Scalar> avm_fourier_coefficients(const AvmPoint<Scalar>& point, int n_max) {
  using Complex = std::complex<Scalar>;
  ComplexVectorX<Scalar> coeffs = ComplexVectorX<Scalar>::Zero(n_max + 1);
  if (point.r == Scalar(0)) {
    coeffs[0] = 1;
    return coeffs;
  }
  const int cutoff = default_order_cutoff(static_cast<double>(point.r));
  const BesselTable<Scalar> table = bessel_i_range(cutoff + n_max, point.r);
  const Scalar k = point.k;

  std::vector<Complex> psi_hat(2 * cutoff + 1);
  for (int m = -cutoff; m <= cutoff; ++m) {
    const Complex weight = m == 0 ? Complex(1) : (k == Scalar(0) ? Complex(0) : k / Complex(k, Scalar(m)));
    psi_hat[m + cutoff] = (m % 2 == 0 ? Scalar(1) : Scalar(-1)) * table(m) * weight;
  }
  for (int n = 0; n <= n_max; ++n) {
    Complex sum(0);
    for (int m = -cutoff; m <= cutoff; ++m) sum += psi_hat[m + cutoff] * table(n - m);
    coeffs[n] = sum;
  }
  return coeffs;
}

/// (C_n, S_n) for any integer n.
template <typename Scalar>
FourierPair<Scalar> avm_cs_n(const AvmPoint<Scalar>& point, int n) {
  const std::complex<Scalar> hat = avm_fourier_coefficients(point, std::abs(n))[std::abs(n)];
  const Scalar s = n < 0 ? hat.imag() : -hat.imag();
  return FourierPair<Scalar>(hat.real(), s);
}

/// C_0, C_1, S_1 and cal_C1, cal_S1, T_1, R_1 from the positive power series.
/// R_1 carries sign(k), so R_1 = 0 at k = 0.
template <typename Scalar>
AvmFunctionals<Scalar> avm_functionals(const AvmPoint<Scalar>& point) {
  const Scalar k = point.k;
  const Scalar r = point.r;
  const auto sums = detail::c0_power_sums(k, r);
  AvmFunctionals<Scalar> f;
  f.c0 = sums.c0;
  f.c1 = r * sums.p2 / Scalar(4);
  f.s1 = -k * r * sums.p1 / Scalar(4);
  f.cal_c1 = sums.p2 / (Scalar(4) * sums.c0);
  f.cal_s1 = k * sums.p1 / (Scalar(4) * sums.c0);
  f.cal_t1 = k * (sums.p1 / sums.p2);
  f.cal_r1 = detail::sign(k) * std::hypot(f.cal_c1, f.cal_s1);
  return f;
}

/// a_{k,p} = (2p)! / ((p!)^2 prod_{n=1}^p (n^2 + k^2)).
template <typename Scalar>
Scalar avm_akp(Scalar k, int p) {
  if (p < 0) throw std::invalid_argument("avm_akp: p must be >= 0");
  Scalar a = 1;
  for (int n = 1; n <= p; ++n) {
    const Scalar nn = Scalar(n);
    a *= Scalar(2 * n) * Scalar(2 * n - 1) / (nn * nn * (nn * nn + k * k));
  }
  return a;
}

/// 1 + sum_{p=1}^{p_max} a_{k,p} (r/2)^{2p}; `converged` is false when the
/// last retained term exceeds 1e-14 of the sum.
template <typename Scalar>
C0Series<Scalar> avm_c0_series(const AvmPoint<Scalar>& point, int p_max) {
  if (p_max < 1) throw std::invalid_argument("avm_c0_series: p_max must be >= 1");
  const Scalar u = point.r * point.r / Scalar(4);
  C0Series<Scalar> out;
  Scalar power = 1;
  for (int p = 1; p <= p_max; ++p) {
    power *= u;
    out.last_term = avm_akp(point.k, p) * power;
    out.value += out.last_term;
  }
  out.converged = out.last_term <= Scalar(1e-14) * out.value;
  return out;
}

/// eta_{p,0}(k) = int cos^{2p}(t/2) cosh(k t) and, for p >= 1,
/// sigma_{p,0}(k) = int cos^{2p-1}(t/2) sin(t/2) sinh(k t), both over [-pi, pi].
/// Throws QuadratureError when Romberg stalls.
template <typename Scalar>
EtaSigma<Scalar> avm_eta_sigma(Scalar k, int p, Scalar rel_tol = Scalar(1e-13)) {
  if (p < 0) throw std::invalid_argument("avm_eta_sigma: p must be >= 0");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  EtaSigma<Scalar> out;
  const auto eta = romberg<Scalar>(
      [&](Scalar t) { return std::pow(std::cos(t / Scalar(2)), Scalar(2 * p)) * std::cosh(k * t); }, -pi, pi, rel_tol);
  out.eta = eta.value;
  out.eta_error = eta.error_estimate;
  if (p >= 1) {
    const auto sigma = romberg<Scalar>(
        [&](Scalar t) {
          return std::pow(std::cos(t / Scalar(2)), Scalar(2 * p - 1)) * std::sin(t / Scalar(2)) * std::sinh(k * t);
        },
        -pi, pi, rel_tol);
    out.sigma = sigma.value;
    out.sigma_error = sigma.error_estimate;
  }
  return out;
}

/// eta_{p,0}(k) = (2p)! / (4^p prod_{n=1}^p (n^2 + k^2)) * 2 sinh(k pi) / k.
template <typename Scalar>
Scalar avm_eta_closed_form(Scalar k, int p) {
  Scalar value = Scalar(2) * std::numbers::pi_v<Scalar> * detail::sinhc_pi(k);
  for (int n = 1; n <= p; ++n) {
    const Scalar nn = Scalar(n);
    value *= Scalar(2 * n) * Scalar(2 * n - 1) / (Scalar(4) * (nn * nn + k * k));
  }
  return value;
}

/// a_{k,p} through the integral form 2^{2p-1} k eta_{p,0}(k) / ((p!)^2 sinh(k pi)).
template <typename Scalar>
Scalar avm_akp_from_eta(Scalar k, int p) {
  const Scalar eta = avm_eta_sigma(k, p).eta;
  Scalar factor = Scalar(1) / (Scalar(2) * std::numbers::pi_v<Scalar> * detail::sinhc_pi(k));  // k / (2 sinh(k pi))
  for (int n = 1; n <= p; ++n) factor *= Scalar(4) / (Scalar(n) * Scalar(n));
  return factor * eta;
}

/// The normalized AvMPDF rho_{k,r} = chi_{k,r} / (2 pi C_0). Immutable after
/// construction and safe to share between threads.
template <typename Scalar>
class AvmDensity {
 public:
  explicit AvmDensity(const AvmPoint<Scalar>& point)
      : point_(point),
        table_(bessel_i_range(point.r)),
        c0_(avm_functionals(point).c0) {}

  const AvmPoint<Scalar>& point() const { return point_; }
  Scalar c0() const { return c0_; }
  Scalar normalization() const { return Scalar(2) * std::numbers::pi_v<Scalar> * c0_; }
  /// c = k / (2 pi C_0)
  Scalar flux_constant() const { return point_.k / normalization(); }

  Scalar chi(Scalar phi) const {
    if (point_.r == Scalar(0)) return Scalar(1);
    return detail::chi_from_table(point_, table_, phi);
  }
  Scalar operator()(Scalar phi) const { return chi(phi) / normalization(); }

  /// rho on the uniform grid phi_j = -pi + 2 pi j / m
  VectorX<Scalar> sample(int m) const {
    const VectorX<Scalar> grid = periodic_grid<Scalar>(m);
    VectorX<Scalar> values(m);
    for (int j = 0; j < m; ++j) values[j] = (*this)(grid[j]);
    return values;
  }

 private:
  AvmPoint<Scalar> point_;
  BesselTable<Scalar> table_;
  Scalar c0_;
};

template <typename Scalar>
AvmDensity<Scalar> avm_density(const AvmPoint<Scalar>& point) {
  return AvmDensity<Scalar>(point);
}

/// max_j |rho' + (r sin phi + k) rho - c| on an m-point grid, with rho'
/// from spectral differentiation of the samples and c = k / (2 pi C_0).
template <typename Scalar>
Scalar travelling_wave_residual(const AvmDensity<Scalar>& density, int m) {
  const VectorX<Scalar> grid = periodic_grid<Scalar>(m);
  const VectorX<Scalar> rho = density.sample(m);
  const VectorX<Scalar> drho = spectral_derivative<Scalar>(rho);
  const Scalar k = density.point().k;
  const Scalar r = density.point().r;
  const Scalar c = density.flux_constant();
  Scalar worst = 0;
  for (int j = 0; j < m; ++j) {
    worst = std::max(worst, std::abs(drho[j] + (r * std::sin(grid[j]) + k) * rho[j] - c));
  }
  return worst;
}

}  // namespace skmf
