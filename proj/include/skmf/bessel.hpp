#pragma once

// Modified Bessel functions of the first kind, integer order, real argument.
//
//   I_n(r) = (1/2pi) int_{-pi}^{pi} cos(n phi) exp(r cos phi) dphi
//          = sum_{p>=0} (r/2)^{n+2p} / (p! (n+p)!)
//
// Small arguments (|r| <= 30) are summed order by order from the power
// series, whose terms are all positive. Larger arguments use Miller's
// backward recurrence normalized by I_0 + 2 sum_{n>=1} I_n = e^r.
// Negative orders and arguments are folded with I_{-n} = I_n and
// I_n(-r) = (-1)^n I_n(r).

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace skmf {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Arguments above this use backward recurrence instead of the power series.
inline constexpr double kBesselSeriesLimit = 30.0;

/// Largest |r| for which e^{|r|}, and hence I_0(r), is finite.
template <typename Scalar>
Scalar bessel_overflow_limit() {
  return std::log(std::numeric_limits<Scalar>::max()) - Scalar(1);
}

/// Order past which I_n(r)/I_0(r) < 1e-16; never below 20.
inline int default_order_cutoff(double r) {
  const double a = std::abs(r);
  return std::max(20, static_cast<int>(std::ceil(a + 12.0 * std::sqrt(a) + 12.0)));
}

/// I_0(r) .. I_{n_max}(r) at a fixed argument.
template <typename Scalar>
struct BesselTable {
  Scalar r{0};
  int n_max{0};
  VectorX<Scalar> values;

  /// I_n(r) for any integer n; orders beyond n_max read as zero.
  Scalar operator()(int n) const {
    n = std::abs(n);
    return n > n_max ? Scalar(0) : values[n];
  }
};

namespace detail {

template <typename Scalar>
[[noreturn]] void throw_bessel_range(Scalar r) {
  std::ostringstream msg;
  msg << "bessel_i: |r| = " << static_cast<double>(std::abs(r))
      << " exceeds the floating-point exponent range (limit "
      << static_cast<double>(bessel_overflow_limit<Scalar>()) << ")";
  throw std::range_error(msg.str());
}

// I_n(x) for n >= 0, x >= 0 by direct summation of the power series.
template <typename Scalar>
Scalar bessel_i_series(int n, Scalar x) {
  const Scalar half = x / Scalar(2);
  Scalar lead = 1;
  for (int j = 1; j <= n; ++j) lead *= half / Scalar(j);
  if (lead == Scalar(0)) return Scalar(0);

  const Scalar tol = std::numeric_limits<Scalar>::epsilon() / Scalar(16);
  const Scalar half2 = half * half;
  Scalar term = lead;
  Scalar sum = lead;
  for (int p = 1; p < 100000; ++p) {
    term *= half2 / (Scalar(p) * Scalar(n + p));
    sum += term;
    if (term < tol * sum) break;
  }
  return sum;
}

// I_0(x) .. I_{n_max}(x) for x > 0 by Miller's backward recurrence
//   I_{n-1} = I_{n+1} + (2n/x) I_n,
// normalized with the generating function at t = 1.
template <typename Scalar>
VectorX<Scalar> bessel_i_miller(int n_max, Scalar x) {
  if (x > bessel_overflow_limit<Scalar>()) throw_bessel_range(x);

  const int top = std::max(n_max, default_order_cutoff(static_cast<double>(x)));
  int start = 2 * (top + static_cast<int>(std::sqrt(40.0 * top)));
  start += start % 2;

  constexpr double kRescale = 1e-200;
  VectorX<Scalar> values = VectorX<Scalar>::Zero(n_max + 1);
  Scalar upper = 0;  // I_{n+1}
  Scalar current = std::numeric_limits<Scalar>::min() * Scalar(1e20);  // I_n
  Scalar tail_sum = 0;  // sum_{m > n} I_m
  for (int n = start; n > 0; --n) {
    if (n <= n_max) values[n] = current;
    tail_sum += current;
    const Scalar lower = upper + (Scalar(2 * n) / x) * current;
    upper = current;
    current = lower;
    if (std::abs(current) > Scalar(1e200)) {
      current *= Scalar(kRescale);
      upper *= Scalar(kRescale);
      tail_sum *= Scalar(kRescale);
      values *= Scalar(kRescale);
    }
  }
  values[0] = current;
  const Scalar generating = current + Scalar(2) * tail_sum;  // = e^x up to scale
  const Scalar scale = std::exp(x) / generating;
  return values * scale;
}

}  // namespace detail

/// I_n(r) for all integer n and real r. Throws std::range_error when |r| is
/// beyond the exponent range.
template <typename Scalar>
Scalar bessel_i(int n, Scalar r) {
  n = std::abs(n);
  const Scalar x = std::abs(r);
  Scalar value;
  if (x == Scalar(0)) {
    value = n == 0 ? Scalar(1) : Scalar(0);
  } else if (x <= Scalar(kBesselSeriesLimit)) {
    value = detail::bessel_i_series(n, x);
  } else {
    value = detail::bessel_i_miller(n, x)[n];
  }
  return (r < Scalar(0) && n % 2 == 1) ? -value : value;
}

/// All orders 0..n_max at once; entries agree with bessel_i.
template <typename Scalar>
BesselTable<Scalar> bessel_i_range(int n_max, Scalar r) {
  if (n_max < 0) throw std::invalid_argument("bessel_i_range: n_max must be >= 0");
  BesselTable<Scalar> table{r, n_max, VectorX<Scalar>::Zero(n_max + 1)};
  const Scalar x = std::abs(r);
  if (x == Scalar(0)) {
    table.values[0] = 1;
  } else if (x <= Scalar(kBesselSeriesLimit)) {
    for (int n = 0; n <= n_max; ++n) table.values[n] = detail::bessel_i_series(n, x);
  } else {
    table.values = detail::bessel_i_miller(n_max, x);
  }
  if (r < Scalar(0)) {
    for (int n = 1; n <= n_max; n += 2) table.values[n] = -table.values[n];
  }
  return table;
}

/// Table truncated at default_order_cutoff(r).
template <typename Scalar>
BesselTable<Scalar> bessel_i_range(Scalar r) {
  return bessel_i_range(default_order_cutoff(static_cast<double>(r)), r);
}

}  // namespace skmf
