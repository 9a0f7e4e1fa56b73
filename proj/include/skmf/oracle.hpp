#pragma once

// Reference evaluations built only from the defining integrals and the ODE.
// Nothing here calls the series code in bessel.hpp or avm.hpp; tests and the
// `verify` subcommand compare the two.

#include "skmf/avm.hpp"
#include "skmf/quadrature.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace skmf::oracle {

/// Raised when the periodic ODE problem has no usable normalization.
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// I_n(r) as the m-node trapezoid mean of cos(n phi) e^{r cos phi}.
template <typename Scalar>
Scalar bessel_quadrature_oracle(int n, Scalar r, int m_nodes = 2048) {
  if (m_nodes < 16) throw std::invalid_argument("bessel_quadrature_oracle: m_nodes must be >= 16");
  return periodic_mean<Scalar>([&](Scalar phi) { return std::cos(Scalar(n) * phi) * std::exp(r * std::cos(phi)); },
                               m_nodes);
}

/// Periodic solution of chi' + (r sin phi + k) chi = k via variation of constants:
///   chi(phi) = kappa / (1 - e^{-2 pi kappa}) int_0^{2pi} e^{-kappa s} e^{r (cos phi - cos(phi - sgn s))} ds,
/// kappa = |k|, sgn = sign(k). The prefactor tends to 1/(2pi) as k -> 0.
template <typename Scalar>
class ChiOdeOracle {
 public:
  ChiOdeOracle(const AvmPoint<Scalar>& point, int panels = 64, int order = 16)
      : point_(point), rule_(order), panels_(panels) {
    const Scalar kappa = std::abs(point.k);
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    prefactor_ = kappa < Scalar(1e-12) ? Scalar(1) / two_pi : kappa / -std::expm1(-two_pi * kappa);
    if (!std::isfinite(prefactor_) || prefactor_ <= Scalar(0)) {
      throw DegenerateInput("chi ODE oracle: periodicity condition is singular");
    }
    direction_ = point.k < Scalar(0) ? Scalar(-1) : Scalar(1);
    // cache the quadrature nodes in s
    const Scalar h = two_pi / Scalar(panels_);
    for (int p = 0; p < panels_; ++p) {
      const Scalar mid = (Scalar(p) + Scalar(0.5)) * h;
      for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
        const Scalar s = mid + Scalar(0.5) * h * rule_.nodes[i];
        cos_s_.push_back(std::cos(s));
        sin_s_.push_back(direction_ * std::sin(s));
        weight_.push_back(Scalar(0.5) * h * rule_.weights[i] * std::exp(-kappa * s));
      }
    }
  }

  Scalar operator()(Scalar phi) const {
    const Scalar c = std::cos(phi);
    const Scalar s = std::sin(phi);
    const Scalar r = point_.r;
    Scalar sum = 0;
    for (std::size_t j = 0; j < weight_.size(); ++j) {
      // cos(phi - sgn s) = cos phi cos s + sgn sin phi sin s
      sum += weight_[j] * std::exp(r * (c - (c * cos_s_[j] + s * sin_s_[j])));
    }
    return prefactor_ * sum;
  }

  /// chi on the grid phi_j = -pi + 2 pi j / m
  VectorX<Scalar> sample(int m) const {
    const VectorX<Scalar> grid = periodic_grid<Scalar>(m);
    VectorX<Scalar> values(m);
    for (int j = 0; j < m; ++j) values[j] = (*this)(grid[j]);
    return values;
  }

 private:
  AvmPoint<Scalar> point_;
  GaussLegendre<Scalar> rule_;
  int panels_;
  Scalar prefactor_{0};
  Scalar direction_{1};
  std::vector<Scalar> cos_s_, sin_s_, weight_;
};

/// chi sampled on the m-node uniform grid.
template <typename Scalar>
VectorX<Scalar> avm_chi_ode_oracle(const AvmPoint<Scalar>& point, int m_nodes) {
  if (m_nodes < 64) throw std::invalid_argument("avm_chi_ode_oracle: m_nodes must be >= 64");
  return ChiOdeOracle<Scalar>(point).sample(m_nodes);
}

/// (C_n, S_n) by the trapezoid rule applied to ODE-oracle samples of chi.
template <typename Scalar>
FourierPair<Scalar> cs_quadrature_oracle(const AvmPoint<Scalar>& point, int n, int m_nodes = 2048) {
  const VectorX<Scalar> chi = avm_chi_ode_oracle(point, m_nodes);
  const VectorX<Scalar> grid = periodic_grid<Scalar>(m_nodes);
  Scalar c = 0, s = 0;
  for (int j = 0; j < m_nodes; ++j) {
    c += std::cos(Scalar(n) * grid[j]) * chi[j];
    s += std::sin(Scalar(n) * grid[j]) * chi[j];
  }
  return FourierPair<Scalar>(c / Scalar(m_nodes), s / Scalar(m_nodes));
}

/// C_0, C_1, S_1 and the normalized functionals, all from ODE-oracle quadrature.
template <typename Scalar>
AvmFunctionals<Scalar> functionals_quadrature_oracle(const AvmPoint<Scalar>& point, int m_nodes = 2048) {
  const VectorX<Scalar> chi = avm_chi_ode_oracle(point, m_nodes);
  const VectorX<Scalar> grid = periodic_grid<Scalar>(m_nodes);
  Scalar c0 = 0, c1 = 0, s1 = 0;
  for (int j = 0; j < m_nodes; ++j) {
    c0 += chi[j];
    c1 += std::cos(grid[j]) * chi[j];
    s1 += std::sin(grid[j]) * chi[j];
  }
  AvmFunctionals<Scalar> f;
  f.c0 = c0 / Scalar(m_nodes);
  f.c1 = c1 / Scalar(m_nodes);
  f.s1 = s1 / Scalar(m_nodes);
  f.cal_c1 = f.c1 / (point.r * f.c0);
  f.cal_s1 = -f.s1 / (point.r * f.c0);
  f.cal_t1 = f.cal_s1 / f.cal_c1;
  f.cal_r1 = detail::sign(point.k) * std::hypot(f.cal_c1, f.cal_s1);
  return f;
}

/// a_{k,p} from its defining alternating sum
///   (1/(p!)^2) sum_{n=-p}^{p} (-1)^{n+1} n^2/(n^2+k^2) C(2p, p+n),
/// accumulated in long double to absorb the cancellation.
inline long double akp_alternating_sum(long double k, int p) {
  if (p < 0) throw std::invalid_argument("akp_alternating_sum: p must be >= 0");
  if (p == 0) return 1.0L;
  std::vector<long double> binom(2 * p + 1);
  binom[0] = 1.0L;
  for (int j = 1; j <= 2 * p; ++j) binom[j] = binom[j - 1] * static_cast<long double>(2 * p - j + 1) / j;
  long double sum = 0.0L;
  for (int n = -p; n <= p; ++n) {
    if (n == 0) continue;  // weight n^2 vanishes, and 0/0 at k = 0
    const long double nn = static_cast<long double>(n) * n;
    const long double sign = (n % 2 == 0) ? -1.0L : 1.0L;
    sum += sign * nn / (nn + k * k) * binom[p + n];
  }
  long double factorial = 1.0L;
  for (int j = 2; j <= p; ++j) factorial *= j;
  return sum / (factorial * factorial);
}

}  // namespace skmf::oracle
